#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "paulictx/contextuality.hpp"

namespace paulictx {

/// A node whose children pairwise commute and multiply (as operators, signs
/// included) to the node itself. Leaves carry sign +1 and must come from the
/// measured universe. A leaf may appear several times across the tree.
struct DeterminingTree {
    SignedPauli node;
    std::vector<DeterminingTree> children;

    bool is_leaf() const {
        return children.empty();
    }

    bool operator==(const DeterminingTree& other) const = default;
    bool operator<(const DeterminingTree& other) const;
};

inline DeterminingTree leaf(const PauliOp& op) {
    return DeterminingTree{SignedPauli{op, +1}, {}};
}

/// Builds an internal node over the given children: checks pairwise
/// commutation and computes the node operator as their product.
DeterminingTree parent_of(std::vector<DeterminingTree> children);

enum class TreeDefectKind {
    kSiblingsAnticommute,
    kProductMismatch,
    kLeafOutsideUniverse,
    kLeafNegative,
    kQubitMismatch,
};

struct TreeDefect {
    TreeDefectKind kind;
    std::vector<std::size_t> path;  // child indices from the root to the offending node
    std::string detail;
};

/// Checks the defining properties against a universe of measurable operators;
/// nullopt means the tree is valid.
std::optional<TreeDefect> validate(const DeterminingTree& tree, const PauliSet& universe);

/// Leaf operator -> number of occurrences.
std::map<PauliOp, std::size_t> leaf_multiset(const DeterminingTree& tree);

using DeterminingSet = std::set<PauliOp>;

/// Leaves with odd multiplicity. The root outcome is the product of exactly
/// these leaf outcomes.
DeterminingSet determining_set(const DeterminingTree& tree);

/// Outcome of the (signed) root under the given leaf outcomes: the product of
/// the assigned values over the determining set. Missing leaf values throw
/// IncompleteAssignmentError.
int evaluate(const DeterminingTree& tree, const Assignment& assignment);

/// Rewrites every node to at most two children by cascading sibling prefixes
/// into intermediate product nodes. Root operator and leaf multiset are
/// preserved.
DeterminingTree binarize(const DeterminingTree& tree);

/// For f commuting with every leaf operator of a valid binary tree, rewrites
/// the tree (same root, same leaf multiset) so that every node equal to f.op
/// sits directly under the root. Throws ContractError when f anticommutes
/// with some leaf or the tree is not binary.
DeterminingTree hoist_universal(const DeterminingTree& tree, const SignedPauli& f);

/// Merges trees for +A and -A with equal determining sets into a tree for the
/// negative identity whose determining set is empty.
DeterminingTree merge_identity_witness(const DeterminingTree& plus_tree, const DeterminingTree& minus_tree);

/// Inverse of the merge: a negative-identity tree with empty determining set
/// splits into trees for +A and -A (in that order) with equal determining
/// sets. Non-binary roots are binarized first.
std::pair<DeterminingTree, DeterminingTree> split_identity_witness(const DeterminingTree& tree);

/// From binary trees for +A and -A sharing their determining set, and an
/// operator b inside that set, builds a tree for -b whose determining set is
/// exactly {b}: walking the root-to-b path, each step multiplies the previous
/// result by the sibling subtree.
DeterminingTree single_leaf_witness(
    const DeterminingTree& plus_tree, const DeterminingTree& minus_tree, const PauliOp& b);

/// Builds a negative-identity witness over four operators whose commutation
/// graph matches the given pattern (in role order A,B,C,D). Every leaf appears
/// an even number of times.
DeterminingTree witness_from_quadruple(
    QuadrupleForm form, const PauliOp& a, const PauliOp& b, const PauliOp& c, const PauliOp& d);

/// Children sorted recursively for deterministic serialization.
DeterminingTree canonicalized(const DeterminingTree& tree);

/// Indented text form, two spaces per depth, canonical sign prefix per node.
std::string to_text(const DeterminingTree& tree);
DeterminingTree tree_from_text(std::string_view text);

}  // namespace paulictx
