#include "paulictx/trees.hpp"

#include <algorithm>
#include <sstream>

namespace paulictx {

bool DeterminingTree::operator<(const DeterminingTree& other) const {
    if (node.op != other.node.op) {
        return node.op < other.node.op;
    }
    if (node.sign != other.node.sign) {
        return node.sign > other.node.sign;  // +1 before -1
    }
    return std::lexicographical_compare(
        children.begin(), children.end(), other.children.begin(), other.children.end());
}

DeterminingTree parent_of(std::vector<DeterminingTree> children) {
    if (children.empty()) {
        throw ContractError("parent_of: need at least one child");
    }
    for (std::size_t i = 0; i < children.size(); ++i) {
        for (std::size_t j = i + 1; j < children.size(); ++j) {
            if (!commutes(children[i].node.op, children[j].node.op)) {
                throw ContractError(
                    "parent_of: children " + format_pauli(children[i].node) + " and " +
                    format_pauli(children[j].node) + " anticommute");
            }
        }
    }
    SignedPauli product = children.front().node;
    for (std::size_t i = 1; i < children.size(); ++i) {
        product = commuting_product(product, children[i].node);
    }
    return DeterminingTree{product, std::move(children)};
}

namespace {

std::string path_string(const std::vector<std::size_t>& path) {
    std::string out = "root";
    for (std::size_t i : path) {
        out += "." + std::to_string(i);
    }
    return out;
}

std::optional<TreeDefect> validate_node(
    const DeterminingTree& tree, const PauliSet& universe, std::vector<std::size_t>& path) {
    if (tree.node.op.n_qubits() != universe.n_qubits()) {
        return TreeDefect{
            TreeDefectKind::kQubitMismatch, path,
            "node " + format_pauli(tree.node) + " acts on " +
                std::to_string(tree.node.op.n_qubits()) + " qubits, universe has " +
                std::to_string(universe.n_qubits())};
    }
    if (tree.is_leaf()) {
        if (tree.node.sign != +1) {
            return TreeDefect{
                TreeDefectKind::kLeafNegative, path,
                "leaf " + format_pauli(tree.node) + " at " + path_string(path) + " carries a negative sign"};
        }
        if (!universe.contains(tree.node.op)) {
            return TreeDefect{
                TreeDefectKind::kLeafOutsideUniverse, path,
                "leaf " + tree.node.op.letters() + " at " + path_string(path) + " is not a measurable operator"};
        }
        return std::nullopt;
    }
    for (std::size_t i = 0; i < tree.children.size(); ++i) {
        for (std::size_t j = i + 1; j < tree.children.size(); ++j) {
            if (!commutes(tree.children[i].node.op, tree.children[j].node.op)) {
                return TreeDefect{
                    TreeDefectKind::kSiblingsAnticommute, path,
                    "children " + format_pauli(tree.children[i].node) + " and " +
                        format_pauli(tree.children[j].node) + " of " + path_string(path) +
                        " anticommute"};
            }
        }
    }
    SignedPauli product = tree.children.front().node;
    for (std::size_t i = 1; i < tree.children.size(); ++i) {
        product = commuting_product(product, tree.children[i].node);
    }
    if (product != tree.node) {
        return TreeDefect{
            TreeDefectKind::kProductMismatch, path,
            "node " + format_pauli(tree.node) + " at " + path_string(path) +
                " is not the product of its children (" + format_pauli(product) + ")"};
    }
    for (std::size_t i = 0; i < tree.children.size(); ++i) {
        path.push_back(i);
        if (auto defect = validate_node(tree.children[i], universe, path)) {
            return defect;
        }
        path.pop_back();
    }
    return std::nullopt;
}

void collect_leaves(const DeterminingTree& tree, std::map<PauliOp, std::size_t>& counts) {
    if (tree.is_leaf()) {
        ++counts[tree.node.op];
        return;
    }
    for (const DeterminingTree& child : tree.children) {
        collect_leaves(child, counts);
    }
}

bool is_binary(const DeterminingTree& tree) {
    if (tree.children.size() > 2) {
        return false;
    }
    return std::all_of(tree.children.begin(), tree.children.end(), [](const DeterminingTree& c) {
        return is_binary(c);
    });
}

/// Detaches every subtree whose node operator equals target and rebuilds what
/// remains. Returns the detached subtrees plus the remaining subtree, if any;
/// remaining node values are recomputed, single surviving children spliced up.
void strip_target(
    const DeterminingTree& tree, const PauliOp& target, std::vector<DeterminingTree>& hoisted,
    std::optional<DeterminingTree>& rest) {
    if (tree.node.op == target) {
        hoisted.push_back(tree);
        rest = std::nullopt;
        return;
    }
    if (tree.is_leaf()) {
        rest = tree;
        return;
    }
    std::vector<DeterminingTree> kept;
    for (const DeterminingTree& child : tree.children) {
        std::optional<DeterminingTree> sub;
        strip_target(child, target, hoisted, sub);
        if (sub) {
            kept.push_back(std::move(*sub));
        }
    }
    if (kept.empty()) {
        rest = std::nullopt;
    } else if (kept.size() == 1) {
        rest = std::move(kept.front());
    } else {
        rest = parent_of(std::move(kept));
    }
}

}  // namespace

std::optional<TreeDefect> validate(const DeterminingTree& tree, const PauliSet& universe) {
    std::vector<std::size_t> path;
    return validate_node(tree, universe, path);
}

std::map<PauliOp, std::size_t> leaf_multiset(const DeterminingTree& tree) {
    std::map<PauliOp, std::size_t> counts;
    collect_leaves(tree, counts);
    return counts;
}

DeterminingSet determining_set(const DeterminingTree& tree) {
    DeterminingSet out;
    for (const auto& [op, count] : leaf_multiset(tree)) {
        if (count % 2 == 1) {
            out.insert(op);
        }
    }
    return out;
}

int evaluate(const DeterminingTree& tree, const Assignment& assignment) {
    std::map<PauliOp, std::size_t> counts = leaf_multiset(tree);
    int value = +1;
    for (const auto& [op, count] : counts) {
        auto it = assignment.find(op);
        if (it == assignment.end()) {
            throw IncompleteAssignmentError("evaluate: no value assigned to leaf " + op.letters());
        }
        if (it->second != +1 && it->second != -1) {
            throw ContractError("evaluate: assigned values must be +1 or -1");
        }
        if (count % 2 == 1) {
            value *= it->second;
        }
    }
    return value;
}

DeterminingTree binarize(const DeterminingTree& tree) {
    if (tree.is_leaf()) {
        return tree;
    }
    std::vector<DeterminingTree> children;
    children.reserve(tree.children.size());
    for (const DeterminingTree& child : tree.children) {
        children.push_back(binarize(child));
    }
    if (children.size() <= 2) {
        return DeterminingTree{tree.node, std::move(children)};
    }
    DeterminingTree last = std::move(children.back());
    children.pop_back();
    DeterminingTree prefix = binarize(parent_of(std::move(children)));
    return DeterminingTree{tree.node, {std::move(prefix), std::move(last)}};
}

DeterminingTree hoist_universal(const DeterminingTree& tree, const SignedPauli& f) {
    for (const auto& [op, count] : leaf_multiset(tree)) {
        if (!commutes(op, f.op)) {
            throw ContractError(
                "hoist_universal: " + format_pauli(f) + " anticommutes with leaf " + op.letters());
        }
    }
    if (!is_binary(tree)) {
        throw ContractError("hoist_universal: tree must be binary (run binarize first)");
    }
    if (tree.is_leaf()) {
        return tree;
    }
    // Detach matching subtrees and reattach them directly under the root.
    // Rebuilding the remainder can make a recomputed node coincide with f, so
    // iterate until the shape settles; each pass shrinks the remainder.
    DeterminingTree out = tree;
    for (;;) {
        std::vector<DeterminingTree> hoisted;
        std::vector<DeterminingTree> kept;
        for (const DeterminingTree& child : out.children) {
            if (child.node.op == f.op) {
                hoisted.push_back(child);
                continue;
            }
            std::optional<DeterminingTree> rest;
            strip_target(child, f.op, hoisted, rest);
            if (rest) {
                kept.push_back(std::move(*rest));
            }
        }
        if (hoisted.empty()) {
            return out;  // nothing matched anywhere; keep the original shape
        }
        std::vector<DeterminingTree> children = std::move(hoisted);
        for (DeterminingTree& k : kept) {
            children.push_back(std::move(k));
        }
        DeterminingTree next{out.node, std::move(children)};
        SignedPauli product = next.children.front().node;
        for (std::size_t i = 1; i < next.children.size(); ++i) {
            product = commuting_product(product, next.children[i].node);
        }
        if (product != next.node) {
            throw Error("internal: hoist rewrite changed the root operator");
        }
        if (next == out) {
            return out;
        }
        out = std::move(next);
    }
}

DeterminingTree merge_identity_witness(
    const DeterminingTree& plus_tree, const DeterminingTree& minus_tree) {
    if (plus_tree.node.sign != +1 || minus_tree.node.sign != -1 ||
        plus_tree.node.op != minus_tree.node.op) {
        throw ContractError(
            "merge_identity_witness: roots must be +A and -A, got " +
            format_pauli(plus_tree.node) + " and " + format_pauli(minus_tree.node));
    }
    if (determining_set(plus_tree) != determining_set(minus_tree)) {
        throw ContractError("merge_identity_witness: determining sets differ");
    }
    SignedPauli root{PauliOp::identity(plus_tree.node.op.n_qubits()), -1};
    return DeterminingTree{root, {plus_tree, minus_tree}};
}

std::pair<DeterminingTree, DeterminingTree> split_identity_witness(const DeterminingTree& tree) {
    if (!tree.node.op.is_identity() || tree.node.sign != -1) {
        throw ContractError(
            "split_identity_witness: root must be the negative identity, got " +
            format_pauli(tree.node));
    }
    if (!determining_set(tree).empty()) {
        throw ContractError("split_identity_witness: determining set is not empty");
    }
    DeterminingTree work = tree.children.size() == 2 ? tree : binarize(tree);
    if (work.children.size() != 2) {
        throw ContractError("split_identity_witness: root does not split into two children");
    }
    DeterminingTree first = work.children[0];
    DeterminingTree second = work.children[1];
    if (first.node.op != second.node.op || first.node.sign != -second.node.sign) {
        throw ContractError("split_identity_witness: children are not +A and -A for a common A");
    }
    if (first.node.sign < 0) {
        std::swap(first, second);
    }
    if (determining_set(first) != determining_set(second)) {
        throw ContractError("split_identity_witness: children determining sets differ");
    }
    return {std::move(first), std::move(second)};
}

namespace {

/// Root-to-leaf path to the first leaf (in child order) whose operator is b.
bool find_leaf_path(const DeterminingTree& tree, const PauliOp& b, std::vector<const DeterminingTree*>& path) {
    path.push_back(&tree);
    if (tree.is_leaf() && tree.node.op == b) {
        return true;
    }
    for (const DeterminingTree& child : tree.children) {
        if (find_leaf_path(child, b, path)) {
            return true;
        }
    }
    path.pop_back();
    return false;
}

}  // namespace

DeterminingTree single_leaf_witness(
    const DeterminingTree& plus_tree, const DeterminingTree& minus_tree, const PauliOp& b) {
    if (plus_tree.node.sign != +1 || minus_tree.node.sign != -1 ||
        plus_tree.node.op != minus_tree.node.op) {
        throw ContractError(
            "single_leaf_witness: roots must be +A and -A, got " + format_pauli(plus_tree.node) +
            " and " + format_pauli(minus_tree.node));
    }
    DeterminingSet shared = determining_set(plus_tree);
    if (shared != determining_set(minus_tree)) {
        throw ContractError("single_leaf_witness: determining sets differ");
    }
    if (!shared.contains(b)) {
        throw ContractError("single_leaf_witness: " + b.letters() + " is not in the shared determining set");
    }
    DeterminingTree plus = binarize(plus_tree);
    DeterminingTree minus = binarize(minus_tree);

    std::vector<const DeterminingTree*> path;
    if (!find_leaf_path(plus, b, path)) {
        throw Error("internal: determining-set member has no leaf occurrence");
    }

    // Walk down the path: multiplying the tree for -C_{i-1} by the sibling
    // subtree of C_i yields a tree for -C_i; the leaf end gives -b.
    DeterminingTree result = minus;
    for (std::size_t depth = 1; depth < path.size(); ++depth) {
        const DeterminingTree* parent = path[depth - 1];
        const DeterminingTree* step = path[depth];
        if (parent->children.size() == 1) {
            continue;  // degenerate chain node: parent equals its only child
        }
        const DeterminingTree& sibling =
            &parent->children[0] == step ? parent->children[1] : parent->children[0];
        DeterminingTree next = parent_of({result, sibling});
        if (next.node != negated(step->node)) {
            throw Error("internal: path step did not produce the negated node");
        }
        result = std::move(next);
    }
    return result;
}

DeterminingTree witness_from_quadruple(
    QuadrupleForm form, const PauliOp& a, const PauliOp& b, const PauliOp& c, const PauliOp& d) {
    std::array<PauliOp, 4> labeled = {a, b, c, d};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (labeled[i] == labeled[j]) {
                throw ContractError("witness_from_quadruple: operators must be distinct");
            }
        }
    }
    if (!form_matches(form, labeled)) {
        throw ContractError(
            std::string("witness_from_quadruple: operators do not match the ") + form_name(form) +
            " pattern in the order given");
    }

    DeterminingTree one;
    DeterminingTree other;
    switch (form) {
        case QuadrupleForm::kWedge:
            // ((A*B)*D)*C and ((A*C)*D)*B multiply to the same operator with
            // opposite signs: commuting B past D and C flips exactly one sign.
            one = parent_of({parent_of({parent_of({leaf(a), leaf(b)}), leaf(d)}), leaf(c)});
            other = parent_of({parent_of({parent_of({leaf(a), leaf(c)}), leaf(d)}), leaf(b)});
            break;
        case QuadrupleForm::kChain:
            // ((A*C)*D) * ((B*D)*C) collapses to -(A*B).
            one = parent_of({leaf(a), leaf(b)});
            other = parent_of({
                parent_of({parent_of({leaf(a), leaf(c)}), leaf(d)}),
                parent_of({parent_of({leaf(b), leaf(d)}), leaf(c)}),
            });
            break;
        case QuadrupleForm::kCycle:
            // (A*C)*(D*B) and (A*B)*(D*C) differ exactly by a sign.
            one = parent_of({parent_of({leaf(a), leaf(c)}), parent_of({leaf(d), leaf(b)})});
            other = parent_of({parent_of({leaf(a), leaf(b)}), parent_of({leaf(d), leaf(c)})});
            break;
    }
    if (one.node.op != other.node.op || one.node.sign != -other.node.sign) {
        throw Error("internal: quadruple construction lost the sign flip");
    }
    if (one.node.sign < 0) {
        std::swap(one, other);
    }
    DeterminingTree witness = merge_identity_witness(one, other);
    if (!determining_set(witness).empty()) {
        throw Error("internal: quadruple witness has a nonempty determining set");
    }
    return witness;
}

DeterminingTree canonicalized(const DeterminingTree& tree) {
    DeterminingTree out{tree.node, {}};
    out.children.reserve(tree.children.size());
    for (const DeterminingTree& child : tree.children) {
        out.children.push_back(canonicalized(child));
    }
    std::sort(out.children.begin(), out.children.end());
    return out;
}

namespace {

void append_text(const DeterminingTree& tree, std::size_t depth, std::string& out) {
    out.append(depth * 2, ' ');
    out += format_pauli(tree.node);
    out += '\n';
    for (const DeterminingTree& child : tree.children) {
        append_text(child, depth + 1, out);
    }
}

struct FlatNode {
    std::size_t depth;
    SignedPauli node;
};

DeterminingTree assemble(const std::vector<FlatNode>& items, std::size_t& pos, std::size_t depth) {
    DeterminingTree node{items[pos].node, {}};
    ++pos;
    while (pos < items.size() && items[pos].depth == depth + 1) {
        node.children.push_back(assemble(items, pos, depth + 1));
    }
    if (pos < items.size() && items[pos].depth > depth + 1) {
        throw ParseError("tree parse error: indentation jumps more than one level");
    }
    return node;
}

}  // namespace

std::string to_text(const DeterminingTree& tree) {
    std::string out;
    append_text(tree, 0, out);
    return out;
}

DeterminingTree tree_from_text(std::string_view text) {
    std::vector<FlatNode> items;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.find_first_not_of(' ') == std::string_view::npos) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        std::size_t spaces = line.find_first_not_of(' ');
        if (spaces % 2 != 0) {
            throw ParseError(
                "tree parse error at line " + std::to_string(line_no) + ": odd indentation");
        }
        items.push_back(FlatNode{spaces / 2, parse_pauli(line.substr(spaces))});
        if (end == text.size()) {
            break;
        }
    }
    if (items.empty()) {
        throw ParseError("tree parse error: no nodes");
    }
    if (items.front().depth != 0) {
        throw ParseError("tree parse error: root must not be indented");
    }
    std::size_t pos = 0;
    DeterminingTree root = assemble(items, pos, 0);
    if (pos != items.size()) {
        throw ParseError("tree parse error: more than one root");
    }
    return root;
}

}  // namespace paulictx
