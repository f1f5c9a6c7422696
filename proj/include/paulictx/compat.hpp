#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "paulictx/pauli.hpp"

namespace paulictx {

/// An ordered collection of distinct, non-identity Pauli operators on a common
/// qubit count. Order is preserved so indices stay meaningful to callers.
class PauliSet {
  public:
    PauliSet() = default;

    /// Infers the qubit count from the first operator; requires nonempty input.
    explicit PauliSet(std::vector<PauliOp> ops);

    /// Allows an empty set; every operator must act on exactly n_qubits.
    PauliSet(std::size_t n_qubits, std::vector<PauliOp> ops);

    const std::vector<PauliOp>& ops() const {
        return ops_;
    }
    std::size_t size() const {
        return ops_.size();
    }
    bool empty() const {
        return ops_.empty();
    }
    std::size_t n_qubits() const {
        return n_;
    }
    const PauliOp& operator[](std::size_t i) const {
        return ops_[i];
    }

    std::optional<std::size_t> index_of(const PauliOp& op) const;
    bool contains(const PauliOp& op) const {
        return index_of(op).has_value();
    }

    bool operator==(const PauliSet& other) const = default;

  private:
    void validate() const;

    std::size_t n_ = 0;
    std::vector<PauliOp> ops_;
};

/// Undirected commutation graph over a PauliSet: vertices are the operators,
/// an edge means the pair commutes. No self loops.
class CompatibilityGraph {
  public:
    explicit CompatibilityGraph(PauliSet set);

    const PauliSet& set() const {
        return set_;
    }
    std::size_t size() const {
        return set_.size();
    }
    bool adjacent(std::size_t i, std::size_t j) const {
        return adj_[i][j];
    }
    const std::vector<bool>& row(std::size_t i) const {
        return adj_[i];
    }
    std::size_t edge_count() const;

  private:
    PauliSet set_;
    std::vector<std::vector<bool>> adj_;
};

inline CompatibilityGraph build_graph(PauliSet s) {
    return CompatibilityGraph(std::move(s));
}

/// Indices of operators that commute with every other operator in the set.
std::vector<std::size_t> universal_indices(const PauliSet& s);

/// Splits s into (rest, removed): removed holds the operators that commute
/// with all others, rest holds everything else in the original order.
/// A single pass suffices: universality of one operator never depends on
/// whether other universal operators stay or go.
std::pair<PauliSet, PauliSet> strip_universal(const PauliSet& s);

/// universal: indices of operators commuting with all others in the underlying
/// set; cliques: disjoint index groups covering the rest, commuting inside each
/// group and anticommuting across groups. Index base is documented per use.
struct CliquePartition {
    std::vector<std::size_t> universal;
    std::vector<std::vector<std::size_t>> cliques;

    bool operator==(const CliquePartition& other) const = default;
};

/// A failed transitivity instance: hub commutes with left and right, but left
/// and right anticommute.
struct TransitivityDefect {
    std::size_t hub = 0;
    std::size_t left = 0;
    std::size_t right = 0;

    bool operator==(const TransitivityDefect& other) const = default;
};

using CliquePartitionResult = std::variant<CliquePartition, TransitivityDefect>;

/// Partitions a stripped set into fully anticommuting commuting cliques, or
/// returns the defect that makes such a partition impossible. Expects input
/// from strip_universal; indices in the result refer to t.
CliquePartitionResult clique_partition(const PauliSet& t);

}  // namespace paulictx
