#include "paulictx/compat.hpp"

#include <algorithm>
#include <unordered_set>

namespace paulictx {

PauliSet::PauliSet(std::vector<PauliOp> ops) {
    if (ops.empty()) {
        throw ContractError("PauliSet: cannot infer qubit count from an empty list");
    }
    n_ = ops.front().n_qubits();
    ops_ = std::move(ops);
    validate();
}

PauliSet::PauliSet(std::size_t n_qubits, std::vector<PauliOp> ops) : n_(n_qubits), ops_(std::move(ops)) {
    validate();
}

void PauliSet::validate() const {
    std::unordered_set<PauliOp, PauliOpHash> seen;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        const PauliOp& op = ops_[i];
        if (op.n_qubits() != n_) {
            throw DimensionError(
                "PauliSet: operator " + std::to_string(i) + " acts on " +
                std::to_string(op.n_qubits()) + " qubits, expected " + std::to_string(n_));
        }
        if (op.is_identity()) {
            throw ContractError("PauliSet: identity operator not allowed (index " + std::to_string(i) + ")");
        }
        if (!seen.insert(op).second) {
            throw ContractError("PauliSet: duplicate operator " + op.letters() + " (index " + std::to_string(i) + ")");
        }
    }
}

std::optional<std::size_t> PauliSet::index_of(const PauliOp& op) const {
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (ops_[i] == op) {
            return i;
        }
    }
    return std::nullopt;
}

CompatibilityGraph::CompatibilityGraph(PauliSet set) : set_(std::move(set)) {
    std::size_t n = set_.size();
    adj_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool c = commutes(set_[i], set_[j]);
            adj_[i][j] = c;
            adj_[j][i] = c;
        }
    }
}

std::size_t CompatibilityGraph::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            count += adj_[i][j];
        }
    }
    return count;
}

std::vector<std::size_t> universal_indices(const PauliSet& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool universal = true;
        for (std::size_t j = 0; j < s.size() && universal; ++j) {
            if (j != i && !commutes(s[i], s[j])) {
                universal = false;
            }
        }
        if (universal) {
            out.push_back(i);
        }
    }
    return out;
}

std::pair<PauliSet, PauliSet> strip_universal(const PauliSet& s) {
    std::vector<std::size_t> universal = universal_indices(s);
    std::vector<PauliOp> rest;
    std::vector<PauliOp> removed;
    std::size_t u = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (u < universal.size() && universal[u] == i) {
            removed.push_back(s[i]);
            ++u;
        } else {
            rest.push_back(s[i]);
        }
    }
    return {PauliSet(s.n_qubits(), std::move(rest)), PauliSet(s.n_qubits(), std::move(removed))};
}

CliquePartitionResult clique_partition(const PauliSet& t) {
    CompatibilityGraph graph(t);
    std::vector<std::vector<std::size_t>> cliques;
    // Processing operators in order keeps the invariant that the cliques built
    // so far commute inside and anticommute across; the first operator that
    // cannot be placed yields a concrete transitivity defect.
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<std::size_t> touching;
        for (std::size_t c = 0; c < cliques.size(); ++c) {
            for (std::size_t member : cliques[c]) {
                if (graph.adjacent(i, member)) {
                    touching.push_back(c);
                    break;
                }
            }
        }
        if (touching.empty()) {
            cliques.push_back({i});
            continue;
        }
        if (touching.size() >= 2) {
            std::size_t left = 0, right = 0;
            for (std::size_t member : cliques[touching[0]]) {
                if (graph.adjacent(i, member)) {
                    left = member;
                    break;
                }
            }
            for (std::size_t member : cliques[touching[1]]) {
                if (graph.adjacent(i, member)) {
                    right = member;
                    break;
                }
            }
            return TransitivityDefect{i, left, right};
        }
        std::vector<std::size_t>& clique = cliques[touching[0]];
        std::size_t friendly = 0;
        bool found_enemy = false;
        std::size_t enemy = 0;
        for (std::size_t member : clique) {
            if (graph.adjacent(i, member)) {
                friendly = member;
            } else if (!found_enemy) {
                found_enemy = true;
                enemy = member;
            }
        }
        if (found_enemy) {
            return TransitivityDefect{friendly, i, enemy};
        }
        clique.push_back(i);
    }
    return CliquePartition{{}, std::move(cliques)};
}

}  // namespace paulictx
