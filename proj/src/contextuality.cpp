#include "paulictx/contextuality.hpp"

#include <algorithm>

namespace paulictx {

const char* form_name(QuadrupleForm form) {
    switch (form) {
        case QuadrupleForm::kWedge:
            return "wedge";
        case QuadrupleForm::kChain:
            return "chain";
        case QuadrupleForm::kCycle:
            return "cycle";
    }
    return "?";
}

std::vector<std::pair<std::size_t, std::size_t>> form_edges(QuadrupleForm form) {
    switch (form) {
        case QuadrupleForm::kWedge:
            return {{0, 1}, {0, 2}};
        case QuadrupleForm::kChain:
            return {{0, 1}, {0, 2}, {1, 3}};
        case QuadrupleForm::kCycle:
            return {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    }
    return {};
}

bool form_matches(QuadrupleForm form, const std::array<PauliOp, 4>& labeled) {
    bool want[4][4] = {};
    for (auto [i, j] : form_edges(form)) {
        want[i][j] = want[j][i] = true;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (commutes(labeled[i], labeled[j]) != want[i][j]) {
                return false;
            }
        }
    }
    return true;
}

std::optional<ClassifiedQuadruple> classify_quadruple(
    const PauliOp& a, const PauliOp& b, const PauliOp& c, const PauliOp& d) {
    std::array<PauliOp, 4> ops = {a, b, c, d};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (ops[i] == ops[j]) {
                throw ContractError("classify_quadruple: operators must be distinct");
            }
            if (ops[i].n_qubits() != ops[j].n_qubits()) {
                throw DimensionError("classify_quadruple: operand qubit counts differ");
            }
        }
    }
    std::array<std::size_t, 4> perm = {0, 1, 2, 3};
    std::sort(perm.begin(), perm.end());
    do {
        std::array<PauliOp, 4> labeled = {ops[perm[0]], ops[perm[1]], ops[perm[2]], ops[perm[3]]};
        for (QuadrupleForm form : {QuadrupleForm::kWedge, QuadrupleForm::kChain, QuadrupleForm::kCycle}) {
            if (form_matches(form, labeled)) {
                return ClassifiedQuadruple{form, labeled};
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

std::array<PauliOp, 4> Verdict::witness_ops() const {
    if (!witness) {
        throw ContractError("Verdict::witness_ops: verdict is noncontextual");
    }
    return {
        set[witness->indices[0]],
        set[witness->indices[1]],
        set[witness->indices[2]],
        set[witness->indices[3]],
    };
}

Verdict is_contextual(const PauliSet& s) {
    std::vector<std::size_t> universal = universal_indices(s);
    std::vector<std::size_t> core;
    {
        std::size_t u = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (u < universal.size() && universal[u] == i) {
                ++u;
            } else {
                core.push_back(i);
            }
        }
    }
    std::vector<PauliOp> core_ops;
    core_ops.reserve(core.size());
    for (std::size_t i : core) {
        core_ops.push_back(s[i]);
    }
    PauliSet t(s.n_qubits(), std::move(core_ops));

    CliquePartitionResult result = clique_partition(t);
    if (auto* partition = std::get_if<CliquePartition>(&result)) {
        CliquePartition mapped;
        mapped.universal = universal;
        for (const std::vector<std::size_t>& clique : partition->cliques) {
            std::vector<std::size_t> ids;
            ids.reserve(clique.size());
            for (std::size_t i : clique) {
                ids.push_back(core[i]);
            }
            mapped.cliques.push_back(std::move(ids));
        }
        return Verdict{s, std::nullopt, std::move(mapped)};
    }

    const TransitivityDefect& defect = std::get<TransitivityDefect>(result);
    std::size_t a = core[defect.hub];
    std::size_t b = core[defect.left];
    std::size_t c = core[defect.right];
    // Something in the stripped set anticommutes with the hub; the lowest such
    // index keeps the witness deterministic.
    std::size_t d = s.size();
    for (std::size_t i : core) {
        if (!commutes(s[i], s[a])) {
            d = i;
            break;
        }
    }
    if (d == s.size()) {
        throw Error("internal: no anticommuting partner for a non-universal operator");
    }

    bool db = commutes(s[d], s[b]);
    bool dc = commutes(s[d], s[c]);
    QuadrupleForm form = QuadrupleForm::kWedge;
    if (db && dc) {
        form = QuadrupleForm::kCycle;
    } else if (db || dc) {
        form = QuadrupleForm::kChain;
        if (dc) {
            std::swap(b, c);  // pattern has the D edge on B
        }
    }
    ContextualWitness witness{{a, b, c, d}, form};
    if (!form_matches(form, {s[a], s[b], s[c], s[d]})) {
        throw Error("internal: witness quadruple does not match its pattern");
    }
    return Verdict{s, witness, std::nullopt};
}

bool assignment_closure_oracle(const PauliSet& s, std::size_t max_products) {
    if (s.size() >= 63) {
        throw ContractError("assignment_closure_oracle: set too large to enumerate assignments");
    }
    if (max_products == 0) {
        // The closure holds distinct unsigned operators, at most 4^n of them,
        // so the number of useful pair products is bounded by (4^n)^2. Sets
        // anyone can afford to enumerate stay far below this.
        std::size_t states = 1;
        for (std::size_t q = 0; q < s.n_qubits() && states < (std::size_t{1} << 40); ++q) {
            states *= 4;
        }
        max_products = states * states + 1024;
    }

    struct Entry {
        PauliOp op;
        int value;
    };

    const std::size_t assignments = std::size_t{1} << s.size();
    for (std::size_t bits = 0; bits < assignments; ++bits) {
        std::vector<Entry> entries;
        std::unordered_map<PauliOp, std::size_t, PauliOpHash> index;
        bool contradiction = false;
        std::size_t products = 0;

        auto insert = [&](const PauliOp& op, int value) {
            auto it = index.find(op);
            if (it != index.end()) {
                if (entries[it->second].value != value) {
                    contradiction = true;
                }
                return;
            }
            index.emplace(op, entries.size());
            entries.push_back(Entry{op, value});
        };

        for (std::size_t i = 0; i < s.size() && !contradiction; ++i) {
            insert(s[i], (bits >> i) & 1 ? -1 : +1);
        }

        // Semi-naive closure: pair each entry once against everything present
        // before it plus itself-forward; new entries join the queue.
        std::size_t frontier = 0;
        while (!contradiction && frontier < entries.size()) {
            std::size_t e = frontier++;
            for (std::size_t other = 0; other < entries.size() && !contradiction; ++other) {
                if (other == e) {
                    continue;
                }
                const Entry& p = entries[e];
                const Entry& q = entries[other];
                if (p.op == q.op || !commutes(p.op, q.op)) {
                    continue;
                }
                if (++products > max_products) {
                    throw OracleInconclusiveError("assignment_closure_oracle: product budget exhausted");
                }
                SignedPauli prod = commuting_product(SignedPauli{p.op, +1}, SignedPauli{q.op, +1});
                insert(prod.op, prod.sign * p.value * q.value);
            }
        }
        if (!contradiction) {
            return false;  // a consistent global assignment exists
        }
    }
    return true;
}

}  // namespace paulictx
