#include "paulictx/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace paulictx {

Hamiltonian make_hamiltonian(
    const std::vector<std::pair<double, SignedPauli>>& entries, bool prune_zero_terms) {
    double identity_coeff = 0.0;
    std::vector<PauliOp> order;
    std::map<PauliOp, double> sums;
    std::size_t n_qubits = 0;
    for (const auto& [coeff, term] : entries) {
        if (n_qubits == 0) {
            n_qubits = term.op.n_qubits();
        } else if (term.op.n_qubits() != n_qubits) {
            throw DimensionError(
                "make_hamiltonian: term " + format_pauli(term) + " acts on " +
                std::to_string(term.op.n_qubits()) + " qubits, expected " + std::to_string(n_qubits));
        }
        double signed_coeff = coeff * term.sign;
        if (term.op.is_identity()) {
            identity_coeff += signed_coeff;
            continue;
        }
        auto [it, fresh] = sums.emplace(term.op, signed_coeff);
        if (fresh) {
            order.push_back(term.op);
        } else {
            it->second += signed_coeff;
        }
    }
    std::vector<PauliOp> ops;
    std::vector<double> coeffs;
    for (const PauliOp& op : order) {
        double c = sums.at(op);
        if (prune_zero_terms && c == 0.0) {
            continue;
        }
        ops.push_back(op);
        coeffs.push_back(c);
    }
    Hamiltonian h;
    h.terms = PauliSet(n_qubits == 0 ? 1 : n_qubits, std::move(ops));
    h.coeffs = std::move(coeffs);
    h.identity_coeff = identity_coeff;
    return h;
}

Rational make_rational(std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
        throw ContractError("make_rational: zero denominator");
    }
    std::uint64_t g = std::gcd(num, den);
    return Rational{num / g, den / g};
}

const char* method_name(MeasureMethod method) {
    return method == MeasureMethod::kExact ? "exact" : "greedy";
}

namespace {

/// Commutation adjacency packed into one word per operator; usable for sets of
/// at most 64 operators (the exact searches are capped well below that).
struct MaskGraph {
    std::vector<std::uint64_t> adj;       // bit j: operators i and j commute
    std::vector<std::uint64_t> adj_self;  // adj with the diagonal bit added

    explicit MaskGraph(const PauliSet& s) {
        std::size_t n = s.size();
        adj.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (commutes(s[i], s[j])) {
                    adj[i] |= std::uint64_t{1} << j;
                    adj[j] |= std::uint64_t{1} << i;
                }
            }
        }
        adj_self = adj;
        for (std::size_t i = 0; i < n; ++i) {
            adj_self[i] |= std::uint64_t{1} << i;
        }
    }
};

bool subset_noncontextual(const MaskGraph& g, std::uint64_t subset) {
    // Drop operators commuting with the whole subset, then try to peel the
    // remainder into commuting cliques that fully anticommute across.
    std::uint64_t t = subset;
    for (std::uint64_t m = subset; m;) {
        std::size_t i = std::countr_zero(m);
        m &= m - 1;
        if ((subset & ~g.adj_self[i]) == 0) {
            t &= ~(std::uint64_t{1} << i);
        }
    }
    while (t) {
        std::size_t a = std::countr_zero(t);
        std::uint64_t clique = (g.adj[a] & t) | (std::uint64_t{1} << a);
        std::uint64_t outside = t & ~clique;
        for (std::uint64_t m = clique; m;) {
            std::size_t i = std::countr_zero(m);
            m &= m - 1;
            if ((clique & ~g.adj_self[i]) != 0) {
                return false;  // clique not internally commuting
            }
            if ((g.adj[i] & outside) != 0) {
                return false;  // commuting edge across cliques
            }
        }
        t = outside;
    }
    return true;
}

/// Include-first depth-first search for the maximum-weight noncontextual
/// subset. Strict improvement keeps the first optimum found, which is the
/// lexicographically smallest index set among ties.
struct ExactSearch {
    const MaskGraph& graph;
    const std::vector<double>& weights;
    std::vector<double> suffix;
    double best_weight = -1.0;
    std::uint64_t best_mask = 0;

    ExactSearch(const MaskGraph& g, const std::vector<double>& w) : graph(g), weights(w) {
        suffix.assign(w.size() + 1, 0.0);
        for (std::size_t i = w.size(); i-- > 0;) {
            suffix[i] = suffix[i + 1] + w[i];
        }
    }

    void run() {
        dfs(0, 0, 0.0);
    }

    void dfs(std::size_t idx, std::uint64_t chosen, double weight) {
        if (idx == weights.size()) {
            if (weight > best_weight) {
                best_weight = weight;
                best_mask = chosen;
            }
            return;
        }
        if (weight + suffix[idx] <= best_weight) {
            return;
        }
        std::uint64_t with = chosen | (std::uint64_t{1} << idx);
        if (subset_noncontextual(graph, with)) {
            dfs(idx + 1, with, weight + weights[idx]);
        }
        dfs(idx + 1, chosen, weight);
    }
};

std::vector<std::size_t> mask_to_indices(std::uint64_t mask) {
    std::vector<std::size_t> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

void check_exact_cap(std::size_t size, std::size_t cap, const char* what) {
    if (cap > 64) {
        throw ContractError(std::string(what) + ": cap above 64 is not supported");
    }
    if (size > cap) {
        throw SizeCapError(
            std::string(what) + ": " + std::to_string(size) + " operators exceed the exact cap of " +
            std::to_string(cap) + "; use the greedy method or raise the cap");
    }
}

std::uint64_t exact_best_mask(const PauliSet& s, const std::vector<double>& weights) {
    MaskGraph graph(s);
    std::uint64_t all = s.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << s.size()) - 1;
    if (subset_noncontextual(graph, all)) {
        return all;
    }
    ExactSearch search(graph, weights);
    search.run();
    return search.best_mask;
}

std::vector<std::size_t> greedy_max_clique(
    const std::vector<std::size_t>& pool, const CompatibilityGraph& graph, std::mt19937& rng) {
    std::vector<std::size_t> cand = pool;
    std::vector<std::size_t> clique;
    while (!cand.empty()) {
        std::size_t best_degree = 0;
        std::vector<std::size_t> ties;
        for (std::size_t v : cand) {
            std::size_t degree = 0;
            for (std::size_t u : cand) {
                if (u != v && graph.adjacent(v, u)) {
                    ++degree;
                }
            }
            if (ties.empty() || degree > best_degree) {
                best_degree = degree;
                ties.clear();
            }
            if (degree == best_degree) {
                ties.push_back(v);
            }
        }
        std::size_t pick = ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
        clique.push_back(pick);
        std::vector<std::size_t> next;
        for (std::size_t u : cand) {
            if (u != pick && graph.adjacent(pick, u)) {
                next.push_back(u);
            }
        }
        cand = std::move(next);
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

}  // namespace

std::vector<std::size_t> max_noncontextual_subset(const PauliSet& s, std::size_t cap) {
    check_exact_cap(s.size(), cap, "max_noncontextual_subset");
    std::vector<double> weights(s.size(), 1.0);
    return mask_to_indices(exact_best_mask(s, weights));
}

std::vector<std::size_t> greedy_noncontextual(const PauliSet& s, unsigned seed) {
    CompatibilityGraph graph{s};
    std::mt19937 rng(seed);
    std::size_t n = s.size();

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> first = greedy_max_clique(all, graph, rng);

    std::vector<std::size_t> diagonal;
    for (std::size_t i = 0; i < n; ++i) {
        bool has_x = false;
        for (std::uint64_t w : s[i].x_words()) {
            has_x |= w != 0;
        }
        if (!has_x) {
            diagonal.push_back(i);
        }
    }
    if (diagonal.size() >= first.size()) {
        first = diagonal;  // all-diagonal operators always commute pairwise
    }

    std::vector<bool> chosen(n, false);
    for (std::size_t i : first) {
        chosen[i] = true;
    }
    for (;;) {
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i]) {
                continue;
            }
            bool anticommutes_all = true;
            for (std::size_t j = 0; j < n && anticommutes_all; ++j) {
                if (chosen[j] && graph.adjacent(i, j)) {
                    anticommutes_all = false;
                }
            }
            if (anticommutes_all) {
                pool.push_back(i);
            }
        }
        if (pool.empty()) {
            break;
        }
        for (std::size_t i : greedy_max_clique(pool, graph, rng)) {
            chosen[i] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) {
            continue;
        }
        bool commutes_all = true;
        for (std::size_t j = 0; j < n && commutes_all; ++j) {
            if (chosen[j] && !graph.adjacent(i, j)) {
                commutes_all = false;
            }
        }
        if (commutes_all) {
            chosen[i] = true;
        }
    }

    std::vector<std::size_t> kept;
    std::vector<PauliOp> kept_ops;
    for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) {
            kept.push_back(i);
            kept_ops.push_back(s[i]);
        }
    }
    if (is_contextual(PauliSet(s.n_qubits(), std::move(kept_ops))).contextual()) {
        throw Error("internal: greedy selection is contextual");
    }
    return kept;
}

namespace {

double norm_power_sum(const std::vector<double>& coeffs, double p) {
    double total = 0.0;
    for (double c : coeffs) {
        total += std::pow(std::abs(c), p);
    }
    return total;
}

double ratio_for_removed(
    const Hamiltonian& h, const std::vector<std::size_t>& removed, double p) {
    if (std::isinf(p)) {
        double max_all = 0.0;
        for (double c : h.coeffs) {
            max_all = std::max(max_all, std::abs(c));
        }
        if (max_all == 0.0) {
            throw ContractError("cd_p: coefficient vector is zero");
        }
        double max_removed = 0.0;
        for (std::size_t i : removed) {
            max_removed = std::max(max_removed, std::abs(h.coeffs[i]));
        }
        return max_removed / max_all;
    }
    double total = norm_power_sum(h.coeffs, p);
    if (total == 0.0) {
        throw ContractError("cd_p: coefficient vector is zero");
    }
    double removed_weight = 0.0;
    for (std::size_t i : removed) {
        removed_weight += std::pow(std::abs(h.coeffs[i]), p);
    }
    return std::pow(std::min(1.0, removed_weight / total), 1.0 / p);
}

double exact_ratio(const Hamiltonian& h, double p, const MeasureOptions& options) {
    check_exact_cap(h.terms.size(), options.exact_cap, "cd_p");
    if (std::isinf(p)) {
        // Keeping every term above a cutoff is the loosest removal with that
        // cutoff; noncontextuality of kept sets is monotone in the cutoff.
        double max_all = 0.0;
        for (double c : h.coeffs) {
            max_all = std::max(max_all, std::abs(c));
        }
        if (max_all == 0.0) {
            throw ContractError("cd_p: coefficient vector is zero");
        }
        std::vector<double> cutoffs = {0.0};
        for (double c : h.coeffs) {
            cutoffs.push_back(std::abs(c));
        }
        std::sort(cutoffs.begin(), cutoffs.end());
        cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
        MaskGraph graph(h.terms);
        for (double cutoff : cutoffs) {
            std::uint64_t kept = 0;
            for (std::size_t i = 0; i < h.terms.size(); ++i) {
                if (std::abs(h.coeffs[i]) > cutoff) {
                    kept |= std::uint64_t{1} << i;
                }
            }
            if (subset_noncontextual(graph, kept)) {
                return cutoff / max_all;
            }
        }
        throw Error("internal: empty kept set must be noncontextual");
    }
    double total = norm_power_sum(h.coeffs, p);
    if (total == 0.0) {
        throw ContractError("cd_p: coefficient vector is zero");
    }
    std::vector<double> weights;
    weights.reserve(h.coeffs.size());
    for (double c : h.coeffs) {
        weights.push_back(std::pow(std::abs(c), p));
    }
    std::uint64_t kept = exact_best_mask(h.terms, weights);
    double kept_weight = 0.0;
    for (std::size_t i : mask_to_indices(kept)) {
        kept_weight += weights[i];
    }
    double removed_weight = std::max(0.0, total - kept_weight);
    return std::pow(std::min(1.0, removed_weight / total), 1.0 / p);
}

}  // namespace

MeasureReport compute_measures(
    const Hamiltonian& h, const std::vector<double>& ps, MeasureMethod method,
    const MeasureOptions& options) {
    std::vector<double> norms;
    for (double p : ps) {
        if (std::isnan(p) || p < 0.0 || (p > 0.0 && p < 1.0)) {
            throw ContractError(
                "cd_p: p must be 0, at least 1, or infinity; values in (0,1) do not define a norm");
        }
        if (std::find(norms.begin(), norms.end(), p) == norms.end()) {
            norms.push_back(p);
        }
    }

    std::size_t n = h.terms.size();
    MeasureReport report;
    report.method = method;

    std::vector<std::size_t> kept;
    if (method == MeasureMethod::kExact) {
        check_exact_cap(n, options.exact_cap, "compute_measures");
        kept = max_noncontextual_subset(h.terms, options.exact_cap);
    } else {
        int starts = std::max(1, options.greedy_starts);
        auto removed_sq = [&](const std::vector<std::size_t>& kept_set) {
            std::vector<bool> is_kept(n, false);
            for (std::size_t i : kept_set) {
                is_kept[i] = true;
            }
            double sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!is_kept[i]) {
                    sq += h.coeffs[i] * h.coeffs[i];
                }
            }
            return sq;
        };
        double best_sq = 0.0;
        for (int t = 0; t < starts; ++t) {
            std::vector<std::size_t> candidate =
                greedy_noncontextual(h.terms, options.seed + static_cast<unsigned>(t));
            double sq = removed_sq(candidate);
            bool better = t == 0 || candidate.size() > kept.size() ||
                          (candidate.size() == kept.size() &&
                           (sq < best_sq || (sq == best_sq && candidate < kept)));
            if (better) {
                kept = candidate;
                best_sq = sq;
            }
        }
    }

    std::vector<bool> is_kept(n, false);
    for (std::size_t i : kept) {
        is_kept[i] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_kept[i]) {
            report.removed.push_back(i);
        }
    }
    report.kept = kept;
    report.cd0 = n == 0 ? make_rational(0, 1) : make_rational(report.removed.size(), n);

    {
        std::vector<PauliOp> kept_ops;
        for (std::size_t i : kept) {
            kept_ops.push_back(h.terms[i]);
        }
        if (is_contextual(PauliSet(h.terms.n_qubits(), std::move(kept_ops))).contextual()) {
            throw Error("internal: reported kept subset is contextual");
        }
    }

    for (double p : norms) {
        if (p == 0.0) {
            continue;  // cd0 is always present
        }
        double value = method == MeasureMethod::kExact ? exact_ratio(h, p, options)
                                                       : ratio_for_removed(h, report.removed, p);
        report.cd_values.emplace_back(p, value);
        if (p == 2.0) {
            report.csep = value;
        }
    }
    return report;
}

MeasureReport cd_p(
    const Hamiltonian& h, double p, MeasureMethod method, const MeasureOptions& options) {
    return compute_measures(h, {p}, method, options);
}

}  // namespace paulictx
