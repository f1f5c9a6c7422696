#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "paulictx/contextuality.hpp"

namespace paulictx {

/// Real-coefficient Pauli sum. Identity contributions live in identity_coeff;
/// terms holds the distinct non-identity operators, coeffs is index-aligned.
struct Hamiltonian {
    PauliSet terms;
    std::vector<double> coeffs;
    double identity_coeff = 0.0;

    bool operator==(const Hamiltonian& other) const = default;
};

/// Folds signs into coefficients, merges duplicate operators, routes identity
/// terms into identity_coeff. Zero-coefficient terms are kept unless pruned.
Hamiltonian make_hamiltonian(
    const std::vector<std::pair<double, SignedPauli>>& entries, bool prune_zero_terms = false);

/// Exact fraction for the removed-term count.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    }
    bool operator==(const Rational& other) const = default;
};

Rational make_rational(std::uint64_t num, std::uint64_t den);

enum class MeasureMethod {
    kExact,
    kGreedy,
};

const char* method_name(MeasureMethod method);

struct MeasureOptions {
    std::size_t exact_cap = 24;  // refuse exact searches beyond this many terms
    unsigned seed = 0;           // base seed for greedy tie-breaking
    int greedy_starts = 8;       // restarts; the best subset wins
};

/// Largest noncontextual subset, exact. Returns kept indices; ties resolve to
/// the lexicographically smallest index set. Throws SizeCapError above cap
/// (the greedy search handles large sets).
std::vector<std::size_t> max_noncontextual_subset(const PauliSet& s, std::size_t cap = 24);

/// Heuristic noncontextual subset (kept indices) built from one seeded pass:
/// a large commuting clique first (preferring the all-diagonal operators when
/// they are at least as many), then repeatedly the largest clique fully
/// anticommuting with everything chosen, finally any leftovers that commute
/// with the whole selection. The result is verified noncontextual.
std::vector<std::size_t> greedy_noncontextual(const PauliSet& s, unsigned seed = 0);

/// How much of the Hamiltonian must be removed to make the rest noncontextual,
/// under several weightings of the removed coefficients:
///   cd0            removed-term count over total terms
///   cd_values      (p, ratio) for each requested p >= 1, p = inf allowed
///   csep           the p = 2 ratio when requested
/// removed/kept describe one concrete decontextualizing split: the exact
/// minimum-cardinality one (exact) or the complement of the greedy subset.
/// With the exact method every reported ratio is the true minimum over all
/// decontextualizing sets.
struct MeasureReport {
    Rational cd0;
    std::vector<std::pair<double, double>> cd_values;
    std::optional<double> csep;
    std::vector<std::size_t> removed;
    std::vector<std::size_t> kept;
    MeasureMethod method = MeasureMethod::kExact;

    bool operator==(const MeasureReport& other) const = default;
};

/// ps lists the requested norms: p = 0 is implied (cd0 is always computed);
/// entries must be 0, in [1, inf), or infinity. Values in (0,1) are rejected:
/// they do not define a norm.
MeasureReport compute_measures(
    const Hamiltonian& h, const std::vector<double>& ps, MeasureMethod method,
    const MeasureOptions& options = {});

/// Single-norm convenience wrapper.
MeasureReport cd_p(
    const Hamiltonian& h, double p, MeasureMethod method, const MeasureOptions& options = {});

}  // namespace paulictx
