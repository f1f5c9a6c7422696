#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <unordered_map>

#include "paulictx/compat.hpp"

namespace paulictx {

/// The three commutation patterns a four-operator set can take when it forces
/// contradictory outcome assignments. Edges listed over role labels A,B,C,D;
/// every pattern has non-edges A-D and B-C.
///   kWedge: A-B, A-C            (path B-A-C plus the isolated vertex D)
///   kChain: A-B, A-C, B-D       (path C-A-B-D)
///   kCycle: A-B, A-C, B-D, C-D  (four-cycle A-B-D-C)
enum class QuadrupleForm {
    kWedge,
    kChain,
    kCycle,
};

const char* form_name(QuadrupleForm form);

/// Role-pair edges of the pattern, as index pairs into (A,B,C,D) = (0,1,2,3).
std::vector<std::pair<std::size_t, std::size_t>> form_edges(QuadrupleForm form);

/// True when the commutation graph of the four operators, taken in the given
/// role order, is exactly the pattern of the form.
bool form_matches(QuadrupleForm form, const std::array<PauliOp, 4>& labeled);

struct ClassifiedQuadruple {
    QuadrupleForm form;
    std::array<PauliOp, 4> labeled;  // in role order A,B,C,D
};

/// Tries all role assignments of the four distinct operators against the three
/// patterns; nullopt when none matches.
std::optional<ClassifiedQuadruple> classify_quadruple(
    const PauliOp& a, const PauliOp& b, const PauliOp& c, const PauliOp& d);

/// Four set indices in role order A,B,C,D plus the matched pattern.
struct ContextualWitness {
    std::array<std::size_t, 4> indices;
    QuadrupleForm form;

    bool operator==(const ContextualWitness& other) const = default;
};

/// Decision result. Exactly one of witness / certificate is set. Certificate
/// indices refer to the input set.
struct Verdict {
    PauliSet set;
    std::optional<ContextualWitness> witness;
    std::optional<CliquePartition> certificate;

    bool contextual() const {
        return witness.has_value();
    }
    std::array<PauliOp, 4> witness_ops() const;
};

/// Decides whether the set forces contradictory joint outcome assignments.
/// Contextual verdicts carry a four-operator witness; noncontextual verdicts
/// carry the universal indices plus the clique partition of the rest.
Verdict is_contextual(const PauliSet& s);

/// Joint outcome assignment: operator -> +1/-1.
using Assignment = std::unordered_map<PauliOp, int, PauliOpHash>;

/// Brute-force reference check: enumerates all 2^|s| assignments and closes
/// each under products of commuting pairs; contextual iff every assignment
/// reaches a contradiction. Exponential; meant for small sets.
/// max_products 0 means an automatic budget large enough for any valid input;
/// exceeding the budget throws OracleInconclusiveError.
bool assignment_closure_oracle(const PauliSet& s, std::size_t max_products = 0);

}  // namespace paulictx
