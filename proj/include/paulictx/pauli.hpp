#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "paulictx/errors.hpp"

namespace paulictx {

/// An n-qubit Pauli operator without sign, stored as one X bit and one Z bit
/// per qubit: (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. Bit q of word q/64 holds
/// qubit q; qubit 0 is the leftmost letter of the text form.
class PauliOp {
  public:
    PauliOp() = default;

    static PauliOp identity(std::size_t n_qubits);

    /// Builds from uppercase letters over {I,X,Y,Z}; no sign prefix allowed here.
    static PauliOp from_letters(std::string_view letters);

    std::size_t n_qubits() const {
        return n_;
    }

    bool x_bit(std::size_t qubit) const;
    bool z_bit(std::size_t qubit) const;
    void set_letter(std::size_t qubit, char letter);
    char letter(std::size_t qubit) const;
    std::string letters() const;

    bool is_identity() const;

    const std::vector<std::uint64_t>& x_words() const {
        return x_;
    }
    const std::vector<std::uint64_t>& z_words() const {
        return z_;
    }

    bool operator==(const PauliOp& other) const = default;

    /// Lexicographic by letter sequence (I < X < Y < Z), shorter strings first.
    bool operator<(const PauliOp& other) const;

  private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> x_;
    std::vector<std::uint64_t> z_;
};

struct PauliOpHash {
    std::size_t operator()(const PauliOp& p) const;
};

/// A Pauli operator with a real sign, e.g. -YY. The only sign values are +1 and -1.
struct SignedPauli {
    PauliOp op;
    int sign = +1;

    bool operator==(const SignedPauli& other) const = default;
};

/// Internal product form i^phase_exp * op with phase_exp in {0,1,2,3}.
/// Products of commuting factors always land on an even phase_exp.
struct PhasedPauli {
    PauliOp op;
    int phase_exp = 0;

    bool operator==(const PhasedPauli& other) const = default;
};

/// Parses an optional leading '+'/'-' followed by letters over {I,X,Y,Z}.
/// Error positions are 1-based within the given text.
SignedPauli parse_pauli(std::string_view text);

/// Canonical text: '-' prefix only for negative sign, then uppercase letters.
std::string format_pauli(const SignedPauli& p);

/// True when the operators commute, i.e. the number of qubit positions where
/// both act nontrivially with different letters is even.
bool commutes(const PauliOp& a, const PauliOp& b);

/// Full operator product including the accumulated power of i, so that
/// a.sign * b.sign * (a.op matrix)(b.op matrix) == i^phase_exp * (result op matrix).
PhasedPauli multiply(const SignedPauli& a, const SignedPauli& b);

/// Product of two commuting signed Paulis; the phase is then guaranteed real.
/// Throws ContractError when the operands anticommute.
SignedPauli commuting_product(const SignedPauli& a, const SignedPauli& b);

inline SignedPauli negated(const SignedPauli& p) {
    return SignedPauli{p.op, -p.sign};
}

}  // namespace paulictx
