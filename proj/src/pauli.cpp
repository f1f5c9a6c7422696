#include "paulictx/pauli.hpp"

#include <bit>

namespace paulictx {

namespace {

std::size_t word_count(std::size_t n) {
    return (n + 63) / 64;
}

void check_same_dims(const PauliOp& a, const PauliOp& b, const char* what) {
    if (a.n_qubits() != b.n_qubits()) {
        throw DimensionError(
            std::string(what) + ": operand qubit counts differ (" + std::to_string(a.n_qubits()) +
            " vs " + std::to_string(b.n_qubits()) + ")");
    }
}

std::size_t popcount_and(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::size_t total = 0;
    for (std::size_t w = 0; w < a.size(); ++w) {
        total += std::popcount(a[w] & b[w]);
    }
    return total;
}

}  // namespace

PauliOp PauliOp::identity(std::size_t n_qubits) {
    if (n_qubits == 0) {
        throw ContractError("PauliOp: qubit count must be positive");
    }
    PauliOp p;
    p.n_ = n_qubits;
    p.x_.assign(word_count(n_qubits), 0);
    p.z_.assign(word_count(n_qubits), 0);
    return p;
}

PauliOp PauliOp::from_letters(std::string_view letters) {
    if (letters.empty()) {
        throw ParseError("pauli parse error: empty operator");
    }
    PauliOp p = identity(letters.size());
    for (std::size_t q = 0; q < letters.size(); ++q) {
        char c = letters[q];
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw ParseError(
                "pauli parse error at position " + std::to_string(q + 1) + ": invalid letter '" +
                std::string(1, c) + "'");
        }
        p.set_letter(q, c);
    }
    return p;
}

bool PauliOp::x_bit(std::size_t qubit) const {
    return (x_[qubit / 64] >> (qubit % 64)) & 1u;
}

bool PauliOp::z_bit(std::size_t qubit) const {
    return (z_[qubit / 64] >> (qubit % 64)) & 1u;
}

void PauliOp::set_letter(std::size_t qubit, char letter) {
    std::uint64_t mask = std::uint64_t{1} << (qubit % 64);
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    switch (letter) {
        case 'I':
            break;
        case 'X':
            x = 1;
            break;
        case 'Y':
            x = 1;
            z = 1;
            break;
        case 'Z':
            z = 1;
            break;
        default:
            throw ContractError(std::string("PauliOp::set_letter: invalid letter '") + letter + "'");
    }
    x_[qubit / 64] = (x_[qubit / 64] & ~mask) | (x ? mask : 0);
    z_[qubit / 64] = (z_[qubit / 64] & ~mask) | (z ? mask : 0);
}

char PauliOp::letter(std::size_t qubit) const {
    bool x = x_bit(qubit);
    bool z = z_bit(qubit);
    if (x && z) {
        return 'Y';
    }
    if (x) {
        return 'X';
    }
    if (z) {
        return 'Z';
    }
    return 'I';
}

std::string PauliOp::letters() const {
    std::string out(n_, 'I');
    for (std::size_t q = 0; q < n_; ++q) {
        out[q] = letter(q);
    }
    return out;
}

bool PauliOp::is_identity() const {
    for (std::size_t w = 0; w < x_.size(); ++w) {
        if (x_[w] != 0 || z_[w] != 0) {
            return false;
        }
    }
    return true;
}

bool PauliOp::operator<(const PauliOp& other) const {
    if (n_ != other.n_) {
        return n_ < other.n_;
    }
    for (std::size_t q = 0; q < n_; ++q) {
        char a = letter(q);
        char b = other.letter(q);
        if (a != b) {
            return a < b;
        }
    }
    return false;
}

std::size_t PauliOpHash::operator()(const PauliOp& p) const {
    std::size_t h = std::hash<std::size_t>{}(p.n_qubits());
    auto mix = [&h](std::uint64_t v) {
        h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (std::uint64_t w : p.x_words()) {
        mix(w);
    }
    for (std::uint64_t w : p.z_words()) {
        mix(w ^ 0x5851f42d4c957f2dull);
    }
    return h;
}

SignedPauli parse_pauli(std::string_view text) {
    if (text.empty()) {
        throw ParseError("pauli parse error: empty operator");
    }
    int sign = +1;
    std::size_t offset = 0;
    if (text[0] == '+' || text[0] == '-') {
        sign = text[0] == '-' ? -1 : +1;
        offset = 1;
    }
    std::string_view body = text.substr(offset);
    if (body.empty()) {
        throw ParseError("pauli parse error: sign without letters");
    }
    PauliOp op = PauliOp::identity(body.size());
    for (std::size_t q = 0; q < body.size(); ++q) {
        char c = body[q];
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw ParseError(
                "pauli parse error at position " + std::to_string(offset + q + 1) +
                ": invalid letter '" + std::string(1, c) + "'");
        }
        op.set_letter(q, c);
    }
    return SignedPauli{op, sign};
}

std::string format_pauli(const SignedPauli& p) {
    std::string out;
    if (p.sign < 0) {
        out += '-';
    }
    out += p.op.letters();
    return out;
}

bool commutes(const PauliOp& a, const PauliOp& b) {
    check_same_dims(a, b, "commutes");
    std::size_t crossings =
        popcount_and(a.x_words(), b.z_words()) + popcount_and(a.z_words(), b.x_words());
    return crossings % 2 == 0;
}

PhasedPauli multiply(const SignedPauli& a, const SignedPauli& b) {
    check_same_dims(a.op, b.op, "multiply");
    std::size_t words = a.op.x_words().size();
    PauliOp out = PauliOp::identity(a.op.n_qubits());
    // Writing each letter as i^(x&z) X^x Z^z, the per-qubit phase of a*b is
    // x1*z1 + x2*z2 - x3*z3 + 2*z1*x2 (mod 4) where (x3,z3) is the XOR.
    long phase = 0;
    std::vector<std::uint64_t> x3(words), z3(words);
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t x1 = a.op.x_words()[w];
        std::uint64_t z1 = a.op.z_words()[w];
        std::uint64_t x2 = b.op.x_words()[w];
        std::uint64_t z2 = b.op.z_words()[w];
        x3[w] = x1 ^ x2;
        z3[w] = z1 ^ z2;
        phase += std::popcount(x1 & z1);
        phase += std::popcount(x2 & z2);
        phase -= std::popcount(x3[w] & z3[w]);
        phase += 2 * std::popcount(z1 & x2);
    }
    if (a.sign < 0) {
        phase += 2;
    }
    if (b.sign < 0) {
        phase += 2;
    }
    for (std::size_t q = 0; q < a.op.n_qubits(); ++q) {
        bool x = (x3[q / 64] >> (q % 64)) & 1u;
        bool z = (z3[q / 64] >> (q % 64)) & 1u;
        out.set_letter(q, x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
    }
    return PhasedPauli{out, static_cast<int>(((phase % 4) + 4) % 4)};
}

SignedPauli commuting_product(const SignedPauli& a, const SignedPauli& b) {
    if (!commutes(a.op, b.op)) {
        throw ContractError(
            "commuting_product: operands anticommute (" + format_pauli(a) + ", " + format_pauli(b) +
            ")");
    }
    PhasedPauli prod = multiply(a, b);
    if (prod.phase_exp != 0 && prod.phase_exp != 2) {
        throw Error("internal: commuting product produced an imaginary phase");
    }
    return SignedPauli{prod.op, prod.phase_exp == 0 ? +1 : -1};
}

}  // namespace paulictx
