#pragma once

#include <stdexcept>
#include <string>

namespace paulictx {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed textual input (Pauli strings, Hamiltonian files, serialized trees).
struct ParseError : Error {
    using Error::Error;
};

/// Operands act on different numbers of qubits.
struct DimensionError : Error {
    using Error::Error;
};

/// A documented precondition was violated by the caller.
struct ContractError : Error {
    using Error::Error;
};

/// Tree evaluation was given an assignment that misses a leaf operator.
struct IncompleteAssignmentError : Error {
    using Error::Error;
};

/// The brute-force assignment check exhausted its closure budget.
struct OracleInconclusiveError : Error {
    using Error::Error;
};

/// An exact search was requested on a set larger than the configured cap.
struct SizeCapError : Error {
    using Error::Error;
};

}  // namespace paulictx
