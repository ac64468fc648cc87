#ifndef FQCALC_ERRORS_HPP
#define FQCALC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fqcalc {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic preconditions.
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};
struct NotInvertible : Error {
    explicit NotInvertible(const std::string& what) : Error("not invertible: " + what) {}
};
struct ValuationOfZero : Error {
    ValuationOfZero() : Error("valuation of zero (or of a value with no tracked term)") {}
};

// The fixed root level of a rational-function computation cannot represent a
// required q-th root (or a fractional x-exponent).
struct LevelExhausted : Error {
    explicit LevelExhausted(const std::string& what) : Error("level exhausted: " + what) {}
};

// evaluate(): term valuations stopped increasing inside the tracked prefix.
struct DivergentEvaluation : Error {
    explicit DivergentEvaluation(const std::string& what) : Error("divergent evaluation: " + what) {}
};

// Coefficient matching hit an index whose scalar vanishes while the required
// right-hand side does not: the equation has no formal solution.
struct Inconsistent : Error {
    long index;
    explicit Inconsistent(long n)
        : Error("inconsistent at index " + std::to_string(n)), index(n) {}
};

// Common-multiple search walked past its configured degree cap.
struct DegreeBudgetExceeded : Error {
    explicit DegreeBudgetExceeded(int nu)
        : Error("degree budget exceeded at nu = " + std::to_string(nu)) {}
};

struct InvalidPartition : Error {
    explicit InvalidPartition(const std::string& what) : Error("invalid partition: " + what) {}
};

struct ZeroOperator : Error {
    ZeroOperator() : Error("all operator coefficients vanish") {}
};

struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : Error("parse error at offset " + std::to_string(pos) + ": " + what), position(pos) {}
};

// Mis-matched field descriptors, bad moduli, out-of-range configuration.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace fqcalc

#endif
