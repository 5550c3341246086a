#ifndef ARKS_ERRORS_HPP_
#define ARKS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace arks {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A coefficient that must be strictly positive is not.
struct NonPositiveCoefficient : Error {
    std::string field;
    explicit NonPositiveCoefficient(const std::string& f)
        : Error("coefficient must be strictly positive: " + f), field(f) {}
};

// gamma0 > gamma1 violates the production envelope ordering.
struct GammaOrderViolation : Error {
    GammaOrderViolation() : Error("gamma0 must not exceed gamma1") {}
};

// An argument left the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Fields defined on different grids were combined.
struct GridMismatch : Error {
    GridMismatch() : Error("fields do not share a grid") {}
};

// A field that must be nonnegative carries a cell below -tolerance.
struct NegativeValue : Error {
    explicit NegativeValue(const std::string& msg) : Error(msg) {}
};

// Iterative linear solver hit its iteration cap.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// Time step produced an inadmissible state; caller halves dt and retries.
struct StepRejected : Error {
    double undershoot;
    explicit StepRejected(double worst)
        : Error("step rejected: negative undershoot"), undershoot(worst) {}
};

// Config file grammar violations.
struct SyntaxError : Error {
    int line;
    explicit SyntaxError(int ln, const std::string& msg)
        : Error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

struct UnknownKey : Error {
    std::string key;
    explicit UnknownKey(int ln, const std::string& k)
        : Error("line " + std::to_string(ln) + ": unknown key '" + k + "'"), key(k) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

}  // namespace arks

#endif  // ARKS_ERRORS_HPP_
