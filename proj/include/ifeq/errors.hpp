#ifndef IFEQ_ERRORS_HPP
#define IFEQ_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifeq {

// Bad caller input (wrong domain, malformed spec). CLI maps these to exit code 2.
struct InputDomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Model or numeric failure on otherwise well-formed input. CLI exit code 3.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Channel has a zero on (or numerically on) the unit circle; ZF quantities diverge.
struct PaleyWienerViolation : ModelError {
    std::complex<double> root;
    PaleyWienerViolation(std::complex<double> z, const std::string& msg)
        : ModelError(msg), root(z) {}
};

struct NumericError : ModelError {
    using ModelError::ModelError;
};

// Shortest-vector enumeration exceeded its node budget.
struct EnumerationBudgetExceeded : NumericError {
    long long budget;
    explicit EnumerationBudgetExceeded(long long b)
        : NumericError("shortest-vector enumeration exceeded node budget " + std::to_string(b)),
          budget(b) {}
};

// Filter search found no monic candidate; carries the best non-monic vector found.
struct NonMonicOptimum : ModelError {
    std::vector<long long> best_re, best_im;
    NonMonicOptimum(std::vector<long long> re, std::vector<long long> im, const std::string& msg)
        : ModelError(msg), best_re(std::move(re)), best_im(std::move(im)) {}
};

// Generator polynomial does not divide D^N - 1 over Z_q; message names the remainder.
struct DivisibilityError : InputDomainError {
    using InputDomainError::InputDomainError;
};

struct PadTooLong : InputDomainError {
    using InputDomainError::InputDomainError;
};

// Exhaustive decoding table would be too large.
struct CapacityExceeded : InputDomainError {
    using InputDomainError::InputDomainError;
};

}  // namespace ifeq

#endif
