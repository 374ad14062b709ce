#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace psph {

// Invalid argument for a mathematically defined operation (bad modulus,
// p < 1, dimension mismatch, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Work or memory would exceed a configured budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A quadrature failed its resolution-doubling check. Carries both values so
// the caller can judge how bad it is.
struct ConvergenceError : std::runtime_error {
    std::complex<double> coarse;
    std::complex<double> fine;
    ConvergenceError(const std::string& what, std::complex<double> c, std::complex<double> f)
        : std::runtime_error(what), coarse(c), fine(f) {}
};

// Too few samples for a fit or a scan.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation not defined for these parameters (e.g. integer spheres with k != 2).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace psph
