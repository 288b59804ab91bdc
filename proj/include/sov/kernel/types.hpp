#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sov {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Failure classes. Each maps onto one documented CLI exit code.
enum class ErrorKind {
    schema,          // malformed document or argument
    non_generic,     // instance outside the generic stratum
    numeric_domain,  // guard such as a degenerate modular parameter
    convergence,     // iteration failed to converge
    singular,        // quadrature or continuation hit a singularity
    internal,        // expansion inconsistency and other broken invariants
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Numerical tolerances shared by every module. Suites scale them uniformly.
struct Tolerances {
    double zero_trim = 1e-13;        // relative to the largest coefficient
    double root_cluster = 1e-7;      // multiplicity clustering radius (relative)
    double root_residual = 1e-10;    // |p(root)| relative to the evaluation bound
    int root_max_iter = 500;
    double quad = 1e-13;             // absolute quadrature error target
    int quad_max_depth = 40;
    double ode = 1e-12;              // per-step relative/absolute error target
    double fd_h_rel = 1e-6;
    double divisor = 1e-9;           // curve and adjugate residuals
    double casimir = 1e-8;
    double branch_radius = 1e-2;     // relative to the z-scale of the curve
    double puncture_radius = 1e-3;
    double elliptic_cluster = 1e-7;

    Tolerances scaled(double factor) const;
};

inline bool is_finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace sov
