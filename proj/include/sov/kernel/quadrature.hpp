#pragma once

#include <functional>

#include "sov/kernel/types.hpp"

namespace sov {

/// Piecewise-linear contour through the waypoints.
struct PathSpec {
    CVector waypoints;
    PathSpec reversed() const;
};

struct QuadResult {
    cplx value;
    double error = 0.0;
};

using Integrand = std::function<cplx(cplx)>;

/// Adaptive Gauss-Legendre quadrature of f(z) dz along the path.
QuadResult integrate_path(const Integrand& f, const PathSpec& path, const Tolerances& tol = {});
QuadResult integrate_segment(const Integrand& f, cplx a, cplx b, const Tolerances& tol = {});

}  // namespace sov
