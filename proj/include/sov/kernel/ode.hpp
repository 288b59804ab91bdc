#pragma once

#include <functional>
#include <vector>

#include "sov/kernel/types.hpp"

namespace sov {

using VectorField = std::function<CVector(double, const CVector&)>;

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
    double fixed_step = 0.0;  // > 0 disables adaptivity
    int max_steps = 200000;
};

/// Dormand-Prince 5(4). Returns the state at each requested time; t_grid must
/// be monotone and starts at the initial time.
std::vector<CVector> ode_solve(const VectorField& field, const CVector& x0,
                               const std::vector<double>& t_grid, const OdeOptions& opt = {});

/// Scalar field F on C^n; returns central-difference derivatives with real
/// steps h = h_rel * max(1, |x_i|).
using ScalarField = std::function<cplx(const CVector&)>;
CVector fd_gradient(const ScalarField& f, const CVector& x, double h_rel = 1e-6);

}  // namespace sov
