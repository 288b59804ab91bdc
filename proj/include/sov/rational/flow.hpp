#pragma once

#include <vector>

#include "sov/kernel/ode.hpp"
#include "sov/kernel/quadrature.hpp"
#include "sov/rational/divisor.hpp"

namespace sov::rational {

struct Trajectory {
    std::vector<double> t;
    std::vector<MatPoly> states;
};

/// dx/dt = Pi(x) grad H(x) for the spectral coefficient H.
Trajectory flow(const MatPoly& phi0, CoeffPos H, const BracketSpec& spec, const std::vector<double>& t_grid,
                const OdeOptions& opt = {});
/// max_t max_c |c(t) - c(0)| / max_c |c(0)|
double isospectral_drift(const Trajectory& traj);

/// Data for the integrals of  -xi^k z^l / ((a(z) + b xi) P_xi) dz.
struct AbelianSetup {
    BiPoly P;
    BracketSpec spec;
    std::vector<CoeffPos> hams;
    CVector branch_points;
    double r_branch = 0.0;
};
AbelianSetup make_abelian_setup(const MatPoly& phi, const BracketSpec& spec, const std::vector<CoeffPos>& hams,
                                const Tolerances& tol = {});

/// Straight path with detour waypoints around branch points closer than r_branch.
PathSpec route_path(cplx from, cplx to, const CVector& branch_points, double r_branch);
/// Base point on a coarse grid, as far from the branch points as possible.
cplx choose_base_point(const CVector& branch_points);

struct PathIntegral {
    CVector values;  // one per Hamiltonian
    cplx xi_end;
};
/// Integrates along the path, continuing the sheet from xi_start at the first waypoint.
PathIntegral abelian_integrals(const AbelianSetup& setup, const PathSpec& path, cplx xi_start,
                               const Tolerances& tol = {});
/// sum_mu integral from z0 to z_mu, each path routed around branch points.
CVector abel_sum(const AbelianSetup& setup, cplx z0, const std::vector<DivisorPoint>& pts,
                 const Tolerances& tol = {});

/// F = sum_mu integral from z0 to z_mu of p(z, xi) dz with dp/dxi = 1/(a + b xi),
/// on the curve P + sum_i dh_i xi^k z^l (points kept fixed in z).
cplx generating_function(const AbelianSetup& setup, cplx z0, const std::vector<DivisorPoint>& pts,
                         const CVector& dh, const Tolerances& tol = {});

struct LinearizeResult {
    std::vector<double> t;
    std::vector<CoeffPos> hams;
    std::vector<CVector> Q;  // Q[time][i]
    std::vector<std::vector<DivisorPoint>> points;
    CVector branch_points;
};
/// Q_i(t) along a trajectory; consecutive samples must be close enough for
/// nearest-neighbour matching of divisor points.
LinearizeResult linearize(const Trajectory& traj, const BracketSpec& spec, cplx base_z0, const CVector& s,
                          const std::vector<CoeffPos>& hams, const Tolerances& tol = {});

struct LinearFit {
    CVector slope;
    CVector intercept;
    std::vector<double> residual;  // max |Q - fit| / motion scale of the flow
};
/// Least-squares affine fit of every Q_i over the given sample indices.
LinearFit fit_linear(const LinearizeResult& lin, const std::vector<std::size_t>& samples);

}  // namespace sov::rational
