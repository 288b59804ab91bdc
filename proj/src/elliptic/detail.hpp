#pragma once

#include <vector>

#include "sov/elliptic/elliptic.hpp"

namespace sov::elliptic::detail {

/// Lattice coordinates (u, v) with z = u omega1 + v omega2.
std::pair<double, double> lattice_coords(cplx z, const ThetaParams& p);

/// Corner of a fundamental domain whose edges stay far from the given points.
cplx choose_corner(const std::vector<cplx>& avoid, const ThetaParams& p);

/// Distance of z from the boundary of the domain at corner, in lattice units.
double edge_distance(cplx z, cplx corner, const ThetaParams& p);

/// Pole representatives of phi in the lambda plane (the divisor shifted by -z0).
std::vector<cplx> lax_poles(const EllipticLax& phi);

/// The domain boundary as a closed polygon starting at corner.
PathSpec domain_boundary(cplx corner, const ThetaParams& p);

/// Closed polygon approximating a circle.
PathSpec circle_path(cplx centre, double radius, int vertices = 48);

}  // namespace sov::elliptic::detail
