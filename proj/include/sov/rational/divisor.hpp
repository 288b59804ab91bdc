#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sov/rational/bracket.hpp"
#include "sov/rational/matpoly.hpp"
#include "sov/rational/spectral.hpp"

namespace sov::rational {

struct DivisorPoint {
    cplx z;
    cplx xi;
};

struct DivisorCoords {
    std::vector<DivisorPoint> points;
    CVector s;
    std::size_t count = 0;
    std::size_t rejected = 0;  // resultant roots failing full-vector validation
    std::vector<std::string> warnings;
};

/// Points where P(z, xi) = 0 and adj(phi(z) - xi I) s = 0.
DivisorCoords divisor_coords(const MatPoly& phi, const CVector& s, const Tolerances& tol = {});
/// Uses s = e_1 and re-draws s on the unit sphere if the elimination is
/// degenerate or a candidate fails to converge.
DivisorCoords divisor_coords_auto(const MatPoly& phi, std::uint64_t seed = 1, const Tolerances& tol = {});

/// max over points of |P| and |adj(phi - xi I) s| relative to their evaluation scale
struct DivisorResidual {
    double curve = 0.0;
    double adjugate = 0.0;
};
DivisorResidual divisor_residual(const MatPoly& phi, const DivisorCoords& d);

struct CanonicalReport {
    std::vector<DivisorPoint> points;
    std::vector<CVector> z_xi;  // {z_mu, xi_nu}
    std::vector<CVector> z_z;
    std::vector<CVector> xi_xi;
    double max_z_xi = 0.0;  // max |{z_mu,xi_nu} - (a(z_mu) + b xi_mu) delta|
    double max_z_z = 0.0;
    double max_xi_xi = 0.0;
};

/// Brackets of divisor coordinates by the chain rule, with finite-difference
/// gradients of the point positions.
CanonicalReport verify_canonical(const MatPoly& phi, const BracketSpec& spec, const CVector& s,
                                 const Tolerances& tol = {});

/// Seeded random instance in the generic stratum: discriminant roots at
/// least 1e-3 apart and leading eigenvalue gap at least 1e-3.
struct GenericInstance {
    MatPoly phi;
    std::uint64_t seed;
    GenusInfo genus;
};
GenericInstance generic_instance(std::size_t r, std::size_t n, std::uint64_t seed, const Tolerances& tol = {});

}  // namespace sov::rational
