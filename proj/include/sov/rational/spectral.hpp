#pragma once

#include <string>
#include <vector>

#include "sov/kernel/matrix.hpp"
#include "sov/rational/bracket.hpp"
#include "sov/rational/matpoly.hpp"

namespace sov::rational {

/// Position of the coefficient of xi^k z^l in P(z, xi).
struct CoeffPos {
    int k;
    int l;
    bool operator==(const CoeffPos&) const = default;
};

struct SpectralCurve {
    BiPoly P;
    std::vector<CoeffPos> positions;  // every non-constant spectral coefficient
    std::vector<CoeffPos> hamiltonians;
    std::vector<CoeffPos> casimirs;
};

/// det(phi(z) - xi I) expanded exactly; the split is left empty.
SpectralCurve spectral_curve(const MatPoly& phi);
std::vector<CoeffPos> spectral_positions(std::size_t r, std::size_t n);
/// Values of the coefficients at the given positions.
CVector spectral_values(const MatPoly& phi, const std::vector<CoeffPos>& pos);
/// Gradient of each coefficient with respect to the flat coordinates.
std::vector<CVector> spectral_gradients(const MatPoly& phi, const std::vector<CoeffPos>& pos);

struct GenusInfo {
    int genus = 0;
    int branch_count = 0;
    CVector branch_points;
};
/// Genus by Riemann-Hurwitz from the simple roots of the discriminant.
GenusInfo genus(const MatPoly& phi, const Tolerances& tol = {});

struct CasimirSplit {
    std::vector<CoeffPos> hamiltonians;
    std::vector<CoeffPos> casimirs;
    std::vector<std::string> warnings;
};
/// A coefficient is a Casimir when its Hamiltonian vector field vanishes at
/// five phase points (phi and four seeded random points).
CasimirSplit casimir_detect(const MatPoly& phi, const BracketSpec& spec, const Tolerances& tol = {},
                            std::uint64_t seed = 7);

}  // namespace sov::rational
