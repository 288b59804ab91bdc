#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sov/kernel/matrix.hpp"
#include "sov/theta/theta.hpp"

namespace sov::elliptic {

using theta::ThetaParams;

struct DivisorPart {
    cplx nu;
    int mult = 1;
};

/// D = sum mult_i nu_i on C / (omega1 Z + omega2 Z).
struct EllipticDivisor {
    std::vector<DivisorPart> parts;
    int degree() const;
};

/// Representative of z in corner + [0,1) omega1 + [0,1) omega2.
cplx reduce_to_domain(cplx z, const ThetaParams& p, cplx corner = 0.0);
/// Distance between z and w on the torus.
double torus_distance(cplx z, cplx w, const ThetaParams& p);
/// Merges equal points and reduces representatives.
EllipticDivisor normalize(const EllipticDivisor& d, const ThetaParams& p);

/// Functions w with w(l + omega1) = q^{-b} w(l), w(l + omega2) = q^{a} w(l)
/// and poles bounded by D, n of them for every character (a, b).
class EllipticBasis {
public:
    EllipticBasis(const EllipticDivisor& d, const ThetaParams& p);
    const ThetaParams& params() const { return p_; }
    const EllipticDivisor& divisor() const { return d_; }
    int n() const { return n_; }
    /// Character index c = a*r + b.
    cplx eval(int a, int b, int i, cplx lambda) const;
    /// All values, ordered (a, b, i).
    CVector eval_all(cplx lambda) const;

private:
    cplx eval_trivial(int i, cplx lambda) const;
    cplx eval_character(int a, int b, int i, cplx lambda) const;
    ThetaParams p_;
    EllipticDivisor d_;
    int n_ = 0;
    // (part index, derivative order) for each i
    std::vector<std::pair<int, int>> slots_;
};

EllipticBasis build_basis(const EllipticDivisor& d, const ThetaParams& p);

struct MultiplierReport {
    double omega1 = 0.0;
    double omega2 = 0.0;
    std::vector<std::size_t> rank;  // per character
};
/// Multiplier residuals at seeded probe points and interpolation ranks.
MultiplierReport check_basis(const EllipticBasis& b, std::uint64_t seed = 3, int probes = 10);

/// phi(l) = sum c_{ab,i} w_{ab,i}(l + z0) T_ab, T_ab = I1^a I2^b.
class EllipticLax {
public:
    EllipticLax(const EllipticBasis& basis, CVector coeffs, cplx z0 = 0.0);
    const EllipticBasis& basis() const { return basis_; }
    const ThetaParams& params() const { return basis_.params(); }
    const CVector& coeffs() const { return coeffs_; }
    cplx z0() const { return z0_; }
    CMatrix operator()(cplx lambda) const;
    EllipticLax translated(cplx z0) const { return EllipticLax(basis_, coeffs_, z0); }

private:
    EllipticBasis basis_;
    CVector coeffs_;
    cplx z0_;
    std::vector<CMatrix> T_;
};

EllipticLax assemble_lax(const CVector& coeffs, const EllipticDivisor& d, const ThetaParams& p, cplx z0 = 0.0);
/// max |phi(l + omega_i) - I_i phi(l) I_i^{-1}| / |phi(l)| over seeded probes.
double quasi_periodicity_residual(const EllipticLax& phi, std::uint64_t seed = 5, int probes = 10);
/// Coefficient of (l - nu)^{-order} of phi by a circle integral, max entry.
double laurent_coefficient(const EllipticLax& phi, cplx nu, int order, double radius = 1e-2);

/// t_k(l) = coefficient of xi^{r-k} in det(phi(l) - xi I), k = 1..r.
CVector spectral_invariants(const EllipticLax& phi, cplx lambda);
double invariants_periodicity_residual(const EllipticLax& phi, std::uint64_t seed = 6, int probes = 10);
/// sum over poles of res t_1 by small circles, and the boundary integral of t_1.
struct ResidueReport {
    cplx residue_sum;
    cplx boundary_integral;
};
ResidueReport residue_check(const EllipticLax& phi);

struct FundamentalDomainPoint {
    cplx z;
    cplx xi;
    int sheet = 0;
};

struct EllipticDivisorResult {
    std::vector<FundamentalDomainPoint> points;
    int argument_count = 0;  // zeros counted by the argument principle
    int genus = 0;           // from the discriminant zero count
    int branch_count = 0;
    cplx corner;
    double curve_residual = 0.0;
    double adjugate_residual = 0.0;
    int grid = 0;
};

/// Separating points of the elliptic Lax matrix with the basic section.
EllipticDivisorResult elliptic_divisor_coords(const EllipticLax& phi, const Tolerances& tol = {});

/// Genus from the discriminant zero count over the fundamental domain.
struct EllipticGenus {
    int genus;
    int branch_count;
};
EllipticGenus elliptic_genus(const EllipticLax& phi);

struct TranslationReport {
    double max_z = 0.0;
    double max_xi = 0.0;
    bool counts_match = false;
};
/// Compares the points of phi translated by z0 with (z_mu - z0, xi_mu).
TranslationReport translation_check(const EllipticLax& phi, cplx z0, const Tolerances& tol = {});

/// (z, xi) -> (z - mean z, xi / (prod xi)^{1/g}); the output has sum z = 0, prod xi = 1.
std::vector<FundamentalDomainPoint> slr_reduce(const std::vector<FundamentalDomainPoint>& pts);
/// (z, xi) -> (z - mean z, xi / prod xi), the map as commonly displayed.
std::vector<FundamentalDomainPoint> slr_reduce_literal(const std::vector<FundamentalDomainPoint>& pts);

/// Seeded random instance: divisor points and coefficients uniform.
struct EllipticInstance {
    ThetaParams params;
    EllipticDivisor divisor;
    CVector coeffs;
};
EllipticInstance random_elliptic_instance(int r, int n, cplx tau, std::uint64_t seed);

}  // namespace sov::elliptic
