#pragma once

#include <cstdint>
#include <vector>

#include "sov/kernel/matrix.hpp"
#include "sov/kernel/quadrature.hpp"

namespace sov::theta {

/// Elliptic curve C / ((1/r)Z + (tau/r)Z) and the rank r.
struct ThetaParams {
    cplx tau;
    int r = 1;
    int N = 0;  // series half-width for |Im z| of order Im tau

    ThetaParams() = default;
    ThetaParams(cplx tau, int r);
    cplx q() const;
    cplx omega1() const { return 1.0 / static_cast<double>(r); }
    cplx omega2() const { return tau / static_cast<double>(r); }
};

/// Series half-width giving relative truncation below 1e-17.
int truncation(cplx tau);

/// theta(z | tau) = sum_n exp(pi i n^2 tau + 2 pi i n z) and its z-derivatives.
cplx riemann_theta(cplx z, cplx tau, int deriv = 0);
/// All derivatives 0..max_deriv in one pass.
CVector riemann_theta_derivs(cplx z, cplx tau, int max_deriv);
/// The same series truncated at |n| <= N around the dominant term, for truncation studies.
cplx riemann_theta_truncated(cplx z, cplx tau, int N);

cplx theta_kj(cplx z, int k, int j, const ThetaParams& p);
cplx xi_kj(cplx z, int k, int j, const ThetaParams& p);
/// (r-1)/2 - j for odd r, r/2 - j for even r.
double rho(int j, int r);

/// f_j(z), j = 0..r-1, with F(z + 1/r) = F(z) and F(z + tau/r) = I2 F(z).
cplx f_component(cplx z, int j, const ThetaParams& p);
CVector f_vector(cplx z, const ThetaParams& p);
/// Puncture representative (1 + tau)/(2r); the punctures are this point plus the lattice.
cplx puncture(const ThetaParams& p);
/// Distance from z to the nearest puncture.
double puncture_distance(cplx z, const ThetaParams& p);

/// I1 = diag(q^j), I2 = cyclic shift with ones at (j, j+1) and (r-1, 0).
std::pair<CMatrix, CMatrix> i_matrices(int r);

/// Winding number of f_j around a small circle centred at c.
int local_order(int j, cplx c, const ThetaParams& p, double radius = 1e-3);

struct SectionSample {
    cplx z;
    CVector values;  // s_i(z), s_i^r = f_i(z)
    cplx anchor;
    PathSpec path;
};

/// r-th roots of the f_i continued from the anchor at 0: s_0(0) has argument in
/// (-pi/r, pi/r], and s_{i+1}(0) is the continuation of s_i along 0 -> tau/r.
class BasicSection {
public:
    explicit BasicSection(const ThetaParams& p);
    const ThetaParams& params() const { return p_; }
    const CVector& anchor_values() const { return anchor_; }

    /// Continue every component along the path; the path must start at 0.
    SectionSample at(const PathSpec& path) const;
    /// Continue given values along a path starting at path.waypoints[0].
    CVector continue_along(const CVector& start, const PathSpec& path) const;
    /// Continue a single component.
    cplx continue_component(int i, cplx start_value, const PathSpec& path) const;

private:
    ThetaParams p_;
    CVector anchor_;
};

SectionSample basic_section(cplx z, const ThetaParams& p, const PathSpec& path);

}  // namespace sov::theta

namespace sov::theta {

/// Largest residuals of the theta identities for one (tau, r), at seeded points.
struct RelationResiduals {
    double zero = 0.0;    // |theta((1 + tau)/2)|
    double shifts = 0.0;  // theta_kj and xi_kj translation relations
    double period = 0.0;  // F(z + 1/r) = F(z), F(z + tau/r) = I2 F(z)
    double roots = 0.0;   // s(z + 1/r) = I1 s(z), s(z + tau/r) = I2 s(z)
};
RelationResiduals relation_residuals(const ThetaParams& p, std::uint64_t seed);

}  // namespace sov::theta
