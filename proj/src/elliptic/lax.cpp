#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "detail.hpp"
#include "sov/kernel/quadrature.hpp"

namespace sov::elliptic {

namespace detail {

std::vector<cplx> lax_poles(const EllipticLax& phi) {
    std::vector<cplx> out;
    for (const DivisorPart& d : phi.basis().divisor().parts)
        out.push_back(reduce_to_domain(d.nu - phi.z0(), phi.params()));
    return out;
}

}  // namespace detail

namespace {

CMatrix matrix_power(const CMatrix& m, int k) {
    CMatrix out = CMatrix::identity(m.size());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
}

cplx probe(std::mt19937_64& rng, const EllipticLax& phi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ThetaParams& p = phi.params();
    const auto poles = detail::lax_poles(phi);
    for (;;) {
        const cplx z = u(rng) * p.omega1() + u(rng) * p.omega2();
        bool ok = true;
        for (cplx c : poles)
            if (torus_distance(z, c, p) < 0.05 * std::abs(p.omega1())) ok = false;
        if (ok) return z;
    }
}

}  // namespace

EllipticLax::EllipticLax(const EllipticBasis& basis, CVector coeffs, cplx z0)
    : basis_(basis), coeffs_(std::move(coeffs)), z0_(z0) {
    const int r = basis_.params().r;
    if (coeffs_.size() != static_cast<std::size_t>(r * r * basis_.n()))
        throw Error(ErrorKind::schema, "coeffs must have r*r*n entries");
    for (cplx c : coeffs_)
        if (!is_finite(c)) throw Error(ErrorKind::schema, "non-finite coefficient");
    const auto [i1, i2] = theta::i_matrices(r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) T_.push_back(matrix_power(i1, a) * matrix_power(i2, b));
}

CMatrix EllipticLax::operator()(cplx lambda) const {
    const int r = params().r, n = basis_.n();
    CMatrix out(static_cast<std::size_t>(r));
    const CVector w = basis_.eval_all(lambda + z0_);
    for (int c = 0; c < r * r; ++c) {
        cplx s{};
        for (int i = 0; i < n; ++i) s += coeffs_[c * n + i] * w[c * n + i];
        if (s != cplx{}) out += T_[c] * s;
    }
    return out;
}

EllipticLax assemble_lax(const CVector& coeffs, const EllipticDivisor& d, const ThetaParams& p, cplx z0) {
    return EllipticLax(EllipticBasis(d, p), coeffs, z0);
}

double quasi_periodicity_residual(const EllipticLax& phi, std::uint64_t seed, int probes) {
    const ThetaParams& p = phi.params();
    const auto [i1, i2] = theta::i_matrices(p.r);
    const CMatrix i1inv = inverse(i1), i2inv = inverse(i2);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        const cplx z = probe(rng, phi);
        const CMatrix m = phi(z);
        const double sc = std::max(1e-300, m.norm());
        worst = std::max(worst, (phi(z + p.omega1()) - i1 * m * i1inv).norm() / sc);
        worst = std::max(worst, (phi(z + p.omega2()) - i2 * m * i2inv).norm() / sc);
    }
    return worst;
}

double laurent_coefficient(const EllipticLax& phi, cplx nu, int order, double radius) {
    const int M = 256;
    const std::size_t r = static_cast<std::size_t>(phi.params().r);
    CMatrix acc(r);
    for (int k = 0; k < M; ++k) {
        const cplx d = radius * std::exp(cplx(0.0, 2.0 * std::numbers::pi * k / M));
        acc += phi(nu + d) * std::pow(d, order);
    }
    acc *= 1.0 / M;
    double worst = 0.0;
    for (cplx v : acc.data()) worst = std::max(worst, std::abs(v));
    return worst;
}

CVector spectral_invariants(const EllipticLax& phi, cplx lambda) {
    const Poly c = char_bipoly(phi(lambda));
    const int r = phi.params().r;
    CVector t;
    for (int k = 1; k <= r; ++k) t.push_back(c.coeff(r - k));
    return t;
}

double invariants_periodicity_residual(const EllipticLax& phi, std::uint64_t seed, int probes) {
    const ThetaParams& p = phi.params();
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        const cplx z = probe(rng, phi);
        const CVector t = spectral_invariants(phi, z);
        for (cplx w : {p.omega1(), p.omega2()}) {
            const CVector s = spectral_invariants(phi, z + w);
            for (std::size_t i = 0; i < t.size(); ++i)
                worst = std::max(worst, std::abs(s[i] - t[i]) / std::max(1.0, std::abs(t[i])));
        }
    }
    return worst;
}

ResidueReport residue_check(const EllipticLax& phi) {
    const ThetaParams& p = phi.params();
    const auto poles = detail::lax_poles(phi);
    const cplx corner = detail::choose_corner(poles, p);
    const auto t1 = [&](cplx z) { return spectral_invariants(phi, z)[0]; };
    double rad = 0.25 * std::min(std::abs(p.omega1()), std::abs(p.omega2()));
    for (std::size_t a = 0; a < poles.size(); ++a) {
        rad = std::min(rad, 0.5 * detail::edge_distance(poles[a], corner, p) * std::abs(p.omega2()));
        for (std::size_t b = a + 1; b < poles.size(); ++b) rad = std::min(rad, 0.3 * torus_distance(poles[a], poles[b], p));
    }
    const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
    ResidueReport rep{};
    const int M = 256;
    for (cplx c : poles) {
        const cplx pc = reduce_to_domain(c, p, corner);
        cplx acc{};
        for (int k = 0; k < M; ++k) {
            const cplx d = rad * std::exp(cplx(0.0, 2.0 * std::numbers::pi * k / M));
            acc += t1(pc + d) * d;
        }
        rep.residue_sum += acc / static_cast<double>(M);
    }
    Tolerances tol;
    tol.quad = 1e-11;
    rep.boundary_integral = integrate_path(t1, detail::domain_boundary(corner, p), tol).value / two_pi_i;
    return rep;
}

std::vector<FundamentalDomainPoint> slr_reduce(const std::vector<FundamentalDomainPoint>& pts) {
    if (pts.empty()) return {};
    const double g = static_cast<double>(pts.size());
    cplx zsum{}, xprod = 1.0;
    for (const auto& q : pts) {
        zsum += q.z;
        xprod *= q.xi;
    }
    if (xprod == cplx{}) throw Error(ErrorKind::non_generic, "a separating point has xi = 0");
    const cplx root = std::exp(std::log(xprod) / g);
    std::vector<FundamentalDomainPoint> out = pts;
    for (auto& q : out) {
        q.z -= zsum / g;
        q.xi /= root;
    }
    return out;
}

std::vector<FundamentalDomainPoint> slr_reduce_literal(const std::vector<FundamentalDomainPoint>& pts) {
    if (pts.empty()) return {};
    const double g = static_cast<double>(pts.size());
    cplx zsum{}, xprod = 1.0;
    for (const auto& q : pts) {
        zsum += q.z;
        xprod *= q.xi;
    }
    if (xprod == cplx{}) throw Error(ErrorKind::non_generic, "a separating point has xi = 0");
    std::vector<FundamentalDomainPoint> out = pts;
    for (auto& q : out) {
        q.z -= zsum / g;
        q.xi /= xprod;
    }
    return out;
}

EllipticInstance random_elliptic_instance(int r, int n, cplx tau, std::uint64_t seed) {
    if (r < 1 || n < 1) throw Error(ErrorKind::schema, "r and n must be >= 1");
    EllipticInstance inst{ThetaParams(tau, r), {}, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0), c(-1.0, 1.0);
    const ThetaParams& p = inst.params;
    while (static_cast<int>(inst.divisor.parts.size()) < n) {
        const cplx z = (0.05 + 0.9 * u(rng)) * p.omega1() + (0.05 + 0.9 * u(rng)) * p.omega2();
        bool ok = torus_distance(z, theta::puncture(p), p) > 0.1 * std::abs(p.omega1());
        for (const DivisorPart& d : inst.divisor.parts)
            if (torus_distance(z, d.nu, p) < 0.15 * std::abs(p.omega1())) ok = false;
        if (ok) inst.divisor.parts.push_back({z, 1});
    }
    for (int k = 0; k < r * r * n; ++k) inst.coeffs.push_back(cplx(c(rng), c(rng)));
    return inst;
}

}  // namespace sov::elliptic
