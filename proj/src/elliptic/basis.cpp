#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "detail.hpp"

namespace sov::elliptic {

namespace detail {

std::pair<double, double> lattice_coords(cplx z, const ThetaParams& p) {
    const cplx w = z * static_cast<double>(p.r);
    const double v = w.imag() / p.tau.imag();
    const double u = w.real() - v * p.tau.real();
    return {u, v};
}

double edge_distance(cplx z, cplx corner, const ThetaParams& p) {
    auto [u, v] = lattice_coords(z - corner, p);
    u -= std::floor(u);
    v -= std::floor(v);
    return std::min(std::min(u, 1.0 - u), std::min(v, 1.0 - v));
}

cplx choose_corner(const std::vector<cplx>& avoid, const ThetaParams& p) {
    cplx best = 0.0;
    double best_score = -1.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const cplx c = (0.1 * i + 0.0137) * p.omega1() + (0.1 * j + 0.0071) * p.omega2();
            double score = 1.0;
            for (cplx a : avoid) score = std::min(score, edge_distance(a, c, p));
            if (score > best_score + 1e-12) {
                best_score = score;
                best = c;
            }
        }
    return best;
}

PathSpec domain_boundary(cplx corner, const ThetaParams& p) {
    const cplx w1 = p.omega1(), w2 = p.omega2();
    return PathSpec{{corner, corner + w1, corner + w1 + w2, corner + w2, corner}};
}

PathSpec circle_path(cplx centre, double radius, int vertices) {
    PathSpec path;
    for (int k = 0; k <= vertices; ++k)
        path.waypoints.push_back(centre + radius * std::exp(cplx(0.0, 2.0 * std::numbers::pi * (k % vertices) / vertices)));
    return path;
}

}  // namespace detail

using detail::lattice_coords;

namespace {

constexpr double kPi = std::numbers::pi;

double wrap01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0 - 1e-13) f = 0.0;
    return f;
}

// Value and log-derivatives 1..kmax of E(x) = theta(r x + (1 + tau)/2 | tau).
struct LogDerivs {
    cplx value;
    CVector l;  // l[k] = k-th derivative of log E, l[0] unused
};

LogDerivs log_derivs(cplx x, const ThetaParams& p, int kmax) {
    const double r = p.r;
    CVector e = theta::riemann_theta_derivs(r * x + (1.0 + p.tau) / 2.0, p.tau, kmax);
    double scale = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        e[k] *= scale;
        scale *= r;
    }
    LogDerivs out{e[0], CVector(static_cast<std::size_t>(kmax + 1))};
    for (int n = 1; n <= kmax; ++n) {
        cplx acc = e[n];
        double binom = 1.0;  // C(n-1, k-1)
        for (int k = 1; k < n; ++k) {
            acc -= binom * out.l[k] * e[n - k];
            binom = binom * (n - k) / k;
        }
        out.l[n] = acc / e[0];
    }
    return out;
}

}  // namespace

int EllipticDivisor::degree() const {
    int n = 0;
    for (const DivisorPart& d : parts) n += d.mult;
    return n;
}

cplx reduce_to_domain(cplx z, const ThetaParams& p, cplx corner) {
    auto [u, v] = lattice_coords(z - corner, p);
    return corner + wrap01(u) * p.omega1() + wrap01(v) * p.omega2();
}

double torus_distance(cplx z, cplx w, const ThetaParams& p) {
    auto [u, v] = lattice_coords(z - w, p);
    double best = 1e300;
    for (int du = -1; du <= 1; ++du)
        for (int dv = -1; dv <= 1; ++dv) {
            const double ru = u - std::round(u) + du, rv = v - std::round(v) + dv;
            best = std::min(best, std::abs(ru * p.omega1() + rv * p.omega2()));
        }
    return best;
}

EllipticDivisor normalize(const EllipticDivisor& d, const ThetaParams& p) {
    EllipticDivisor out;
    for (const DivisorPart& part : d.parts) {
        if (part.mult < 1) throw Error(ErrorKind::schema, "divisor multiplicity must be >= 1");
        if (!is_finite(part.nu)) throw Error(ErrorKind::schema, "non-finite divisor point");
        const cplx nu = reduce_to_domain(part.nu, p);
        auto it = std::find_if(out.parts.begin(), out.parts.end(),
                               [&](const DivisorPart& o) { return torus_distance(o.nu, nu, p) < 1e-12; });
        if (it != out.parts.end())
            it->mult += part.mult;
        else
            out.parts.push_back({nu, part.mult});
    }
    if (out.degree() < 1) throw Error(ErrorKind::schema, "divisor degree must be >= 1");
    return out;
}

EllipticBasis::EllipticBasis(const EllipticDivisor& d, const ThetaParams& p) : p_(p), d_(normalize(d, p)) {
    n_ = d_.degree();
    for (std::size_t k = 0; k < d_.parts.size(); ++k)
        for (int m = 0; m < d_.parts[k].mult; ++m) slots_.push_back({static_cast<int>(k), m});
    for (std::size_t a = 0; a < d_.parts.size(); ++a)
        for (std::size_t b = a + 1; b < d_.parts.size(); ++b)
            if (torus_distance(d_.parts[a].nu, d_.parts[b].nu, p_) < 1e-6)
                throw Error(ErrorKind::non_generic, "divisor points too close to separate");
}

cplx EllipticBasis::eval_trivial(int i, cplx lambda) const {
    if (i == 0) return 1.0;
    // functions after the constant: Z(l - nu_d) - Z(l - nu_0) for d >= 1, then Z^{(k)}(l - nu_d)
    const int distinct = static_cast<int>(d_.parts.size());
    if (i < distinct) {
        const LogDerivs a = log_derivs(lambda - d_.parts[i].nu, p_, 1);
        const LogDerivs b = log_derivs(lambda - d_.parts[0].nu, p_, 1);
        return a.l[1] - b.l[1];
    }
    int idx = i - distinct;
    for (const DivisorPart& part : d_.parts) {
        if (idx < part.mult - 1) {
            const int k = idx + 1;
            return log_derivs(lambda - part.nu, p_, k + 1).l[k + 1];
        }
        idx -= part.mult - 1;
    }
    throw Error(ErrorKind::internal, "basis index out of range");
}

cplx EllipticBasis::eval_character(int a, int b, int i, cplx lambda) const {
    const auto [part, k] = slots_[static_cast<std::size_t>(i)];
    const cplx nu = d_.parts[static_cast<std::size_t>(part)].nu;
    const double r2 = static_cast<double>(p_.r) * p_.r;
    const cplx delta = (static_cast<double>(a) + static_cast<double>(b) * p_.tau) / r2;
    const LogDerivs x1 = log_derivs(lambda - nu - delta, p_, k);
    const LogDerivs x2 = log_derivs(lambda - nu, p_, k);
    // derivatives of g(nu) = log E(l - nu - delta) - log E(l - nu), then complete Bell polynomials
    CVector g(static_cast<std::size_t>(k + 1));
    for (int j = 1; j <= k; ++j) g[j] = ((j % 2) ? -1.0 : 1.0) * (x1.l[j] - x2.l[j]);
    CVector Y(static_cast<std::size_t>(k + 1));
    Y[0] = 1.0;
    for (int m = 0; m < k; ++m) {
        cplx acc{};
        double binom = 1.0;
        for (int j = 0; j <= m; ++j) {
            acc += binom * Y[m - j] * g[j + 1];
            binom = binom * (m - j) / (j + 1);
        }
        Y[m + 1] = acc;
    }
    const cplx phase = std::exp(cplx(0.0, -2.0 * kPi * b) * lambda);
    return phase * (x1.value / x2.value) * Y[k];
}

cplx EllipticBasis::eval(int a, int b, int i, cplx lambda) const {
    if (a < 0 || b < 0 || a >= p_.r || b >= p_.r || i < 0 || i >= n_)
        throw Error(ErrorKind::schema, "basis index out of range");
    if (a == 0 && b == 0) return eval_trivial(i, lambda);
    return eval_character(a, b, i, lambda);
}

CVector EllipticBasis::eval_all(cplx lambda) const {
    CVector out;
    out.reserve(static_cast<std::size_t>(p_.r * p_.r * n_));
    for (int a = 0; a < p_.r; ++a)
        for (int b = 0; b < p_.r; ++b)
            for (int i = 0; i < n_; ++i) out.push_back(eval(a, b, i, lambda));
    return out;
}

EllipticBasis build_basis(const EllipticDivisor& d, const ThetaParams& p) { return EllipticBasis(d, p); }

namespace {

cplx probe_point(std::mt19937_64& rng, const EllipticBasis& b) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ThetaParams& p = b.params();
    for (;;) {
        const cplx z = u(rng) * p.omega1() + u(rng) * p.omega2();
        bool ok = true;
        for (const DivisorPart& part : b.divisor().parts)
            if (torus_distance(z, part.nu, p) < 0.05 * std::abs(p.omega1())) ok = false;
        if (ok) return z;
    }
}

}  // namespace

MultiplierReport check_basis(const EllipticBasis& b, std::uint64_t seed, int probes) {
    const ThetaParams& p = b.params();
    const int r = p.r;
    std::mt19937_64 rng(seed);
    MultiplierReport rep;
    for (int t = 0; t < probes; ++t) {
        const cplx z = probe_point(rng, b);
        for (int a = 0; a < r; ++a)
            for (int c = 0; c < r; ++c)
                for (int i = 0; i < b.n(); ++i) {
                    const cplx w = b.eval(a, c, i, z);
                    const double sc = std::max(1.0, std::abs(w));
                    const cplx m1 = std::pow(p.q(), -c), m2 = std::pow(p.q(), a);
                    rep.omega1 = std::max(rep.omega1, std::abs(b.eval(a, c, i, z + p.omega1()) - m1 * w) / sc);
                    rep.omega2 = std::max(rep.omega2, std::abs(b.eval(a, c, i, z + p.omega2()) - m2 * w) / sc);
                }
    }
    const int samples = 2 * b.n() + 4;
    CVector pts;
    for (int k = 0; k < samples; ++k) pts.push_back(probe_point(rng, b));
    for (int a = 0; a < r; ++a)
        for (int c = 0; c < r; ++c) {
            std::vector<CVector> rows;
            for (int i = 0; i < b.n(); ++i) {
                CVector row;
                for (cplx z : pts) row.push_back(b.eval(a, c, i, z));
                rows.push_back(row);
            }
            rep.rank.push_back(numerical_rank(rows, 1e-10));
        }
    return rep;
}

}  // namespace sov::elliptic
