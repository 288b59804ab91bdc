#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "sov/kernel/resultant.hpp"
#include "sov/kernel/roots.hpp"

namespace sov::elliptic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// det[s, phi s, ..., phi^{r-1} s] with s the basic section continued to lambda + z0.
class KrylovField {
public:
    explicit KrylovField(const EllipticLax& phi) : phi_(phi), sec_(phi.params()) {}

    CVector section(cplx lambda) const {
        const cplx u = lambda + phi_.z0();
        if (u == cplx{}) return sec_.anchor_values();
        return sec_.at(PathSpec{{0.0, u}}).values;
    }
    CVector move(const CVector& s, cplx from, cplx to) const {
        if (from == to) return s;
        return sec_.continue_along(s, PathSpec{{from + phi_.z0(), to + phi_.z0()}});
    }
    cplx value(cplx lambda, const CVector& s) const {
        const std::size_t r = s.size();
        const CMatrix m = phi_(lambda);
        CMatrix k(r);
        CVector v = s;
        for (std::size_t c = 0; c < r; ++c) {
            for (std::size_t i = 0; i < r; ++i) k(i, c) = v[i];
            if (c + 1 < r) v = m.apply(v);
        }
        return determinant(k);
    }

private:
    const EllipticLax& phi_;
    theta::BasicSection sec_;
};

struct Stateless {};

// Winding number of a function along a closed polygon by adaptive argument tracking.
// eval(state, from, to) returns the continued state and the value at to.
template <class State, class Eval>
double winding(const PathSpec& path, State state, Eval eval, double cap_len) {
    double total = 0.0;
    cplx prev = eval(state, path.waypoints[0], path.waypoints[0]).second;
    for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
        const cplx a = path.waypoints[seg], b = path.waypoints[seg + 1];
        const double len = std::abs(b - a);
        if (len == 0.0) continue;
        const double cap = std::min(1.0, cap_len / len);
        double t = 0.0, h = cap;
        cplx z = a;
        while (t < 1.0) {
            const double t1 = std::min(1.0, t + h);
            const cplx z1 = a + t1 * (b - a);
            bool ok = true;
            std::pair<State, cplx> next;
            try {
                next = eval(state, z, z1);
            } catch (const Error&) {
                ok = false;
            }
            cplx ratio = ok ? next.second / prev : cplx{};
            if (!ok || !is_finite(ratio) || ratio == cplx{} || std::abs(std::arg(ratio)) > 0.5 ||
                std::abs(std::log(std::abs(ratio))) > 0.7) {
                h *= 0.5;
                if (h * len < 1e-13)
                    throw Error(ErrorKind::singular, "argument tracking hit a zero or pole on the contour");
                continue;
            }
            total += std::arg(ratio);
            state = std::move(next.first);
            prev = next.second;
            z = z1;
            t = t1;
            h = std::min(cap, 1.5 * h);
        }
    }
    return total / kTwoPi;
}

int rounded_winding(double w) {
    const double k = std::round(w);
    if (std::abs(w - k) > 0.1) throw Error(ErrorKind::convergence, "non-integer winding number");
    return static_cast<int>(k);
}

struct Special {
    std::vector<cplx> points;  // poles of phi and the puncture, in the domain
    cplx corner;
    double radius;
};

Special special_points(const EllipticLax& phi) {
    const ThetaParams& p = phi.params();
    Special sp;
    sp.points = detail::lax_poles(phi);
    if (p.r > 1) sp.points.push_back(reduce_to_domain(theta::puncture(p) - phi.z0(), p));
    sp.corner = detail::choose_corner(sp.points, p);
    const double wmin = std::min(std::abs(p.omega1()), std::abs(p.omega2()));
    sp.radius = 1e-4 * wmin;
    for (std::size_t a = 0; a < sp.points.size(); ++a) {
        sp.points[a] = reduce_to_domain(sp.points[a], p, sp.corner);
        sp.radius = std::min(sp.radius, 0.5 * detail::edge_distance(sp.points[a], sp.corner, p) * wmin);
        for (std::size_t b = a + 1; b < sp.points.size(); ++b)
            sp.radius = std::min(sp.radius, 0.3 * torus_distance(sp.points[a], sp.points[b], p));
    }
    return sp;
}

struct Located {
    std::vector<cplx> zeros;
    int argument_count = 0;
    int grid = 0;
};

cplx newton_zero(const KrylovField& kf, cplx z, CVector s, const ThetaParams& p, bool& ok) {
    const double w = std::abs(p.omega1());
    const double h = 1e-6 * w;
    ok = false;
    cplx k0 = kf.value(z, s);
    for (int it = 0; it < 60; ++it) {
        const cplx dk = (kf.value(z + h, kf.move(s, z, z + h)) - kf.value(z - h, kf.move(s, z, z - h))) / (2.0 * h);
        if (dk == cplx{} || !is_finite(dk)) return z;
        cplx dz = -k0 / dk;
        if (std::abs(dz) > 0.1 * w) dz *= 0.1 * w / std::abs(dz);
        bool stepped = false;
        for (int damp = 0; damp < 12; ++damp) {
            const cplx z1 = z + dz;
            CVector s1 = kf.move(s, z, z1);
            const cplx k1 = kf.value(z1, s1);
            if (is_finite(k1) && std::abs(k1) < std::abs(k0)) {
                z = z1;
                s = std::move(s1);
                k0 = k1;
                stepped = true;
                break;
            }
            if (std::abs(dz) < 1e-13 * w) break;
            dz *= 0.5;
        }
        if (std::abs(dz) < 1e-13 * w || k0 == cplx{}) {
            ok = true;
            return z;
        }
        if (!stepped) {
            ok = std::abs(dz) < 1e-10 * w;
            return z;
        }
    }
    return z;
}

Located locate_zeros(const KrylovField& kf, const ThetaParams& p, const Special& sp, int M, const Tolerances& tol) {
    const cplx w1 = p.omega1(), w2 = p.omega2();
    const double wmin = std::min(std::abs(w1), std::abs(w2));
    std::vector<cplx> kval(static_cast<std::size_t>(M * M));
    std::vector<CVector> sval(kval.size());
    auto node = [&](int j, int k) { return sp.corner + (static_cast<double>(j) / M) * w1 + (static_cast<double>(k) / M) * w2; };
    CVector s = kf.section(node(0, 0));
    cplx here = node(0, 0);
    for (int k = 0; k < M; ++k)
        for (int jj = 0; jj < M; ++jj) {
            const int j = (k % 2 == 0) ? jj : M - 1 - jj;
            const cplx z = node(j, k);
            s = kf.move(s, here, z);
            here = z;
            sval[static_cast<std::size_t>(k * M + j)] = s;
            kval[static_cast<std::size_t>(k * M + j)] = kf.value(z, s);
        }
    auto at = [&](int j, int k) { return std::abs(kval[static_cast<std::size_t>(((k % M + M) % M) * M + (j % M + M) % M)]); };
    Located out;
    out.grid = M;
    auto try_seed = [&](cplx z0, const CVector& s0) {
        bool ok = false;
        const cplx z = newton_zero(kf, z0, s0, p, ok);
        if (!ok) return;
        const cplx zr = reduce_to_domain(z, p, sp.corner);
        for (cplx c : sp.points)
            if (torus_distance(zr, c, p) < 1e-6 * wmin) return;
        for (cplx o : out.zeros)
            if (torus_distance(o, zr, p) < tol.elliptic_cluster * wmin) return;
        out.zeros.push_back(zr);
    };
    for (int k = 0; k < M; ++k)
        for (int j = 0; j < M; ++j) {
            const double v = at(j, k);
            bool minimum = std::isfinite(v);
            for (int dj = -1; dj <= 1 && minimum; ++dj)
                for (int dk = -1; dk <= 1; ++dk)
                    if ((dj || dk) && !(v < at(j + dj, k + dk))) {
                        minimum = false;
                        break;
                    }
            if (minimum) try_seed(node(j, k), sval[static_cast<std::size_t>(k * M + j)]);
        }
    // zeros hiding next to poles are invisible on the grid
    for (cplx c : sp.points)
        for (double rad : {0.03 * wmin, 0.005 * wmin})
            for (int a = 0; a < 8; ++a) {
                const cplx z = c + rad * std::exp(cplx(0.0, kTwoPi * (a + 0.5) / 8));
                try_seed(z, kf.move(kf.section(sp.corner), sp.corner, z));
            }
    return out;
}

int argument_count(const KrylovField& kf, const ThetaParams& p, const Special& sp, double radius) {
    const double cap = 0.01 * std::min(std::abs(p.omega1()), std::abs(p.omega2()));
    auto eval = [&](const CVector& s, cplx from, cplx to) {
        CVector s1 = kf.move(s, from, to);
        const cplx v = kf.value(to, s1);
        return std::pair<CVector, cplx>(std::move(s1), v);
    };
    const PathSpec boundary = detail::domain_boundary(sp.corner, p);
    double total = winding(boundary, kf.section(sp.corner), eval, cap);
    for (cplx c : sp.points) {
        const PathSpec circle = detail::circle_path(c, radius);
        total -= winding(circle, kf.section(circle.waypoints[0]), eval, 0.2 * radius);
    }
    return rounded_winding(total);
}

}  // namespace

EllipticGenus elliptic_genus(const EllipticLax& phi) {
    const ThetaParams& p = phi.params();
    if (p.r == 1) return {1, 0};
    Special sp = special_points(phi);
    sp.points = detail::lax_poles(phi);
    for (cplx& c : sp.points) c = reduce_to_domain(c, p, sp.corner);
    auto disc = [&](cplx z) {
        const Poly c = char_bipoly(phi(z));
        return resultant_value(c, c.derivative(1));
    };
    auto eval = [&](Stateless st, cplx, cplx to) { return std::pair<Stateless, cplx>(st, disc(to)); };
    const double cap = 0.01 * std::min(std::abs(p.omega1()), std::abs(p.omega2()));
    double total = winding(detail::domain_boundary(sp.corner, p), Stateless{}, eval, cap);
    // pole order of the discriminant: shrink the circle until two radii agree
    const double wmin = std::min(std::abs(p.omega1()), std::abs(p.omega2()));
    for (cplx c : sp.points) {
        double rad = std::min(sp.radius, 1e-4 * wmin);
        int prev = rounded_winding(winding(detail::circle_path(c, rad), Stateless{}, eval, 0.2 * rad));
        for (int k = 0;; ++k) {
            rad *= 0.1;
            const int w = rounded_winding(winding(detail::circle_path(c, rad), Stateless{}, eval, 0.2 * rad));
            if (w == prev) break;
            if (k == 3) throw Error(ErrorKind::non_generic, "branch points accumulate at a pole");
            prev = w;
        }
        total -= prev;
    }
    const int b = rounded_winding(total);
    if (b < 0 || b % 2 != 0) throw Error(ErrorKind::non_generic, "odd or negative branch count");
    return {b / 2 + 1, b};
}

EllipticDivisorResult elliptic_divisor_coords(const EllipticLax& phi, const Tolerances& tol) {
    const ThetaParams& p = phi.params();
    EllipticDivisorResult res;
    const EllipticGenus eg = elliptic_genus(phi);
    res.genus = eg.genus;
    res.branch_count = eg.branch_count;
    if (p.r == 1) return res;
    const KrylovField kf(phi);
    const Special sp = special_points(phi);
    res.corner = sp.corner;
    double radius = sp.radius;
    Located loc;
    for (int M = 24; M <= 96; M *= 2) {
        loc = locate_zeros(kf, p, sp, M, tol);
        for (cplx z : loc.zeros)
            for (cplx c : sp.points) radius = std::min(radius, 0.5 * torus_distance(z, c, p));
        loc.argument_count = argument_count(kf, p, sp, radius);
        if (static_cast<int>(loc.zeros.size()) == loc.argument_count) break;
        if (M * 2 > 96) throw Error(ErrorKind::convergence, "missed zeros, refine grid");
    }
    res.argument_count = loc.argument_count;
    res.grid = loc.grid;
    for (cplx z : loc.zeros) {
        const CMatrix m = phi(z);
        const Poly c = char_bipoly(m);
        CVector eig = poly_roots_flat(c, tol);
        std::sort(eig.begin(), eig.end(), [](cplx a, cplx b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        const CVector s = kf.move(kf.section(sp.corner), sp.corner, z);
        double snorm = 0.0;
        for (cplx v : s) snorm += std::norm(v);
        snorm = std::sqrt(snorm);
        double best = 1e300;
        int sheet = 0;
        for (std::size_t k = 0; k < eig.size(); ++k) {
            const CMatrix adj = adjugate(m - CMatrix::identity(m.size()) * eig[k]);
            double num = 0.0;
            for (cplx v : adj.apply(s)) num += std::norm(v);
            const double rel = std::sqrt(num) / std::max(1e-300, adj.norm() * snorm);
            if (rel < best) {
                best = rel;
                sheet = static_cast<int>(k);
            }
        }
        const cplx xi = eig[static_cast<std::size_t>(sheet)];
        res.points.push_back({z, xi, sheet});
        res.adjugate_residual = std::max(res.adjugate_residual, best);
        res.curve_residual = std::max(res.curve_residual, std::abs(c(xi)) / c.eval_bound(xi));
    }
    std::sort(res.points.begin(), res.points.end(), [](const FundamentalDomainPoint& a, const FundamentalDomainPoint& b) {
        return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
    });
    return res;
}

TranslationReport translation_check(const EllipticLax& phi, cplx z0, const Tolerances& tol) {
    const ThetaParams& p = phi.params();
    const EllipticDivisorResult a = elliptic_divisor_coords(phi, tol);
    const EllipticDivisorResult b = elliptic_divisor_coords(phi.translated(phi.z0() + z0), tol);
    TranslationReport rep;
    rep.counts_match = a.points.size() == b.points.size();
    for (const FundamentalDomainPoint& q : a.points) {
        double best = 1e300;
        cplx xi{};
        for (const FundamentalDomainPoint& o : b.points) {
            const double d = torus_distance(q.z - z0, o.z, p);
            if (d < best) {
                best = d;
                xi = o.xi;
            }
        }
        rep.max_z = std::max(rep.max_z, best);
        rep.max_xi = std::max(rep.max_xi, std::abs(xi - q.xi) / std::max(1.0, std::abs(q.xi)));
    }
    return rep;
}

}  // namespace sov::elliptic
