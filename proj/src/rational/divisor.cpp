#include "sov/rational/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sov/kernel/resultant.hpp"
#include "sov/kernel/roots.hpp"

namespace sov::rational {

namespace {

struct AdjSystem {
    BiPoly P;
    std::vector<BiPoly> v;  // adj(phi - xi I) s, componentwise
};

AdjSystem adj_system(const MatPoly& phi, const CVector& s) {
    const CharData cd = char_data(phi.poly_matrix());
    AdjSystem sys{cd.det, {}};
    const std::size_t r = phi.r;
    for (std::size_t i = 0; i < r; ++i) {
        BiPoly vi;
        for (std::size_t j = 0; j < r; ++j) vi += cd.adj[i * r + j] * s[j];
        sys.v.push_back(vi);
    }
    return sys;
}

bool newton_pair(const BiPoly& f, const BiPoly& g, cplx& z, cplx& xi) {
    const BiPoly fz = f.d_z(), fx = f.d_xi(), gz = g.d_z(), gx = g.d_xi();
    for (int it = 0; it < 50; ++it) {
        const cplx a = f(z, xi), b = g(z, xi);
        const cplx j11 = fz(z, xi), j12 = fx(z, xi), j21 = gz(z, xi), j22 = gx(z, xi);
        const cplx det = j11 * j22 - j12 * j21;
        if (det == cplx{}) return false;
        const cplx dz = (j22 * a - j12 * b) / det;
        const cplx dx = (-j21 * a + j11 * b) / det;
        z -= dz;
        xi -= dx;
        if (!is_finite(z) || !is_finite(xi)) return false;
        if (std::abs(dz) + std::abs(dx) <= 1e-15 * (1.0 + std::abs(z) + std::abs(xi))) break;
    }
    return true;
}

double rel_residual(const BiPoly& p, cplx z, cplx xi) {
    return std::abs(p(z, xi)) / std::max(p.eval_bound(z, xi), 1e-300);
}

CVector unit_vector(std::size_t r, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    CVector s(r);
    double nrm = 0.0;
    for (cplx& c : s) {
        c = cplx(nd(rng), nd(rng));
        nrm += std::norm(c);
    }
    for (cplx& c : s) c /= std::sqrt(nrm);
    return s;
}

}  // namespace

DivisorCoords divisor_coords(const MatPoly& phi, const CVector& s, const Tolerances& tol) {
    phi.validate();
    if (s.size() != phi.r) throw Error(ErrorKind::schema, "auxiliary vector has wrong length");
    DivisorCoords out;
    out.s = s;
    if (phi.r == 1) return out;

    const AdjSystem sys = adj_system(phi, s);
    const BiPoly& v1 = sys.v[0];
    const Poly res = resultant(sys.P, v1, Var::xi, tol);
    if (res.is_zero()) throw Error(ErrorKind::non_generic, "resultant degenerate");

    for (const Root& root : poly_roots(res, tol)) {
        const Poly v1z = v1.at_z(root.value);
        CVector seeds = v1z.degree() >= 1 ? poly_roots_flat(v1z, tol) : poly_roots_flat(sys.P.at_z(root.value), tol);
        bool converged_any = false;
        for (cplx xi0 : seeds) {
            cplx z = root.value, xi = xi0;
            if (!newton_pair(sys.P, v1, z, xi)) continue;
            if (rel_residual(sys.P, z, xi) > tol.divisor || rel_residual(v1, z, xi) > tol.divisor) continue;
            converged_any = true;
            bool valid = true;
            for (const BiPoly& vi : sys.v)
                if (rel_residual(vi, z, xi) > tol.divisor) valid = false;
            if (!valid) {
                ++out.rejected;
                continue;
            }
            const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const DivisorPoint& p) {
                return std::abs(p.z - z) + std::abs(p.xi - xi) < tol.root_cluster * (1.0 + std::abs(z));
            });
            if (!dup) out.points.push_back({z, xi});
        }
        if (!converged_any) out.warnings.push_back("candidate dropped: Newton did not converge");
    }
    std::sort(out.points.begin(), out.points.end(), [](const DivisorPoint& a, const DivisorPoint& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    out.count = out.points.size();
    return out;
}

DivisorCoords divisor_coords_auto(const MatPoly& phi, std::uint64_t seed, const Tolerances& tol) {
    CVector s(phi.r);
    s[0] = 1.0;
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            DivisorCoords d = divisor_coords(phi, s, tol);
            if (d.warnings.empty()) return d;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::non_generic) throw;
        }
        s = unit_vector(phi.r, rng);
    }
    throw Error(ErrorKind::non_generic, "no admissible auxiliary vector found");
}

DivisorResidual divisor_residual(const MatPoly& phi, const DivisorCoords& d) {
    DivisorResidual res;
    if (phi.r == 1) return res;
    const AdjSystem sys = adj_system(phi, d.s);
    for (const DivisorPoint& p : d.points) {
        res.curve = std::max(res.curve, rel_residual(sys.P, p.z, p.xi));
        for (const BiPoly& vi : sys.v) res.adjugate = std::max(res.adjugate, rel_residual(vi, p.z, p.xi));
    }
    return res;
}

CanonicalReport verify_canonical(const MatPoly& phi, const BracketSpec& spec, const CVector& s,
                                 const Tolerances& tol) {
    const DivisorCoords base = divisor_coords(phi, s, tol);
    CanonicalReport rep;
    rep.points = base.points;
    const std::size_t g = base.count;
    const std::size_t dim = phi.dim();
    if (g == 0) return rep;

    double dmin = 1e300;
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = a + 1; b < g; ++b)
            dmin = std::min(dmin, std::abs(base.points[a].z - base.points[b].z) +
                                      std::abs(base.points[a].xi - base.points[b].xi));

    const CVector x = phi.flat();
    std::vector<CVector> gz(g, CVector(dim)), gx(g, CVector(dim));
    auto solve_matched = [&](const CVector& xp) {
        const DivisorCoords d = divisor_coords(MatPoly(phi.r, phi.n, xp), s, tol);
        if (d.count != g) throw Error(ErrorKind::convergence, "matching failed, reduce h_rel");
        std::vector<DivisorPoint> matched(g);
        for (std::size_t mu = 0; mu < g; ++mu) {
            double best = 1e300;
            for (const DivisorPoint& p : d.points) {
                const double dist = std::abs(p.z - base.points[mu].z) + std::abs(p.xi - base.points[mu].xi);
                if (dist < best) {
                    best = dist;
                    matched[mu] = p;
                }
            }
            if (best > 0.5 * dmin) throw Error(ErrorKind::convergence, "matching failed, reduce h_rel");
        }
        return matched;
    };
    CVector xp = x;
    for (std::size_t alpha = 0; alpha < dim; ++alpha) {
        const double h = tol.fd_h_rel * std::max(1.0, std::abs(x[alpha]));
        xp[alpha] = x[alpha] + h;
        const auto plus = solve_matched(xp);
        xp[alpha] = x[alpha] - h;
        const auto minus = solve_matched(xp);
        xp[alpha] = x[alpha];
        for (std::size_t mu = 0; mu < g; ++mu) {
            gz[mu][alpha] = (plus[mu].z - minus[mu].z) / (2.0 * h);
            gx[mu][alpha] = (plus[mu].xi - minus[mu].xi) / (2.0 * h);
        }
    }

    const StructureTensor t = structure_tensor(phi.r, phi.n, spec);
    const CVector pi = t.poisson_matrix(x);
    rep.z_xi.assign(g, CVector(g));
    rep.z_z.assign(g, CVector(g));
    rep.xi_xi.assign(g, CVector(g));
    for (std::size_t mu = 0; mu < g; ++mu)
        for (std::size_t nu = 0; nu < g; ++nu) {
            rep.z_xi[mu][nu] = bracket_from_gradients(gz[mu], pi, gx[nu]);
            rep.z_z[mu][nu] = bracket_from_gradients(gz[mu], pi, gz[nu]);
            rep.xi_xi[mu][nu] = bracket_from_gradients(gx[mu], pi, gx[nu]);
            const cplx target =
                mu == nu ? spec.a(base.points[mu].z) + spec.b * base.points[mu].xi : cplx{};
            rep.max_z_xi = std::max(rep.max_z_xi, std::abs(rep.z_xi[mu][nu] - target));
            rep.max_z_z = std::max(rep.max_z_z, std::abs(rep.z_z[mu][nu]));
            rep.max_xi_xi = std::max(rep.max_xi_xi, std::abs(rep.xi_xi[mu][nu]));
        }
    return rep;
}

GenericInstance generic_instance(std::size_t r, std::size_t n, std::uint64_t seed, const Tolerances& tol) {
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const std::uint64_t sd = seed * 7919ULL + k;
        MatPoly phi = random_matpoly(r, n, sd);
        try {
            GenusInfo gi = genus(phi, tol);
            return {std::move(phi), sd, std::move(gi)};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::non_generic) throw;
        }
    }
    throw Error(ErrorKind::non_generic, "could not draw a generic instance");
}

}  // namespace sov::rational
