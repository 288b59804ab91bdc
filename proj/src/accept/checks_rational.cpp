#include <algorithm>
#include <cmath>
#include <random>

#include "checks.hpp"
#include "sov/kernel/roots.hpp"
#include "sov/rational/divisor.hpp"
#include "sov/rational/flow.hpp"

namespace sov::accept::detail {

namespace {

using namespace sov::rational;

struct Shape {
    std::size_t r, n;
};
const std::vector<Shape> kShapes{{2, 2}, {2, 3}, {3, 1}};

std::string tag(Shape s) { return "r" + std::to_string(s.r) + "n" + std::to_string(s.n); }

cplx unit_disk(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) <= 1.0) return z;
    }
}

BracketSpec random_spec(std::mt19937_64& rng, std::size_t n) {
    CVector a(n + 2);
    for (cplx& c : a) c = unit_disk(rng);
    return BracketSpec{Poly(a), unit_disk(rng)};
}

double max_abs(const CVector& v) {
    double m = 0.0;
    for (cplx c : v) m = std::max(m, std::abs(c));
    return m;
}

std::vector<CheckRecord> involution(const Context& ctx, Shape sh) {
    std::mt19937_64 rng(ctx.seed);
    double worst = 0.0;
    const auto pos = spectral_positions(sh.r, sh.n);
    for (int k = 0; k < 20; ++k) {
        const MatPoly phi = generic_instance(sh.r, sh.n, rng()).phi;
        const auto grads = spectral_gradients(phi, pos);
        for (int s = 0; s < 5; ++s) {
            const CVector pi = structure_tensor(sh.r, sh.n, random_spec(rng, sh.n)).poisson_matrix(phi.flat());
            const double pmax = max_abs(pi);
            for (std::size_t i = 0; i < pos.size(); ++i)
                for (std::size_t j = i + 1; j < pos.size(); ++j) {
                    const double scale = pmax * max_abs(grads[i]) * max_abs(grads[j]);
                    if (scale == 0.0) continue;
                    worst = std::max(worst, std::abs(bracket_from_gradients(grads[i], pi, grads[j])) / scale);
                }
        }
    }
    return {record("c1.involution." + tag(sh), 1, tag(sh) + " instances=20 specs=5 pairs=all", worst, 1e-6 * ctx.tol_scale)};
}

std::vector<CheckRecord> jacobi(const Context& ctx, Shape sh) {
    std::mt19937_64 rng(ctx.seed);
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
        const StructureTensor t = structure_tensor(sh.r, sh.n, random_spec(rng, sh.n));
        std::uniform_int_distribution<std::size_t> idx(0, t.dim - 1);
        for (int k = 0; k < 10; ++k) {
            const CVector x = random_matpoly(sh.r, sh.n, rng()).flat();
            const std::size_t a = idx(rng), b = idx(rng), c = idx(rng);
            const JacobiResidual j = jacobi_residual(t, x, a, b, c);
            worst = std::max(worst, std::abs(j.sum) / j.scale);
        }
    }
    return {record("c2.jacobi." + tag(sh), 2, tag(sh) + " triples=10 specs=5", worst, 1e-10 * ctx.tol_scale)};
}

std::vector<CheckRecord> isospectral(const Context& ctx, Shape sh) {
    std::mt19937_64 rng(ctx.seed);
    const MatPoly phi = generic_instance(sh.r, sh.n, rng()).phi;
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    double worst = 0.0;
    std::size_t flows = 0;
    for (const BracketSpec& spec : {BracketSpec{Poly{1.0}, 0.0}, BracketSpec{Poly{}, 1.0}, random_spec(rng, sh.n)}) {
        for (const CoeffPos& h : casimir_detect(phi, spec).hamiltonians) {
            worst = std::max(worst, isospectral_drift(flow(phi, h, spec, grid)));
            ++flows;
        }
    }
    return {record("c3.isospectral." + tag(sh), 3, tag(sh) + " specs=(1,0),(0,1),random t=[0,1]", worst, 1e-8 * ctx.tol_scale,
                   "flows=" + std::to_string(flows))};
}

std::vector<CheckRecord> canonical(const Context& ctx, std::size_t n) {
    std::mt19937_64 rng(ctx.seed);
    const MatPoly phi = generic_instance(2, n, rng()).phi;
    const BracketSpec rnd = random_spec(rng, n);
    std::vector<CheckRecord> out;
    const std::vector<std::pair<std::string, BracketSpec>> specs{
        {"a1b0", BracketSpec{Poly{1.0}, 0.0}}, {"a0b1", BracketSpec{Poly{}, 1.0}}, {"random", rnd}};
    for (const auto& [label, spec] : specs) {
        const CanonicalReport rep = verify_canonical(phi, spec, CVector{1.0, 0.0});
        const std::string base = "c4.canonical.r2n" + std::to_string(n) + "." + label;
        const std::string inputs = "r2n" + std::to_string(n) + " spec=" + label + " s=e1";
        const std::string pts = "points=" + std::to_string(rep.points.size());
        out.push_back(record(base + ".z_xi", 4, inputs, rep.max_z_xi, 1e-4 * ctx.tol_scale, pts));
        out.push_back(record(base + ".z_z", 4, inputs, rep.max_z_z, 1e-4 * ctx.tol_scale, pts));
        out.push_back(record(base + ".xi_xi", 4, inputs, rep.max_xi_xi, 1e-4 * ctx.tol_scale, pts));
    }
    return out;
}

bool inside_triangle(cplx a, cplx b, cplx c, cplx p) {
    auto side = [](cplx u, cplx v, cplx w) { return ((v - u) * std::conj(w - u)).imag(); };
    const double s1 = side(a, b, p), s2 = side(b, c, p), s3 = side(c, a, p);
    return (s1 > 0 && s2 > 0 && s3 > 0) || (s1 < 0 && s2 < 0 && s3 < 0);
}

double segment_clearance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(a + t * d - p);
}

// Integrals along the routed path versus the same path with an extra waypoint
// bending its first segment inside a branch-free triangle.
double path_independence(const AbelianSetup& setup, cplx z0, const std::vector<DivisorPoint>& pts) {
    double worst = 0.0;
    for (const DivisorPoint& p : pts) {
        const PathSpec a = route_path(p.z, z0, setup.branch_points, setup.r_branch);
        const cplx s = a.waypoints[0], e = a.waypoints[1];
        bool found = false;
        PathSpec b;
        for (double eps : {0.3, -0.3, 0.15, -0.15, 0.05, -0.05}) {
            const cplx w = 0.5 * (s + e) + eps * cplx(0.0, 1.0) * (e - s);
            bool ok = true;
            for (cplx bp : setup.branch_points)
                if (inside_triangle(s, e, w, bp) || segment_clearance(bp, s, w) < setup.r_branch ||
                    segment_clearance(bp, w, e) < setup.r_branch)
                    ok = false;
            if (!ok) continue;
            b = a;
            b.waypoints.insert(b.waypoints.begin() + 1, w);
            found = true;
            break;
        }
        if (!found) continue;
        const PathIntegral ia = abelian_integrals(setup, a, p.xi), ib = abelian_integrals(setup, b, p.xi);
        worst = std::max(worst, std::abs(ia.xi_end - ib.xi_end));
        for (std::size_t i = 0; i < ia.values.size(); ++i) worst = std::max(worst, std::abs(ia.values[i] - ib.values[i]));
    }
    return worst;
}

std::vector<CheckRecord> linearization(const Context& ctx) {
    std::mt19937_64 rng(ctx.seed);
    const GenericInstance inst = generic_instance(2, 3, rng());
    const BracketSpec spec{Poly{1.0}, 0.0};
    const CVector s{1.0, 0.0};
    const auto hams = casimir_detect(inst.phi, spec).hamiltonians;
    const cplx z0 = choose_base_point(inst.genus.branch_points);
    std::vector<double> grid;
    for (int k = 0; k <= 32; ++k) grid.push_back(0.2 * k / 32);
    std::vector<std::size_t> samples;
    for (std::size_t k = 0; k <= 32; k += 4) samples.push_back(k);
    double fit_worst = 0.0, slope_dev = 0.0;
    for (std::size_t j = 0; j < hams.size(); ++j) {
        const Trajectory tr = flow(inst.phi, hams[j], spec, grid);
        const LinearFit fit = fit_linear(linearize(tr, spec, z0, s, hams), samples);
        for (std::size_t i = 0; i < fit.residual.size(); ++i) {
            fit_worst = std::max(fit_worst, fit.residual[i]);
            slope_dev = std::max(slope_dev, std::abs(fit.slope[i] - (i == j ? 1.0 : 0.0)));
        }
    }
    const AbelianSetup setup = make_abelian_setup(inst.phi, spec, hams);
    const double paths = path_independence(setup, z0, divisor_coords(inst.phi, s).points);
    const std::string inputs = "r2n3 a=1 b=0 samples=9 T=0.2";
    char buf[64];
    std::snprintf(buf, sizeof buf, "max|slope-delta|=%.3e", slope_dev);
    return {record("c5.linearization.fit", 5, inputs, fit_worst, 1e-5 * ctx.tol_scale, buf),
            record("c5.linearization.path_independence", 5, inputs, paths, 1e-8 * ctx.tol_scale)};
}

std::vector<CheckRecord> genus_count(const Context& ctx, Shape sh) {
    std::mt19937_64 rng(ctx.seed);
    const int predicted = static_cast<int>(sh.r * (sh.r - 1) * sh.n / 2) - static_cast<int>(sh.r) + 1;
    int mismatches = 0;
    std::size_t lo = static_cast<std::size_t>(-1), hi = 0;
    CVector s(sh.r);
    s[0] = 1.0;
    for (int k = 0; k < 20; ++k) {
        const GenericInstance inst = generic_instance(sh.r, sh.n, rng());
        if (inst.genus.genus != predicted) ++mismatches;
        const std::size_t c = divisor_coords(inst.phi, s).count;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    const std::string inputs = tag(sh) + " instances=20 s=e1";
    return {record("c6.genus." + tag(sh), 6, inputs, mismatches, 0.0, "g=" + std::to_string(predicted)),
            record("c6.count." + tag(sh), 6, inputs, static_cast<double>(hi - lo), 0.0,
                   "count=" + std::to_string(lo) + " g=" + std::to_string(predicted))};
}

}  // namespace

std::vector<Job> rational_jobs() {
    std::vector<Job> jobs;
    for (Shape sh : kShapes) {
        jobs.push_back({"c1.involution." + tag(sh), 1, [sh](const Context& c) { return involution(c, sh); }});
        jobs.push_back({"c2.jacobi." + tag(sh), 2, [sh](const Context& c) { return jacobi(c, sh); }});
        jobs.push_back({"c3.isospectral." + tag(sh), 3, [sh](const Context& c) { return isospectral(c, sh); }});
        jobs.push_back({"c6." + tag(sh), 6, [sh](const Context& c) { return genus_count(c, sh); }});
    }
    for (std::size_t n : {2u, 3u})
        jobs.push_back({"c4.canonical.r2n" + std::to_string(n), 4, [n](const Context& c) { return canonical(c, n); }});
    jobs.push_back({"c5.linearization", 5, [](const Context& c) { return linearization(c); }});
    return jobs;
}

}  // namespace sov::accept::detail
