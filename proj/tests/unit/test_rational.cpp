#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sov/kernel/roots.hpp"
#include "sov/rational/divisor.hpp"
#include "sov/rational/flow.hpp"
#include "sov/rational/spectral.hpp"
#include "test_helpers.hpp"

using namespace sov;
using namespace sov::rational;

namespace {

bool contains(const std::vector<CoeffPos>& v, CoeffPos p) { return std::find(v.begin(), v.end(), p) != v.end(); }

}  // namespace

TEST_CASE("spectral curve of a scalar") {
    const MatPoly phi = random_matpoly(1, 3, 2);
    const SpectralCurve c = spectral_curve(phi);
    REQUIRE(c.P.deg_xi() == 1);
    CHECK(std::abs(c.P.coeff(1, 0) + 1.0) < 1e-15);
    for (int l = 0; l <= 3; ++l) CHECK(std::abs(c.P.coeff(0, l) - phi.coeffs[l](0, 0)) < 1e-15);
}

TEST_CASE("spectral curve of a diagonal matrix") {
    MatPoly phi(2, 2);
    const Poly p{1.0, cplx(0, 2), 3.0}, q{-1.0, 0.5, cplx(1, 1)};
    for (int k = 0; k <= 2; ++k) {
        phi.coeffs[k](0, 0) = p.coeff(k);
        phi.coeffs[k](1, 1) = q.coeff(k);
    }
    const BiPoly want = BiPoly({p, Poly{-1.0}}) * BiPoly({q, Poly{-1.0}});
    const SpectralCurve c = spectral_curve(phi);
    for (int k = 0; k <= 2; ++k)
        for (int l = 0; l <= 4; ++l) CHECK(std::abs(c.P.coeff(k, l) - want.coeff(k, l)) < 1e-14);
}

TEST_CASE("spectral curve matches determinant evaluation") {
    std::mt19937_64 rng(3);
    const MatPoly phi = random_matpoly(2, 2, 11);
    const SpectralCurve c = spectral_curve(phi);
    for (int k = 0; k < 25; ++k) {
        const cplx z = 2.0 * sovtest::unit_disk(rng), xi = 2.0 * sovtest::unit_disk(rng);
        const cplx d = determinant(phi(z) - CMatrix::identity(2) * xi);
        CHECK(std::abs(c.P(z, xi) - d) < 1e-10 * std::max(1.0, std::abs(d)));
    }
}

TEST_CASE("spectral gradients agree with finite differences") {
    const MatPoly phi = random_matpoly(3, 1, 5);
    const auto pos = spectral_positions(3, 1);
    const auto grads = spectral_gradients(phi, pos);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const ScalarField f = [&](const CVector& x) { return spectral_values(MatPoly(3, 1, x), {pos[i]})[0]; };
        const CVector fd = fd_gradient(f, phi.flat());
        for (std::size_t k = 0; k < fd.size(); ++k) CHECK(std::abs(fd[k] - grads[i][k]) < 1e-7);
    }
}

TEST_CASE("genus of generic curves") {
    CHECK(genus(generic_instance(2, 2, 1).phi).branch_count == 4);
    CHECK(genus(generic_instance(2, 2, 1).phi).genus == 1);
    CHECK(genus(generic_instance(2, 3, 1).phi).branch_count == 6);
    CHECK(genus(generic_instance(2, 3, 1).phi).genus == 2);
    CHECK(genus(generic_instance(3, 1, 1).phi).genus == 1);
    CHECK(genus(random_matpoly(1, 4, 3)).genus == 0);
    CHECK(genus(random_matpoly(1, 4, 3)).branch_count == 0);
}

TEST_CASE("genus rejects degenerate leading matrices") {
    MatPoly phi = random_matpoly(2, 2, 4);
    phi.coeffs[2] = CMatrix::identity(2);
    CHECK_THROWS_AS(genus(phi), Error);
}

TEST_CASE("Casimirs of the linear bracket") {
    const std::size_t r = 2, n = 2;
    const MatPoly phi = generic_instance(r, n, 2).phi;
    const CasimirSplit split = casimir_detect(phi, BracketSpec{Poly{1.0}, 0.0});
    for (int k = 0; k < static_cast<int>(r); ++k) CHECK(contains(split.casimirs, CoeffPos{k, (static_cast<int>(r) - k) * static_cast<int>(n)}));
    CHECK(split.hamiltonians.size() == 2);
    const CasimirSplit scalar = casimir_detect(random_matpoly(1, 2, 1), BracketSpec{Poly{1.0}, 0.0});
    CHECK(scalar.hamiltonians.empty());
    CHECK(scalar.casimirs.size() == spectral_positions(1, 2).size());
}

TEST_CASE("spectral Hamiltonians are in involution") {
    std::mt19937_64 rng(8);
    const MatPoly phi = generic_instance(2, 3, 3).phi;
    const auto pos = spectral_positions(2, 3);
    const auto grads = spectral_gradients(phi, pos);
    for (int s = 0; s < 3; ++s) {
        const BracketSpec spec{Poly(sovtest::unit_disk_vector(rng, 5)), sovtest::unit_disk(rng)};
        const CVector pi = structure_tensor(2, 3, spec).poisson_matrix(phi.flat());
        double scale = 0.0;
        for (cplx v : pi) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < pos.size(); ++i)
            for (std::size_t j = 0; j < pos.size(); ++j) {
                double gi = 0.0, gj = 0.0;
                for (cplx v : grads[i]) gi = std::max(gi, std::abs(v));
                for (cplx v : grads[j]) gj = std::max(gj, std::abs(v));
                CHECK(std::abs(bracket_from_gradients(grads[i], pi, grads[j])) < 1e-10 * scale * gi * gj);
            }
    }
}

TEST_CASE("divisor of an anti-diagonal matrix") {
    // phi = [[0, 1], [c(z), 0]], s = e1: v = (-xi, -c(z)), points (z*, 0) with c(z*) = 0
    const Poly c{cplx(0.3, 0.1), -1.0, cplx(0.5, 0.2)};
    MatPoly phi(2, 2);
    phi.coeffs[0](0, 1) = 1.0;
    for (int k = 0; k <= 2; ++k) phi.coeffs[k](1, 0) = c.coeff(k);
    const DivisorCoords d = divisor_coords(phi, CVector{1.0, 0.0});
    const CVector zs = poly_roots_flat(c);
    REQUIRE(d.count == 2);
    for (const DivisorPoint& p : d.points) {
        CHECK(std::abs(p.xi) < 1e-12);
        double best = 1e300;
        for (cplx z : zs) best = std::min(best, std::abs(z - p.z));
        CHECK(best < 1e-12);
    }
}

TEST_CASE("divisor points satisfy the curve and adjugate equations") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const MatPoly phi = generic_instance(2, 2, seed).phi;
        const DivisorCoords d = divisor_coords(phi, CVector{1.0, 0.0});
        const DivisorResidual res = divisor_residual(phi, d);
        CHECK(res.curve < 1e-9);
        CHECK(res.adjugate < 1e-9);
    }
}

TEST_CASE("divisor count is constant across instances") {
    for (std::size_t n : {2u, 3u}) {
        std::vector<std::size_t> counts;
        for (std::uint64_t seed = 1; seed <= 6; ++seed)
            counts.push_back(divisor_coords(generic_instance(2, n, seed).phi, CVector{1.0, 0.0}).count);
        for (std::size_t c : counts) CHECK(c == n);
    }
}

TEST_CASE("divisor coordinates are canonical") {
    const MatPoly phi = generic_instance(2, 2, 4).phi;
    const CVector s{1.0, 0.0};
    for (const BracketSpec& spec : {BracketSpec{Poly{1.0}, 0.0}, BracketSpec{Poly{}, 1.0},
                                    BracketSpec{Poly{0.4, cplx(0.2, -0.1), 0.3}, cplx(-0.5, 0.3)}}) {
        const CanonicalReport rep = verify_canonical(phi, spec, s);
        CHECK(rep.max_z_xi < 1e-4);
        CHECK(rep.max_z_z < 1e-4);
        CHECK(rep.max_xi_xi < 1e-4);
        for (std::size_t m = 0; m < rep.z_z.size(); ++m) CHECK(std::abs(rep.z_z[m][m]) < 1e-12);
    }
}

namespace {

std::vector<double> grid(double T, int steps) {
    std::vector<double> t;
    for (int k = 0; k <= steps; ++k) t.push_back(T * k / steps);
    return t;
}

double distance(const MatPoly& a, const MatPoly& b) {
    const CVector x = a.flat(), y = b.flat();
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
    return d;
}

}  // namespace

TEST_CASE("Casimir flow is stationary") {
    const MatPoly phi = generic_instance(2, 2, 5).phi;
    const BracketSpec spec{Poly{1.0}, 0.0};
    const Trajectory tr = flow(phi, CoeffPos{0, 4}, spec, grid(1.0, 4));
    for (const MatPoly& m : tr.states) CHECK(distance(m, phi) < 1e-9);
}

TEST_CASE("Hamiltonian flows are isospectral") {
    const MatPoly phi = generic_instance(2, 3, 6).phi;
    for (const BracketSpec& spec : {BracketSpec{Poly{1.0}, 0.0}, BracketSpec{Poly{0.2, -0.3}, cplx(0.4, 0.1)}}) {
        const CasimirSplit split = casimir_detect(phi, spec);
        REQUIRE(!split.hamiltonians.empty());
        const Trajectory tr = flow(phi, split.hamiltonians.front(), spec, grid(1.0, 8));
        CHECK(isospectral_drift(tr) < 1e-8);
    }
}

TEST_CASE("Hamiltonian flows commute") {
    const MatPoly phi = generic_instance(2, 2, 7).phi;
    const BracketSpec spec{Poly{1.0}, 0.0};
    const CasimirSplit split = casimir_detect(phi, spec);
    REQUIRE(split.hamiltonians.size() >= 2);
    const CoeffPos h1 = split.hamiltonians[0], h2 = split.hamiltonians[1];
    const std::vector<double> t1{0.0, 0.1}, t2{0.0, 0.15};
    const MatPoly a = flow(flow(phi, h1, spec, t1).states.back(), h2, spec, t2).states.back();
    const MatPoly b = flow(flow(phi, h2, spec, t2).states.back(), h1, spec, t1).states.back();
    CHECK(distance(a, b) < 1e-6);
}

TEST_CASE("Abelian integrals are path independent away from branch points") {
    const MatPoly phi = generic_instance(2, 3, 5).phi;
    const BracketSpec spec{Poly{1.0}, 0.0};
    const CasimirSplit split = casimir_detect(phi, spec);
    const AbelianSetup setup = make_abelian_setup(phi, spec, split.hamiltonians);
    const cplx z0 = choose_base_point(setup.branch_points);
    const cplx z1 = z0 + cplx(0.2, 0.1);
    const cplx w = 0.5 * (z0 + z1) + cplx(-0.05, 0.1);
    // no branch point inside the triangle z0, z1, w
    auto side = [](cplx a, cplx b, cplx p) { return ((b - a) * std::conj(p - a)).imag(); };
    for (cplx bp : setup.branch_points) {
        const double s1 = side(z0, z1, bp), s2 = side(z1, w, bp), s3 = side(w, z0, bp);
        REQUIRE(!((s1 > 0 && s2 > 0 && s3 > 0) || (s1 < 0 && s2 < 0 && s3 < 0)));
    }
    const cplx xi0 = poly_roots_flat(setup.P.at_z(z0)).front();
    const PathIntegral a = abelian_integrals(setup, PathSpec{{z0, z1}}, xi0);
    const PathIntegral b = abelian_integrals(setup, PathSpec{{z0, w, z1}}, xi0);
    CHECK(std::abs(a.xi_end - b.xi_end) < 1e-10);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-8);
}

TEST_CASE("routed paths keep clear of branch points") {
    const CVector bps{{0.3, -0.49}, {0.23, -0.8}, {0.0, 0.0}, {0.1, 0.05}, {-0.2, -0.6}};
    const double r = 0.085;
    auto dist = [](cplx p, cplx a, cplx b) {
        const cplx d = b - a;
        const double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
        return std::abs(p - (a + t * d));
    };
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        cplx from = 2.0 * sovtest::unit_disk(rng), to = 2.0 * sovtest::unit_disk(rng);
        if (trial % 4 == 0) from = bps[trial % bps.size()] + 0.005;
        const PathSpec path = route_path(from, to, bps, r);
        const auto& w = path.waypoints;
        REQUIRE(w.size() >= 2);
        CHECK(w.front() == from);
        CHECK(w.back() == to);
        for (std::size_t k = 0; k + 1 < w.size(); ++k) {
            const bool end_leg = (k == 0 && w.size() > 2) || (k + 2 == w.size() && w.size() > 2);
            for (cplx bp : bps) {
                const bool inside = std::abs(w[k] - bp) < r || std::abs(w[k + 1] - bp) < r;
                if (end_leg && inside) continue;
                CHECK(dist(bp, w[k], w[k + 1]) >= r);
            }
        }
    }
}

TEST_CASE("linearizing coordinates move linearly") {
    const MatPoly phi = generic_instance(2, 3, 5).phi;
    const BracketSpec spec{Poly{1.0}, 0.0};
    const CasimirSplit split = casimir_detect(phi, spec);
    const CVector s{1.0, 0.0};
    const cplx z0 = choose_base_point(genus(phi).branch_points);
    const CoeffPos H = split.hamiltonians.front();
    const Trajectory tr = flow(phi, H, spec, grid(0.2, 32));
    const LinearizeResult lin = linearize(tr, spec, z0, s, split.hamiltonians);
    std::vector<std::size_t> samples;
    for (std::size_t k = 0; k <= 32; k += 4) samples.push_back(k);
    const LinearFit fit = fit_linear(lin, samples);
    for (std::size_t i = 0; i < fit.residual.size(); ++i) {
        CHECK(fit.residual[i] < 1e-5);
        CHECK(std::abs(fit.slope[i] - (i == 0 ? 1.0 : 0.0)) < 1e-6);
    }
}

TEST_CASE("generating function derivatives give the linearizing coordinates") {
    const MatPoly phi = generic_instance(2, 3, 5).phi;
    const BracketSpec spec{Poly{1.0}, 0.0};
    const CasimirSplit split = casimir_detect(phi, spec);
    const AbelianSetup setup = make_abelian_setup(phi, spec, split.hamiltonians);
    const cplx z0 = choose_base_point(setup.branch_points);
    const auto pts = divisor_coords(phi, CVector{1.0, 0.0}).points;
    const CVector Q = abel_sum(setup, z0, pts);
    const double h = 1e-5;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        CVector dh(Q.size());
        dh[i] = h;
        const cplx fp = generating_function(setup, z0, pts, dh);
        dh[i] = -h;
        const cplx fm = generating_function(setup, z0, pts, dh);
        CHECK(std::abs((fp - fm) / (2.0 * h) - Q[i]) < 1e-6);
    }
}
