#include <cmath>

#include "doctest.h"
#include "sov/elliptic/elliptic.hpp"

using namespace sov;
using namespace sov::elliptic;

namespace {

const cplx I(0.0, 1.0);

}  // namespace

TEST_CASE("domain reduction and divisor normalisation") {
    const ThetaParams p(cplx(0.1, 1.0), 2);
    const cplx z(0.37, 0.21);
    const cplx moved = z + 3.0 * p.omega1() - 2.0 * p.omega2();
    CHECK(std::abs(reduce_to_domain(moved, p) - reduce_to_domain(z, p)) < 1e-14);
    CHECK(torus_distance(moved, z, p) < 1e-14);
    const EllipticDivisor d = normalize(EllipticDivisor{{{z, 1}, {moved, 2}, {cplx(0.1, 0.1), 1}}}, p);
    REQUIRE(d.parts.size() == 2);
    CHECK(d.degree() == 4);
    CHECK(d.parts[0].mult == 3);
    CHECK_THROWS_AS(normalize(EllipticDivisor{{{z, 0}}}, p), Error);
    CHECK_THROWS_AS(normalize(EllipticDivisor{}, p), Error);
}

TEST_CASE("basis multipliers and ranks") {
    struct Case {
        int r;
        EllipticDivisor d;
    };
    const std::vector<Case> cases{
        {2, {{{cplx(0.13, 0.21), 1}}}},
        {2, {{{cplx(0.13, 0.21), 1}, {cplx(0.31, 0.07), 1}}}},
        {2, {{{cplx(0.13, 0.21), 2}}}},
        {3, {{{cplx(0.05, 0.12), 1}, {cplx(0.2, 0.25), 2}}}},
    };
    for (const Case& c : cases) {
        const EllipticBasis b(c.d, ThetaParams(cplx(0.1, 1.0), c.r));
        const MultiplierReport rep = check_basis(b);
        CHECK(rep.omega1 < 1e-10);
        CHECK(rep.omega2 < 1e-10);
        REQUIRE(rep.rank.size() == static_cast<std::size_t>(c.r * c.r));
        for (std::size_t k : rep.rank) CHECK(k == static_cast<std::size_t>(b.n()));
    }
}

TEST_CASE("rank one basis is scalar elliptic") {
    const EllipticBasis b(EllipticDivisor{{{cplx(0.3, 0.4), 2}}}, ThetaParams(I, 1));
    CHECK(b.eval(0, 0, 0, cplx(0.123, 0.77)) == cplx(1.0));
    const MultiplierReport rep = check_basis(b);
    CHECK(rep.omega1 < 1e-10);
    CHECK(rep.omega2 < 1e-10);
    CHECK(rep.rank.front() == 2);
}

TEST_CASE("assembled Lax matrix") {
    for (int n = 1; n <= 2; ++n) {
        const EllipticInstance inst = random_elliptic_instance(2, n, cplx(0.1, 1.0), 10 + n);
        const EllipticLax phi = assemble_lax(inst.coeffs, inst.divisor, inst.params, cplx(0.02, -0.03));
        CHECK(quasi_periodicity_residual(phi) < 1e-8);
        CHECK(invariants_periodicity_residual(phi) < 1e-8);
        const ResidueReport res = residue_check(phi);
        CHECK(std::abs(res.residue_sum) < 1e-8);
        CHECK(std::abs(res.boundary_integral) < 1e-8);
        for (const DivisorPart& part : inst.divisor.parts) {
            CHECK(laurent_coefficient(phi, part.nu - phi.z0(), 1) > 1e-6);
            CHECK(laurent_coefficient(phi, part.nu - phi.z0(), 2) < 1e-8);
        }
    }
    CHECK_THROWS_AS(assemble_lax(CVector(3), EllipticDivisor{{{0.1, 1}}}, ThetaParams(I, 2)), Error);
}

TEST_CASE("double pole of the Lax matrix") {
    const ThetaParams p(cplx(0.1, 1.0), 2);
    const EllipticDivisor d{{{cplx(0.2, 0.3), 2}}};
    CVector coeffs;
    for (int k = 0; k < 8; ++k) coeffs.push_back(cplx(0.1 * k - 0.3, 0.05 * k));
    const EllipticLax phi = assemble_lax(coeffs, d, p);
    CHECK(laurent_coefficient(phi, d.parts[0].nu, 2) > 1e-6);
    CHECK(laurent_coefficient(phi, d.parts[0].nu, 3) < 1e-8);
}

TEST_CASE("elliptic separating points") {
    for (int n = 1; n <= 2; ++n)
        for (std::uint64_t seed = 1; seed <= 2; ++seed) {
            const EllipticInstance inst = random_elliptic_instance(2, n, cplx(0.1, 1.0), seed);
            const EllipticLax phi = assemble_lax(inst.coeffs, inst.divisor, inst.params);
            const EllipticDivisorResult res = elliptic_divisor_coords(phi);
            CHECK(res.genus == n + 1);
            CHECK(res.branch_count == 2 * n);
            CHECK(static_cast<int>(res.points.size()) == res.argument_count);
            CHECK(res.argument_count == res.genus);
            CHECK(res.curve_residual < 1e-9);
            CHECK(res.adjugate_residual < 1e-9);
            const TranslationReport tr = translation_check(phi, cplx(0.031, 0.017));
            CHECK(tr.counts_match);
            CHECK(tr.max_z < 1e-8);
            CHECK(tr.max_xi < 1e-8);
        }
}

TEST_CASE("elliptic genus for rank three") {
    const EllipticInstance inst = random_elliptic_instance(3, 1, cplx(0.1, 1.0), 1);
    const EllipticLax phi = assemble_lax(inst.coeffs, inst.divisor, inst.params);
    const EllipticGenus g = elliptic_genus(phi);
    CHECK(g.branch_count == 6);
    CHECK(g.genus == 4);
}

TEST_CASE("centre of mass reduction") {
    const std::vector<FundamentalDomainPoint> pts{{0.1, 2.0, 0}, {0.3, 3.0, 1}, {cplx(0.2, 0.1), cplx(-1.0, 0.5), 0}};
    const auto red = slr_reduce(pts);
    cplx zs{}, xp = 1.0;
    for (const auto& q : red) {
        zs += q.z;
        xp *= q.xi;
    }
    CHECK(std::abs(zs) < 1e-12);
    CHECK(std::abs(xp - 1.0) < 1e-12);

    const std::vector<FundamentalDomainPoint> two{{0.1, 2.0, 0}, {0.3, 3.0, 0}};
    const auto lit = slr_reduce_literal(two);
    CHECK(std::abs(lit[0].z - (-0.1)) < 1e-15);
    CHECK(std::abs(lit[1].z - 0.1) < 1e-15);
    CHECK(std::abs(lit[0].xi - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(lit[1].xi - 0.5) < 1e-15);

    const std::vector<FundamentalDomainPoint> one{{cplx(0.4, 0.2), 5.0, 0}};
    CHECK(std::abs(slr_reduce(one)[0].xi - 1.0) < 1e-15);
    CHECK(std::abs(slr_reduce_literal(one)[0].xi - 1.0) < 1e-15);
    CHECK(std::abs(slr_reduce(one)[0].z) < 1e-15);
}
