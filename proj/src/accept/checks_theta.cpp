#include <algorithm>
#include <cmath>
#include <random>

#include "checks.hpp"
#include "sov/elliptic/elliptic.hpp"
#include "sov/theta/theta.hpp"

namespace sov::accept::detail {

namespace {

using namespace sov::theta;

const cplx I(0.0, 1.0);

std::string tau_tag(cplx tau) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "tau=(%g,%g)", tau.real(), tau.imag());
    return buf;
}

std::vector<CheckRecord> theta_relations(const Context& ctx, cplx tau, const std::string& label) {
    RelationResiduals worst;
    for (int r = 2; r <= 5; ++r) {
        const RelationResiduals res = relation_residuals(ThetaParams(tau, r), ctx.seed + static_cast<std::uint64_t>(r));
        worst.zero = std::max(worst.zero, res.zero);
        worst.shifts = std::max(worst.shifts, res.shifts);
        worst.period = std::max(worst.period, res.period);
        worst.roots = std::max(worst.roots, res.roots);
    }
    const std::string inputs = tau_tag(tau) + " r=2..5";
    const double t = ctx.tol_scale;
    return {record("c7.theta." + label + ".zero", 7, inputs, worst.zero, 1e-12 * t),
            record("c7.theta." + label + ".shift_relations", 7, inputs, worst.shifts, 1e-12 * t),
            record("c7.theta." + label + ".period", 7, inputs, worst.period, 1e-10 * t),
            record("c7.theta." + label + ".roots", 7, inputs, worst.roots, 1e-8 * t)};
}

std::vector<CheckRecord> elliptic_engine(const Context& ctx, int n) {
    using namespace sov::elliptic;
    std::mt19937_64 rng(ctx.seed);
    double qp = 0.0, inv = 0.0, trans = 0.0, slr = 0.0;
    int mismatches = 0;
    std::string counts;
    const std::vector<cplx> taus{I, cplx(0.1, 1.0), cplx(0.2, 1.1)};
    for (cplx tau : taus) {
        const EllipticInstance inst = random_elliptic_instance(2, n, tau, rng());
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        const EllipticLax phi = assemble_lax(inst.coeffs, inst.divisor, inst.params, cplx(u(rng), u(rng)));
        qp = std::max(qp, quasi_periodicity_residual(phi));
        inv = std::max(inv, invariants_periodicity_residual(phi));
        const EllipticDivisorResult res = elliptic_divisor_coords(phi);
        const int predicted = n + 1;
        const int found = static_cast<int>(res.points.size());
        if (found != res.argument_count || found != predicted || res.genus != predicted) ++mismatches;
        counts += (counts.empty() ? "" : ",") + std::to_string(found);
        const TranslationReport tr = translation_check(phi, cplx(u(rng), u(rng)));
        trans = std::max({trans, tr.max_z, tr.max_xi, tr.counts_match ? 0.0 : 1.0});
        const auto red = slr_reduce(res.points);
        cplx zs{}, xp = 1.0;
        for (const auto& q : red) {
            zs += q.z;
            xp *= q.xi;
        }
        slr = std::max({slr, std::abs(zs), std::abs(xp - 1.0)});
    }
    const std::string tag = "n" + std::to_string(n);
    const std::string inputs = "r=2 n=" + std::to_string(n) + " instances=3";
    const double t = ctx.tol_scale;
    return {record("c8.elliptic." + tag + ".quasi_periodicity", 8, inputs, qp, 1e-8 * t),
            record("c8.elliptic." + tag + ".invariants", 8, inputs, inv, 1e-8 * t),
            record("c8.elliptic." + tag + ".count", 8, inputs, mismatches, 0.0,
                   "points=" + counts + " g=" + std::to_string(n + 1)),
            record("c8.elliptic." + tag + ".translation", 8, inputs, trans, 1e-8 * t),
            record("c8.elliptic." + tag + ".slr_reduce", 8, inputs, slr, 1e-12 * t)};
}

}  // namespace

std::vector<Job> theta_jobs() {
    return {{"c7.theta.tau_i", 7, [](const Context& c) { return theta_relations(c, I, "tau_i"); }},
            {"c7.theta.tau_b", 7, [](const Context& c) { return theta_relations(c, cplx(0.2, 1.1), "tau_b"); }}};
}

std::vector<Job> elliptic_jobs() {
    return {{"c8.elliptic.n1", 8, [](const Context& c) { return elliptic_engine(c, 1); }},
            {"c8.elliptic.n2", 8, [](const Context& c) { return elliptic_engine(c, 2); }}};
}

}  // namespace sov::accept::detail
