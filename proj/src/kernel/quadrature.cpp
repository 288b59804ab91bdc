#include "sov/kernel/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace sov {

namespace {

constexpr int kNodes = 12;

struct Rule {
    std::array<double, kNodes> x{};
    std::array<double, kNodes> w{};
};

Rule make_rule() {
    Rule rule;
    for (int i = 0; i < kNodes; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (kNodes + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= kNodes; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = kNodes * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.x[i] = x;
        rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const Rule& rule() {
    static const Rule r = make_rule();
    return r;
}

cplx panel(const Integrand& f, cplx a, cplx b) {
    const Rule& g = rule();
    const cplx mid = 0.5 * (a + b);
    const cplx half = 0.5 * (b - a);
    cplx acc{};
    for (int i = 0; i < kNodes; ++i) acc += g.w[i] * f(mid + half * g.x[i]);
    return acc * half;
}

void adapt(const Integrand& f, cplx a, cplx b, cplx whole, double budget, int depth,
           const Tolerances& tol, QuadResult& out) {
    const cplx m = 0.5 * (a + b);
    const cplx left = panel(f, a, m);
    const cplx right = panel(f, m, b);
    const double err = std::abs(left + right - whole);
    if (!is_finite(left + right)) throw Error(ErrorKind::singular, "singular path");
    if (err <= budget * std::max(1.0, std::abs(whole)) || err == 0.0) {
        out.value += left + right;
        out.error += err;
        return;
    }
    if (depth >= tol.quad_max_depth) throw Error(ErrorKind::singular, "singular path");
    adapt(f, a, m, left, 0.5 * budget, depth + 1, tol, out);
    adapt(f, m, b, right, 0.5 * budget, depth + 1, tol, out);
}

}  // namespace

PathSpec PathSpec::reversed() const { return PathSpec{CVector(waypoints.rbegin(), waypoints.rend())}; }

QuadResult integrate_segment(const Integrand& f, cplx a, cplx b, const Tolerances& tol) {
    QuadResult out{};
    if (a == b) return out;
    adapt(f, a, b, panel(f, a, b), tol.quad, 0, tol, out);
    return out;
}

QuadResult integrate_path(const Integrand& f, const PathSpec& path, const Tolerances& tol) {
    if (path.waypoints.size() < 2) throw Error(ErrorKind::schema, "path needs at least two waypoints");
    QuadResult out{};
    for (std::size_t k = 0; k + 1 < path.waypoints.size(); ++k) {
        if (path.waypoints[k] == path.waypoints[k + 1])
            throw Error(ErrorKind::schema, "path has repeated waypoint");
        QuadResult seg = integrate_segment(f, path.waypoints[k], path.waypoints[k + 1], tol);
        out.value += seg.value;
        out.error += seg.error;
    }
    return out;
}

}  // namespace sov
