#include "sov/kernel/ode.hpp"

#include <algorithm>
#include <cmath>

namespace sov {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

CVector axpy(const CVector& x, double h, std::initializer_list<std::pair<double, const CVector*>> terms) {
    CVector y = x;
    for (const auto& [c, k] : terms)
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * c * (*k)[i];
    return y;
}

struct Step {
    CVector x;
    CVector k7;
    double err;
};

Step dp_step(const VectorField& f, double t, const CVector& x, const CVector& k1, double h,
             const OdeOptions& opt) {
    const CVector k2 = f(t + c2 * h, axpy(x, h, {{a21, &k1}}));
    const CVector k3 = f(t + c3 * h, axpy(x, h, {{a31, &k1}, {a32, &k2}}));
    const CVector k4 = f(t + c4 * h, axpy(x, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const CVector k5 = f(t + c5 * h, axpy(x, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const CVector k6 =
        f(t + h, axpy(x, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    CVector xn = axpy(x, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    CVector k7 = f(t + h, xn);
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = opt.atol + opt.rtol * std::max(std::abs(x[i]), std::abs(xn[i]));
        err = std::max(err, std::abs(e) / sc);
    }
    return {std::move(xn), std::move(k7), err};
}

bool finite_state(const CVector& x) {
    return std::all_of(x.begin(), x.end(), [](cplx v) { return is_finite(v); });
}

}  // namespace

std::vector<CVector> ode_solve(const VectorField& field, const CVector& x0,
                               const std::vector<double>& t_grid, const OdeOptions& opt) {
    std::vector<CVector> out;
    if (t_grid.empty()) return out;
    CVector x = x0;
    double t = t_grid.front();
    out.push_back(x);
    CVector k1 = field(t, x);
    double h = opt.fixed_step > 0.0 ? opt.fixed_step : 1e-3;
    int steps = 0;
    for (std::size_t g = 1; g < t_grid.size(); ++g) {
        const double target = t_grid[g];
        const double dir = target >= t ? 1.0 : -1.0;
        while (dir * (target - t) > 1e-15 * std::max(1.0, std::abs(target))) {
            if (++steps > opt.max_steps) throw Error(ErrorKind::convergence, "stiff or singular flow");
            double hs = std::min(std::abs(h), std::abs(target - t)) * dir;
            if (opt.fixed_step > 0.0) {
                Step s = dp_step(field, t, x, k1, hs, opt);
                if (!finite_state(s.x)) throw Error(ErrorKind::convergence, "stiff or singular flow");
                x = std::move(s.x);
                k1 = std::move(s.k7);
                t += hs;
                continue;
            }
            Step s = dp_step(field, t, x, k1, hs, opt);
            if (!finite_state(s.x)) s.err = 1e10;
            if (s.err <= 1.0) {
                x = std::move(s.x);
                k1 = std::move(s.k7);
                t += hs;
                const double fac = s.err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(s.err, -0.2), 0.2, 5.0);
                h = std::abs(hs) * fac;
            } else {
                h = std::abs(hs) * std::clamp(0.9 * std::pow(s.err, -0.2), 0.1, 0.5);
            }
            if (h < 1e-14 * std::max(1.0, std::abs(t))) throw Error(ErrorKind::convergence, "stiff or singular flow");
        }
        t = target;
        out.push_back(x);
    }
    return out;
}

CVector fd_gradient(const ScalarField& f, const CVector& x, double h_rel) {
    CVector g(x.size());
    CVector xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = h_rel * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        const cplx fp = f(xp);
        xp[i] = x[i] - h;
        const cplx fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace sov
