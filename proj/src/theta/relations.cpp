#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sov/theta/theta.hpp"

namespace sov::theta {

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

cplx disk_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) <= 1.0) return radius * z;
    }
}

}  // namespace

RelationResiduals relation_residuals(const ThetaParams& p, std::uint64_t seed) {
    constexpr double kPi = std::numbers::pi;
    const cplx I(0.0, 1.0), tau = p.tau;
    const int r = p.r;
    const double dr = r;
    std::mt19937_64 rng(seed);
    RelationResiduals out;
    out.zero = std::abs(riemann_theta((1.0 + tau) / 2.0, tau));
    for (int s = 0; s < 3; ++s) {
        const cplx z = disk_point(rng, 0.5);
        for (int k = 0; k < r; ++k) {
            for (int j = 0; j < r; ++j) {
                out.shifts = std::max(out.shifts, rel(theta_kj(z + 1.0, k, j, p), theta_kj(z, k, j, p)));
                out.shifts = std::max(out.shifts, rel(xi_kj(z + 1.0, k, j, p), xi_kj(z, k, j, p)));
                if (k + 1 < r) {
                    out.shifts = std::max(out.shifts, rel(theta_kj(z + 1.0 / dr, k, j, p), theta_kj(z, k + 1, j, p)));
                    out.shifts = std::max(out.shifts, rel(xi_kj(z + 1.0 / dr, k, j, p), xi_kj(z, k + 1, j, p)));
                }
                if (j + 1 < r) {
                    out.shifts = std::max(out.shifts, rel(theta_kj(z + tau / dr, k, j, p), theta_kj(z, k, j + 1, p)));
                    out.shifts = std::max(out.shifts, rel(xi_kj(z + tau / dr, k, j, p), xi_kj(z, k, j + 1, p)));
                }
            }
            const cplx m = std::exp(-I * kPi * tau - 2.0 * I * kPi * (z + k / dr));
            out.shifts = std::max(out.shifts, rel(theta_kj(z + tau / dr, k, r - 1, p), m * theta_kj(z, k, 0, p)));
            const cplx mx = std::exp(-I * kPi * tau - 2.0 * I * kPi * (z + (2.0 * k - 1.0 - tau) / (2.0 * dr)));
            out.shifts = std::max(out.shifts, rel(xi_kj(z + tau / dr, k, r - 1, p), mx * xi_kj(z, k, 0, p)));
        }
    }
    const CMatrix i2 = i_matrices(r).second;
    for (int s = 0; s < 10; ++s) {
        const cplx z = disk_point(rng, 0.3);
        const CVector f = f_vector(z, p), f1 = f_vector(z + p.omega1(), p), f2 = f_vector(z + p.omega2(), p);
        const CVector sf = i2.apply(f);
        double sc = 0.0;
        for (cplx v : f) sc = std::max(sc, std::abs(v));
        for (int j = 0; j < r; ++j) {
            out.period = std::max(out.period, std::abs(f1[j] - f[j]) / sc);
            out.period = std::max(out.period, std::abs(f2[j] - sf[j]) / sc);
        }
    }
    const BasicSection sec(p);
    for (int s = 0; s < 3; ++s) {
        const cplx z = disk_point(rng, 0.15 / dr);
        const CVector v = sec.at(PathSpec{{0.0, z}}).values;
        const CVector v1 = sec.continue_along(v, PathSpec{{z, z + p.omega1()}});
        const CVector v2 = sec.continue_along(v, PathSpec{{z, z + p.omega2()}});
        for (int i = 0; i < r; ++i) {
            out.roots = std::max(out.roots, std::abs(v1[i] - std::pow(p.q(), i) * v[i]) / std::abs(v[i]));
            out.roots = std::max(out.roots, std::abs(v2[i] - v[(i + 1) % r]) / std::abs(v[(i + 1) % r]));
        }
    }
    return out;
}

}  // namespace sov::theta
