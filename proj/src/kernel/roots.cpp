#include "sov/kernel/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sov {

namespace {

// Residual test relative to the natural evaluation scale.
bool small_residual(const Poly& p, cplx z, double rel) {
    return std::abs(p(z)) <= rel * std::max(p.eval_bound(z), 1e-300);
}

CVector initial_guess(const Poly& p, std::mt19937_64& rng) {
    const int n = p.degree();
    const double lead = std::abs(p.leading());
    double radius = 0.0;
    for (int k = 0; k < n; ++k) {
        const double c = std::abs(p.coeff(k)) / lead;
        if (c > 0.0) radius = std::max(radius, std::pow(c, 1.0 / (n - k)));
    }
    if (radius == 0.0) radius = 1.0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double phase = 2.0 * std::numbers::pi * u(rng);
    CVector z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(radius * (0.5 + 0.5 * u(rng)), phase + 2.0 * std::numbers::pi * k / n + 0.4);
    return z;
}

bool aberth(const Poly& p, const Poly& dp, CVector& z, const Tolerances& tol) {
    const std::size_t n = z.size();
    std::vector<bool> done(n, false);
    for (int it = 0; it < tol.root_max_iter; ++it) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const cplx pv = p(z[i]);
            if (std::abs(pv) <= 1e-15 * p.eval_bound(z[i])) {
                done[i] = true;
                continue;
            }
            all = false;
            const cplx ratio = pv / dp(z[i]);
            cplx sum{};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            cplx step = ratio / (1.0 - ratio * sum);
            if (!is_finite(step)) step = ratio;
            if (!is_finite(step)) step = cplx(1e-8 * (1.0 + std::abs(z[i])), 0.0);
            z[i] -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z[i]))) done[i] = true;
        }
        if (all) return true;
    }
    return std::all_of(z.begin(), z.end(), [&](cplx v) { return small_residual(p, v, 1e-8); });
}

cplx newton(const Poly& f, cplx z, int iters) {
    const Poly df = f.derivative();
    for (int k = 0; k < iters; ++k) {
        const cplx d = df(z);
        if (d == cplx{}) break;
        const cplx step = f(z) / d;
        if (!is_finite(step)) break;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

// Polishes one simple root, keeping the original if Newton wanders off.
cplx polish(const Poly& p, cplx z) {
    const cplx w = newton(p, z, 8);
    if (!is_finite(w)) return z;
    return std::abs(p(w)) <= std::abs(p(z)) ? w : z;
}

}  // namespace

std::vector<Root> poly_roots(const Poly& p_in, const Tolerances& tol) {
    const Poly p = p_in.normalized(tol.zero_trim);
    if (p.is_zero()) throw Error(ErrorKind::numeric_domain, "undefined roots");
    std::vector<Root> out;
    if (p.degree() == 0) return out;

    // Exact roots at the origin.
    std::size_t low = 0;
    while (p.coeff(low) == cplx{}) ++low;
    if (low > 0) out.push_back({cplx{}, static_cast<int>(low)});
    const Poly q(CVector(p.coeffs().begin() + static_cast<long>(low), p.coeffs().end()));
    if (q.degree() == 0) return out;
    if (q.degree() == 1) {
        out.push_back({-q.coeff(0) / q.coeff(1), 1});
        return out;
    }

    const Poly dq = q.derivative();
    std::mt19937_64 rng(0x5eed0001ULL + static_cast<unsigned>(q.degree()));
    CVector z;
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
        z = initial_guess(q, rng);
        ok = aberth(q, dq, z, tol);
    }
    if (!ok) throw RootConvergenceError("root finder did not converge", z);

    // Coarse clusters are candidate multiple roots; verify through derivatives.
    std::vector<bool> taken(z.size(), false);
    std::vector<Root> found;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (taken[i]) continue;
        std::vector<std::size_t> group{i};
        taken[i] = true;
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            if (taken[j]) continue;
            const double scale = std::max(1.0, std::abs(z[i]));
            if (std::abs(z[j] - z[i]) < 1e-4 * scale) {
                group.push_back(j);
                taken[j] = true;
            }
        }
        const int m = static_cast<int>(group.size());
        if (m == 1) {
            found.push_back({polish(q, z[i]), 1});
            continue;
        }
        cplx c{};
        for (std::size_t g : group) c += z[g];
        c /= static_cast<double>(m);
        const cplx c2 = newton(q.derivative(m - 1), c, 20);
        bool multiple = is_finite(c2);
        for (int k = 0; k < m && multiple; ++k) {
            const Poly dk = q.derivative(k);
            multiple = small_residual(dk, c2, 1e-7);
        }
        if (multiple) {
            found.push_back({c2, m});
        } else {
            for (std::size_t g : group) found.push_back({polish(q, z[g]), 1});
        }
    }

    // Final merge of anything that landed within the clustering radius.
    for (const Root& r : found) {
        bool merged = false;
        for (Root& o : out) {
            const double scale = std::max(1.0, std::abs(o.value));
            if (std::abs(o.value - r.value) < tol.root_cluster * scale) {
                const double w = static_cast<double>(o.multiplicity);
                o.value = (o.value * w + r.value * static_cast<double>(r.multiplicity)) /
                          (w + r.multiplicity);
                o.multiplicity += r.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(r);
    }
    return out;
}

CVector poly_roots_flat(const Poly& p, const Tolerances& tol) {
    CVector flat;
    for (const Root& r : poly_roots(p, tol))
        for (int k = 0; k < r.multiplicity; ++k) flat.push_back(r.value);
    return flat;
}

}  // namespace sov
