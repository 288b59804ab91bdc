#include "sov/theta/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sov::theta {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

void check_tau(cplx tau) {
    if (!(tau.imag() >= 0.05) || !is_finite(tau)) throw Error(ErrorKind::numeric_domain, "tau too degenerate");
}

void check_index(int v, int r, const char* what) {
    if (v < 0 || v >= r) throw Error(ErrorKind::schema, std::string("index out of range: ") + what);
}

// Even-rank building block: theta of the lattice (1/r)Z + tau Z, zeros on that lattice.
cplx e_even(cplx x, const ThetaParams& p) {
    const double r = p.r;
    return riemann_theta(r * (x + 1.0 / (2.0 * r) + p.tau / 2.0), r * p.tau);
}

}  // namespace

int truncation(cplx tau) {
    check_tau(tau);
    return static_cast<int>(std::ceil(std::sqrt(17.0 * std::log(10.0) / (kPi * tau.imag())))) + 2;
}

ThetaParams::ThetaParams(cplx tau_, int r_) : tau(tau_), r(r_), N(truncation(tau_)) {
    if (r_ < 1) throw Error(ErrorKind::schema, "rank must be >= 1");
}

cplx ThetaParams::q() const { return std::polar(1.0, 2.0 * kPi / r); }

CVector riemann_theta_derivs(cplx z, cplx tau, int max_deriv) {
    const int N = truncation(tau);
    const long centre = std::lround(-z.imag() / tau.imag());
    CVector out(static_cast<std::size_t>(max_deriv + 1));
    for (long n = centre - N; n <= centre + N; ++n) {
        const double nd = static_cast<double>(n);
        const cplx term = std::exp(kI * kPi * nd * nd * tau + 2.0 * kI * kPi * nd * z);
        cplx factor = 1.0;
        for (int k = 0; k <= max_deriv; ++k) {
            out[k] += factor * term;
            factor *= 2.0 * kI * kPi * nd;
        }
    }
    return out;
}

cplx riemann_theta(cplx z, cplx tau, int deriv) { return riemann_theta_derivs(z, tau, deriv)[deriv]; }

cplx riemann_theta_truncated(cplx z, cplx tau, int N) {
    check_tau(tau);
    const long centre = std::lround(-z.imag() / tau.imag());
    cplx acc{};
    for (long n = centre - N; n <= centre + N; ++n) {
        const double nd = static_cast<double>(n);
        acc += std::exp(kI * kPi * nd * nd * tau + 2.0 * kI * kPi * nd * z);
    }
    return acc;
}

cplx theta_kj(cplx z, int k, int j, const ThetaParams& p) {
    check_index(k, p.r, "k");
    check_index(j, p.r, "j");
    return riemann_theta(z + (static_cast<double>(k) + static_cast<double>(j) * p.tau) / static_cast<double>(p.r), p.tau);
}

cplx xi_kj(cplx z, int k, int j, const ThetaParams& p) {
    check_index(k, p.r, "k");
    check_index(j, p.r, "j");
    const cplx shift = (2.0 * k - 1.0 + 2.0 * j * p.tau - p.tau) / (2.0 * p.r);
    return riemann_theta(z + shift, p.tau);
}

double rho(int j, int r) { return (r % 2 == 1) ? (r - 1) / 2.0 - j : r / 2.0 - j; }

cplx puncture(const ThetaParams& p) { return (1.0 + p.tau) / (2.0 * p.r); }

double puncture_distance(cplx z, const ThetaParams& p) {
    const cplx w = (z - puncture(p)) * static_cast<double>(p.r);
    const double b = w.imag() / p.tau.imag();
    const double a = w.real() - b * p.tau.real();
    double best = 1e300;
    for (int da = -1; da <= 1; ++da)
        for (int db = -1; db <= 1; ++db) {
            const double ra = a - std::round(a) + da, rb = b - std::round(b) + db;
            best = std::min(best, std::abs(cplx(ra) + rb * p.tau) / p.r);
        }
    return best;
}

cplx f_component(cplx z, int j, const ThetaParams& p) {
    check_index(j, p.r, "j");
    if (puncture_distance(z, p) < 1e-12) throw Error(ErrorKind::singular, "pole");
    const int r = p.r;
    cplx value;
    if (r == 1) {
        value = 1.0;
    } else if (r % 2 == 1) {
        const double pre = -j * r * (r - 1) / 2.0 + (r - 1) * j * (j + 1) / 2.0;
        value = std::exp(2.0 * kPi * kI * p.tau * pre);
        const double rj = rho(j, r);
        for (int k = 0; k < r; ++k) {
            cplx num = std::pow(theta_kj(z, k, j, p), r - 2) * theta_kj(z + rj * p.tau, k, j, p);
            cplx den = 1.0;
            for (int l = 0; l < r; ++l)
                if (l != j) den *= theta_kj(z, k, l, p);
            value *= num / den;
        }
    } else {
        const cplx pt = puncture(p);
        const cplx w = pt + p.tau * (r - 1.0) / (2.0 * r);
        const cplx x = z + static_cast<double>(j) * p.tau / static_cast<double>(r);
        cplx den = 1.0;
        for (int l = 0; l < r; ++l) den *= e_even(x - pt - static_cast<double>(l) * p.tau / static_cast<double>(r), p);
        value = std::pow(e_even(x - w, p), r) / den;
    }
    if (!is_finite(value)) throw Error(ErrorKind::singular, "pole");
    return value;
}

CVector f_vector(cplx z, const ThetaParams& p) {
    CVector f(static_cast<std::size_t>(p.r));
    for (int j = 0; j < p.r; ++j) f[j] = f_component(z, j, p);
    return f;
}

std::pair<CMatrix, CMatrix> i_matrices(int r) {
    if (r < 1) throw Error(ErrorKind::schema, "rank must be >= 1");
    const std::size_t n = static_cast<std::size_t>(r);
    CMatrix i1(n), i2(n);
    for (std::size_t j = 0; j < n; ++j) {
        i1(j, j) = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / r);
        i2(j, (j + 1) % n) = 1.0;
    }
    return {i1, i2};
}

int local_order(int j, cplx c, const ThetaParams& p, double radius) {
    const int M = 2000;
    double total = 0.0;
    cplx prev = f_component(c + radius, j, p);
    for (int k = 1; k <= M; ++k) {
        const cplx cur = f_component(c + std::polar(radius, 2.0 * kPi * k / M), j, p);
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

BasicSection::BasicSection(const ThetaParams& p) : p_(p), anchor_(static_cast<std::size_t>(p.r)) {
    anchor_[0] = std::exp(std::log(f_component(0.0, 0, p_)) / static_cast<double>(p_.r));
    const PathSpec up{{0.0, p_.omega2()}};
    for (int i = 1; i < p_.r; ++i) anchor_[i] = continue_component(i - 1, anchor_[i - 1], up);
}

cplx BasicSection::continue_component(int i, cplx v, const PathSpec& path) const {
    const double r = p_.r;
    for (std::size_t s = 0; s + 1 < path.waypoints.size(); ++s) {
        const cplx a = path.waypoints[s], b = path.waypoints[s + 1];
        const double len = std::abs(b - a);
        if (len == 0.0) continue;
        const double cap = std::min(1.0, 0.02 * std::min(std::abs(p_.omega1()), std::abs(p_.omega2())) / len);
        double t = 0.0, h = cap;
        cplx fprev = f_component(a, i, p_);
        while (t < 1.0) {
            const double t1 = std::min(1.0, t + h);
            const cplx z = a + t1 * (b - a);
            cplx fnew;
            bool ok = true;
            try {
                fnew = f_component(z, i, p_);
            } catch (const Error&) {
                ok = false;
            }
            const cplx ratio = ok ? fnew / fprev : cplx{};
            if (!ok || !is_finite(ratio) || std::abs(ratio - 1.0) > 0.5) {
                h *= 0.5;
                if (h < 1e-12)
                    throw Error(ErrorKind::singular, "branch obstruction near z = (" + std::to_string(z.real()) +
                                                         ", " + std::to_string(z.imag()) + ")");
                continue;
            }
            v *= std::exp(std::log(ratio) / r);
            fprev = fnew;
            t = t1;
            h = std::min(cap, 1.5 * h);
        }
    }
    return v;
}

CVector BasicSection::continue_along(const CVector& start, const PathSpec& path) const {
    CVector out(start.size());
    for (int i = 0; i < p_.r; ++i) out[i] = continue_component(i, start[i], path);
    return out;
}

SectionSample BasicSection::at(const PathSpec& path) const {
    if (path.waypoints.empty() || std::abs(path.waypoints.front()) > 1e-15)
        throw Error(ErrorKind::schema, "section paths start at the anchor 0");
    SectionSample s;
    s.z = path.waypoints.back();
    s.anchor = 0.0;
    s.path = path;
    s.values = path.waypoints.size() < 2 ? anchor_ : continue_along(anchor_, path);
    return s;
}

SectionSample basic_section(cplx z, const ThetaParams& p, const PathSpec& path) {
    if (path.waypoints.empty() || path.waypoints.back() != z)
        throw Error(ErrorKind::schema, "section path must end at z");
    return BasicSection(p).at(path);
}

}  // namespace sov::theta
