#include "sov/rational/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sov/kernel/roots.hpp"

namespace sov::rational {

Trajectory flow(const MatPoly& phi0, CoeffPos H, const BracketSpec& spec, const std::vector<double>& t_grid,
                const OdeOptions& opt) {
    phi0.validate();
    const StructureTensor t = structure_tensor(phi0.r, phi0.n, spec);
    const std::size_t r = phi0.r, n = phi0.n;
    auto field = [&](double, const CVector& x) {
        const MatPoly phi(r, n, x);
        const CVector grad = spectral_gradients(phi, {H})[0];
        return poisson_apply(t.poisson_matrix(x), grad);
    };
    Trajectory traj;
    traj.t = t_grid;
    for (const CVector& x : ode_solve(field, phi0.flat(), t_grid, opt)) traj.states.emplace_back(r, n, x);
    return traj;
}

double isospectral_drift(const Trajectory& traj) {
    if (traj.states.empty()) return 0.0;
    const auto pos = spectral_positions(traj.states[0].r, traj.states[0].n);
    const CVector c0 = spectral_values(traj.states[0], pos);
    double scale = 0.0;
    for (cplx v : c0) scale = std::max(scale, std::abs(v));
    double drift = 0.0;
    for (const MatPoly& s : traj.states) {
        const CVector c = spectral_values(s, pos);
        for (std::size_t k = 0; k < c.size(); ++k) drift = std::max(drift, std::abs(c[k] - c0[k]));
    }
    return scale > 0.0 ? drift / scale : drift;
}

namespace {

cplx newton_xi(const BiPoly& P, const BiPoly& Px, cplx z, cplx xi, int iters) {
    for (int it = 0; it < iters; ++it) {
        const cplx d = Px(z, xi);
        if (d == cplx{}) break;
        const cplx step = P(z, xi) / d;
        xi -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(xi))) break;
    }
    return xi;
}

// xi(z) on one sheet along the segment a -> b, continued from xi_a.
class SheetTracker {
public:
    SheetTracker(const BiPoly& P, cplx a, cplx b, cplx xi_a) : P_(P), Px_(P.d_xi()), a_(a), b_(b) {
        s_.push_back(0.0);
        xi_.push_back(newton_xi(P_, Px_, a, xi_a, 30));
        double h = 1.0 / 16;
        while (s_.back() < 1.0) {
            const double s0 = s_.back();
            const double s1 = std::min(1.0, s0 + h);
            const cplx pred = predict(s1);
            const CVector roots = poly_roots_flat(P_.at_z(point(s1)));
            double d1 = 1e300, d2 = 1e300;
            cplx best{};
            for (cplx rt : roots) {
                const double d = std::abs(rt - pred);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    best = rt;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            if (d1 < 0.2 * d2) {
                s_.push_back(s1);
                xi_.push_back(newton_xi(P_, Px_, point(s1), best, 3));
                h = std::min(0.25, 1.5 * h);
            } else {
                h *= 0.5;
                if (h < 1e-9) throw Error(ErrorKind::singular, "sheet tracking failed near a branch point");
            }
        }
    }

    cplx operator()(cplx z) const {
        const cplx dz = b_ - a_;
        const double s = std::clamp(((z - a_) / dz).real(), 0.0, 1.0);
        return newton_xi(P_, Px_, z, interpolate(s), 8);
    }
    cplx end() const { return xi_.back(); }

private:
    cplx point(double s) const { return a_ + s * (b_ - a_); }
    cplx predict(double s) const {
        const std::size_t m = s_.size();
        if (m < 2) return xi_.back();
        const double w = (s - s_[m - 1]) / (s_[m - 1] - s_[m - 2]);
        return xi_[m - 1] + w * (xi_[m - 1] - xi_[m - 2]);
    }
    cplx interpolate(double s) const {
        auto it = std::upper_bound(s_.begin(), s_.end(), s);
        if (it == s_.begin()) return xi_.front();
        if (it == s_.end()) return xi_.back();
        const std::size_t k = static_cast<std::size_t>(it - s_.begin());
        const double w = (s - s_[k - 1]) / (s_[k] - s_[k - 1]);
        return xi_[k - 1] + w * (xi_[k] - xi_[k - 1]);
    }

    const BiPoly& P_;
    BiPoly Px_;
    cplx a_, b_;
    std::vector<double> s_;
    CVector xi_;
};

cplx monomial(cplx z, cplx xi, CoeffPos p) { return std::pow(xi, p.k) * std::pow(z, p.l); }

double segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

}  // namespace

AbelianSetup make_abelian_setup(const MatPoly& phi, const BracketSpec& spec, const std::vector<CoeffPos>& hams,
                                const Tolerances& tol) {
    AbelianSetup s;
    s.P = spectral_curve(phi).P;
    s.spec = spec;
    s.hams = hams;
    s.branch_points = genus(phi, tol).branch_points;
    double zscale = 1.0;
    for (cplx b : s.branch_points) zscale = std::max(zscale, std::abs(b));
    s.r_branch = tol.branch_radius * zscale;
    return s;
}

namespace {

// First waypoint outside every branch disk, leaving the nearest branch point in the direction that
// stays farthest from the others.
cplx escape(cplx p, const CVector& branch_points, double r_branch) {
    const cplx* near = nullptr;
    for (const cplx& bp : branch_points)
        if (std::abs(p - bp) < r_branch && (!near || std::abs(p - bp) < std::abs(p - *near))) near = &bp;
    if (!near) return p;
    const cplx d = p - *near;
    const double base = std::abs(d) > 0.0 ? std::arg(d) : 0.0;
    cplx best = p;
    double best_clear = -1.0;
    for (int k = 0; k < 16; ++k) {
        const double ang = base + 2.0 * std::numbers::pi * ((k + 1) / 2) / 16.0 * (k % 2 ? 1.0 : -1.0);
        const cplx q = *near + 3.0 * r_branch * std::polar(1.0, ang);
        double clear = 1e300;
        for (const cplx& bp : branch_points)
            if (&bp != near) clear = std::min(clear, segment_distance(bp, p, q));
        if (clear >= r_branch) return q;
        if (clear > best_clear) {
            best_clear = clear;
            best = q;
        }
    }
    return best;
}

}  // namespace

PathSpec route_path(cplx from, cplx to, const CVector& branch_points, double r_branch) {
    const cplx a = escape(from, branch_points, r_branch), b = escape(to, branch_points, r_branch);
    auto hits = [&](cplx p, cplx q) {
        int n = 0;
        for (cplx bp : branch_points)
            if (segment_distance(bp, p, q) < r_branch) ++n;
        return n;
    };
    CVector wp{a, b};
    for (int reroute = 0;; ++reroute) {
        std::size_t k = 0;
        const cplx* hit = nullptr;
        for (; k + 1 < wp.size() && !hit; ++k)
            for (const cplx& bp : branch_points)
                if (segment_distance(bp, wp[k], wp[k + 1]) < r_branch) {
                    hit = &bp;
                    break;
                }
        if (!hit) break;
        --k;
        if (reroute == 16) throw Error(ErrorKind::singular, "path cannot avoid branch point");
        const cplx d = wp[k + 1] - wp[k];
        const cplx perp = d * cplx(0.0, 1.0) / std::abs(d);
        const cplx foot = wp[k] + std::clamp(((*hit - wp[k]) * std::conj(d)).real() / std::norm(d), 0.0, 1.0) * d;
        const double side = ((foot - *hit) * std::conj(perp)).real() >= 0.0 ? 1.0 : -1.0;
        cplx best{};
        int best_hits = 1 << 30;
        for (double m : {3.0, 5.0, 8.0, 13.0})
            for (double sgn : {side, -side}) {
                const cplx c = *hit + sgn * m * r_branch * perp;
                const int h = hits(wp[k], c) + hits(c, wp[k + 1]);
                if (h < best_hits) {
                    best_hits = h;
                    best = c;
                }
            }
        wp.insert(wp.begin() + static_cast<long>(k) + 1, best);
    }
    if (a != from) wp.insert(wp.begin(), from);
    if (b != to) wp.push_back(to);
    return PathSpec{wp};
}

cplx choose_base_point(const CVector& branch_points) {
    double scale = 1.0;
    for (cplx b : branch_points) scale = std::max(scale, std::abs(b));
    cplx best{};
    double best_d = -1.0;
    for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) {
            const cplx z(0.25 * scale * i + 0.013, 0.25 * scale * j + 0.007);
            double d = 1e300;
            for (cplx b : branch_points) d = std::min(d, std::abs(z - b));
            d = std::min(d, 2.0 * scale - std::abs(z));
            if (d > best_d) {
                best_d = d;
                best = z;
            }
        }
    return best;
}

PathIntegral abelian_integrals(const AbelianSetup& setup, const PathSpec& path, cplx xi_start,
                               const Tolerances& tol) {
    const BiPoly Px = setup.P.d_xi();
    PathIntegral out{CVector(setup.hams.size()), xi_start};
    for (std::size_t k = 0; k + 1 < path.waypoints.size(); ++k) {
        const cplx a = path.waypoints[k], b = path.waypoints[k + 1];
        const SheetTracker tracker(setup.P, a, b, out.xi_end);
        for (std::size_t i = 0; i < setup.hams.size(); ++i) {
            const CoeffPos h = setup.hams[i];
            auto f = [&](cplx z) {
                const cplx xi = tracker(z);
                return -monomial(z, xi, h) / ((setup.spec.a(z) + setup.spec.b * xi) * Px(z, xi));
            };
            out.values[i] += integrate_segment(f, a, b, tol).value;
        }
        out.xi_end = tracker.end();
    }
    return out;
}

CVector abel_sum(const AbelianSetup& setup, cplx z0, const std::vector<DivisorPoint>& pts, const Tolerances& tol) {
    CVector q(setup.hams.size());
    for (const DivisorPoint& p : pts) {
        const PathSpec path = route_path(p.z, z0, setup.branch_points, setup.r_branch);
        const PathIntegral pi = abelian_integrals(setup, path, p.xi, tol);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= pi.values[i];
    }
    return q;
}

cplx generating_function(const AbelianSetup& setup, cplx z0, const std::vector<DivisorPoint>& pts,
                         const CVector& dh, const Tolerances& tol) {
    std::vector<Poly> rows = setup.P.rows();
    for (std::size_t i = 0; i < setup.hams.size(); ++i) {
        const CoeffPos h = setup.hams[i];
        if (rows.size() <= static_cast<std::size_t>(h.k)) rows.resize(h.k + 1);
        rows[h.k] += Poly::monomial(dh[i], static_cast<std::size_t>(h.l));
    }
    const BiPoly P(rows);
    const BiPoly Px = P.d_xi();
    const cplx b = setup.spec.b;
    auto prim = [&](cplx z, cplx xi) {
        if (b == cplx{}) return xi / setup.spec.a(z);
        return std::log(setup.spec.a(z) + b * xi) / b;
    };
    cplx F{};
    for (const DivisorPoint& p : pts) {
        const PathSpec path = route_path(p.z, z0, setup.branch_points, setup.r_branch);
        cplx xi = newton_xi(P, Px, p.z, p.xi, 30);
        for (std::size_t k = 0; k + 1 < path.waypoints.size(); ++k) {
            const cplx a = path.waypoints[k], e = path.waypoints[k + 1];
            const SheetTracker tracker(P, a, e, xi);
            F -= integrate_segment([&](cplx z) { return prim(z, tracker(z)); }, a, e, tol).value;
            xi = tracker.end();
        }
    }
    return F;
}

LinearizeResult linearize(const Trajectory& traj, const BracketSpec& spec, cplx base_z0, const CVector& s,
                          const std::vector<CoeffPos>& hams, const Tolerances& tol) {
    if (traj.states.empty()) throw Error(ErrorKind::schema, "empty trajectory");
    LinearizeResult out;
    out.t = traj.t;
    out.hams = hams;
    const AbelianSetup setup = make_abelian_setup(traj.states[0], spec, hams, tol);
    out.branch_points = setup.branch_points;

    std::vector<DivisorPoint> prev = divisor_coords(traj.states[0], s, tol).points;
    out.points.push_back(prev);
    out.Q.push_back(abel_sum(setup, base_z0, prev, tol));
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const std::vector<DivisorPoint> cur = divisor_coords(traj.states[k], s, tol).points;
        if (cur.size() != prev.size()) throw Error(ErrorKind::convergence, "divisor count changed along the flow");
        // label points by continuity
        std::vector<DivisorPoint> matched(prev.size());
        std::vector<bool> used(cur.size(), false);
        for (std::size_t mu = 0; mu < prev.size(); ++mu) {
            double d1 = 1e300, d2 = 1e300;
            std::size_t best = 0;
            for (std::size_t c = 0; c < cur.size(); ++c) {
                const double d = std::abs(cur[c].z - prev[mu].z) + std::abs(cur[c].xi - prev[mu].xi);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    best = c;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            if (used[best] || d1 > 0.5 * d2) throw Error(ErrorKind::convergence, "ambiguous divisor matching along the flow");
            used[best] = true;
            matched[mu] = cur[best];
        }
        CVector q = out.Q.back();
        for (std::size_t mu = 0; mu < prev.size(); ++mu) {
            if (matched[mu].z == prev[mu].z) continue;
            const PathIntegral pi = abelian_integrals(setup, PathSpec{{prev[mu].z, matched[mu].z}}, prev[mu].xi, tol);
            if (std::abs(pi.xi_end - matched[mu].xi) > 1e-6 * (1.0 + std::abs(matched[mu].xi)))
                throw Error(ErrorKind::convergence, "sheet mismatch along the flow, sample more densely");
            for (std::size_t i = 0; i < q.size(); ++i) q[i] += pi.values[i];
        }
        out.Q.push_back(q);
        out.points.push_back(matched);
        prev = matched;
    }
    return out;
}

LinearFit fit_linear(const LinearizeResult& lin, const std::vector<std::size_t>& samples) {
    const std::size_t m = lin.hams.size();
    LinearFit fit{CVector(m), CVector(m), std::vector<double>(m)};
    double tm = 0.0;
    for (std::size_t s : samples) tm += lin.t[s];
    tm /= static_cast<double>(samples.size());
    double stt = 0.0;
    for (std::size_t s : samples) stt += (lin.t[s] - tm) * (lin.t[s] - tm);
    const double span = lin.t[samples.back()] - lin.t[samples.front()];
    std::vector<double> absres(m, 0.0);
    double motion = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        cplx qm{};
        for (std::size_t s : samples) qm += lin.Q[s][i];
        qm /= static_cast<double>(samples.size());
        cplx stq{};
        for (std::size_t s : samples) stq += (lin.t[s] - tm) * (lin.Q[s][i] - qm);
        fit.slope[i] = stq / stt;
        fit.intercept[i] = qm - fit.slope[i] * tm;
        for (std::size_t s : samples)
            absres[i] = std::max(absres[i], std::abs(lin.Q[s][i] - (fit.intercept[i] + fit.slope[i] * lin.t[s])));
        motion = std::max(motion, std::abs(fit.slope[i]) * std::abs(span));
    }
    for (std::size_t i = 0; i < m; ++i) fit.residual[i] = motion > 0.0 ? absres[i] / motion : absres[i];
    return fit;
}

}  // namespace sov::rational
