#include "sov/rational/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sov::rational {

namespace {

// Coefficient grid c[p][q] of lambda^p mu^q.
using Grid = std::vector<CVector>;

Grid make_grid(std::size_t deg) { return Grid(deg + 1, CVector(deg + 1)); }

// Exact division of N(lambda, mu) by (lambda - mu), synthetic division in lambda.
Grid divide_by_difference(const Grid& num, double tol) {
    const std::size_t d = num.size() - 1;
    // rows in lambda, each a polynomial in mu
    std::vector<CVector> q(d + 1, CVector(d + 1));
    CVector carry(d + 1);
    double scale = 0.0;
    for (const CVector& row : num)
        for (cplx v : row) scale = std::max(scale, std::abs(v));
    for (std::size_t p = d; p-- > 0;) {
        // q_p = num_{p+1} + mu * q_{p+1}
        CVector next(d + 1);
        for (std::size_t s = 0; s <= d; ++s) next[s] = num[p + 1][s];
        if (p + 1 < d)
            for (std::size_t s = 0; s < d; ++s) next[s + 1] += q[p + 1][s];
        q[p] = next;
    }
    // remainder num_0 + mu q_0
    double rem = 0.0;
    for (std::size_t s = 0; s <= d; ++s) {
        cplx v = num[0][s];
        if (s > 0 && d > 0) v += q[0][s - 1];
        rem = std::max(rem, std::abs(v));
    }
    if (rem > tol * std::max(scale, 1.0))
        throw Error(ErrorKind::internal, "expansion inconsistency");
    Grid out = make_grid(d);
    for (std::size_t p = 0; p < d; ++p) out[p] = q[p];
    return out;
}

}  // namespace

cplx StructureTensor::entry(std::size_t a, std::size_t b, const CVector& x) const {
    cplx v{};
    for (const Lin& l : lin_at(a, b)) v += l.c * x[l.gamma];
    for (const Quad& q : quad_at(a, b)) v += q.c * x[q.gamma] * x[q.delta];
    return v;
}

CVector StructureTensor::poisson_matrix(const CVector& x) const {
    CVector pi(dim * dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) pi[a * dim + b] = entry(a, b, x);
    return pi;
}

CVector StructureTensor::entry_gradient(std::size_t a, std::size_t b, const CVector& x) const {
    CVector g(dim);
    for (const Lin& l : lin_at(a, b)) g[l.gamma] += l.c;
    for (const Quad& q : quad_at(a, b)) {
        g[q.gamma] += q.c * x[q.delta];
        g[q.delta] += q.c * x[q.gamma];
    }
    return g;
}

// {phi_ij(l), phi_mn(m)} = [P/(m-l), phi(l) x (a(m) + b/2 phi(m)) + (a(l) + b/2 phi(l)) x phi(m)]
// entrywise:
//   -1/(l-m) { d_in [a(m) phi_mj(l) - a(l) phi_mj(m)] - d_mj [a(m) phi_in(l) - a(l) phi_in(m)]
//              + b [phi_mj(l) phi_in(m) - phi_in(l) phi_mj(m)] }
StructureTensor structure_tensor(std::size_t r, std::size_t n, const BracketSpec& spec) {
    if (spec.a.degree() > static_cast<int>(n) + 1)
        throw Error(ErrorKind::schema, "bracket polynomial a has degree above n+1");
    const std::size_t deg = n + 1;
    const double tol = 1e-12;

    // Ghat_k = (a(m) l^k - a(l) m^k)/(l-m), Hhat_kl = (l^k m^l - l^l m^k)/(l-m)
    std::vector<Grid> ghat(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        Grid g = make_grid(deg);
        for (std::size_t t = 0; t <= deg; ++t) {
            const cplx at = spec.a.coeff(t);
            g[k][t] += at;
            g[t][k] -= at;
        }
        ghat[k] = divide_by_difference(g, tol);
    }
    std::vector<Grid> hhat((n + 1) * (n + 1));
    for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t l = 0; l <= n; ++l) {
            Grid h = make_grid(deg);
            h[k][l] += 1.0;
            h[l][k] -= 1.0;
            hhat[k * (n + 1) + l] = divide_by_difference(h, tol);
        }

    StructureTensor t;
    t.r = r;
    t.n = n;
    t.dim = (n + 1) * r * r;
    t.lin.assign(t.dim * t.dim, {});
    t.quad.assign(t.dim * t.dim, {});
    auto idx = [&](std::size_t k, std::size_t i, std::size_t j) { return static_cast<int>(k * r * r + i * r + j); };

    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t m = 0; m < r; ++m)
                for (std::size_t nn = 0; nn < r; ++nn) {
                    std::map<std::pair<std::size_t, std::size_t>, std::map<int, cplx>> lin;
                    std::map<std::pair<std::size_t, std::size_t>, std::map<std::pair<int, int>, cplx>> quad;
                    for (std::size_t k = 0; k <= n; ++k)
                        for (std::size_t p = 0; p <= n; ++p)
                            for (std::size_t q = 0; q <= n; ++q) {
                                const cplx gv = ghat[k][p][q];
                                if (gv == cplx{}) continue;
                                if (i == nn) lin[{p, q}][idx(k, m, j)] -= gv;
                                if (m == j) lin[{p, q}][idx(k, i, nn)] += gv;
                            }
                    if (spec.b != cplx{})
                        for (std::size_t k = 0; k <= n; ++k)
                            for (std::size_t l = 0; l <= n; ++l)
                                for (std::size_t p = 0; p <= n; ++p)
                                    for (std::size_t q = 0; q <= n; ++q) {
                                        const cplx hv = hhat[k * (n + 1) + l][p][q];
                                        if (hv == cplx{}) continue;
                                        int g1 = idx(k, m, j), g2 = idx(l, i, nn);
                                        if (g1 > g2) std::swap(g1, g2);
                                        quad[{p, q}][{g1, g2}] -= spec.b * hv;
                                    }
                    for (std::size_t p = 0; p <= n; ++p)
                        for (std::size_t q = 0; q <= n; ++q) {
                            const std::size_t a = static_cast<std::size_t>(idx(p, i, j));
                            const std::size_t b = static_cast<std::size_t>(idx(q, m, nn));
                            auto& L = t.lin[a * t.dim + b];
                            for (auto& [g, c] : lin[{p, q}])
                                if (std::abs(c) > 0.0) L.push_back({g, c});
                            auto& Q = t.quad[a * t.dim + b];
                            for (auto& [gd, c] : quad[{p, q}])
                                if (std::abs(c) > 0.0) Q.push_back({gd.first, gd.second, c});
                        }
                }
    return t;
}

cplx bracket_from_gradients(const CVector& gf, const CVector& pi, const CVector& gg) {
    const std::size_t d = gf.size();
    cplx acc{};
    for (std::size_t a = 0; a < d; ++a) {
        if (gf[a] == cplx{}) continue;
        cplx row{};
        for (std::size_t b = 0; b < d; ++b) row += pi[a * d + b] * gg[b];
        acc += gf[a] * row;
    }
    return acc;
}

CVector poisson_apply(const CVector& pi, const CVector& v) {
    const std::size_t d = v.size();
    CVector out(d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) out[a] += pi[a * d + b] * v[b];
    return out;
}

cplx bracket(const ScalarField& f, const ScalarField& g, const MatPoly& phi, const StructureTensor& t,
             double h_rel) {
    const CVector x = phi.flat();
    return bracket_from_gradients(fd_gradient(f, x, h_rel), t.poisson_matrix(x), fd_gradient(g, x, h_rel));
}

JacobiResidual jacobi_residual(const StructureTensor& t, const CVector& x, std::size_t a, std::size_t b,
                               std::size_t c) {
    const CVector pi = t.poisson_matrix(x);
    auto term = [&](std::size_t u, std::size_t v, std::size_t w) {
        // {x_u, {x_v, x_w}} = sum_d Pi_{u d} d Pi_{v w} / d x_d
        const CVector grad = t.entry_gradient(v, w, x);
        cplx s{};
        for (std::size_t d = 0; d < t.dim; ++d) s += pi[u * t.dim + d] * grad[d];
        return s;
    };
    const cplx t1 = term(a, b, c), t2 = term(b, c, a), t3 = term(c, a, b);
    return {t1 + t2 + t3, std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1.0})};
}

}  // namespace sov::rational
