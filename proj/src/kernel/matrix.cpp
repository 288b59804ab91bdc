#include "sov/kernel/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace sov {

CMatrix::CMatrix(std::size_t r, CVector entries) : r_(r), a_(std::move(entries)) {
    if (a_.size() != r * r) throw Error(ErrorKind::internal, "CMatrix: entry count mismatch");
}

CMatrix CMatrix::identity(std::size_t r) {
    CMatrix m(r);
    for (std::size_t i = 0; i < r; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(const CVector& d) {
    CMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

double CMatrix::norm() const {
    double s = 0.0;
    for (cplx v : a_) s += std::norm(v);
    return std::sqrt(s);
}

CMatrix CMatrix::transpose() const {
    CMatrix t(r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < r_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

cplx CMatrix::trace() const {
    cplx t{};
    for (std::size_t i = 0; i < r_; ++i) t += (*this)(i, i);
    return t;
}

CVector CMatrix::apply(const CVector& v) const {
    CVector out(r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < r_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (cplx& v : a_) v *= s;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    const std::size_t r = a.size();
    CMatrix c(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < r; ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < r; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

namespace {

struct LU {
    CMatrix m;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

LU factor(const CMatrix& a) {
    LU lu{a, {}, 1, false};
    const std::size_t r = a.size();
    lu.perm.resize(r);
    for (std::size_t i = 0; i < r; ++i) lu.perm[i] = i;
    const double scale = std::max(a.norm(), 1e-300);
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < r; ++i)
            if (std::abs(lu.m(i, k)) > std::abs(lu.m(p, k))) p = i;
        if (std::abs(lu.m(p, k)) <= 1e-14 * scale) {
            lu.singular = true;
            if (lu.m(p, k) == cplx{}) continue;
        }
        if (p != k) {
            for (std::size_t j = 0; j < r; ++j) std::swap(lu.m(k, j), lu.m(p, j));
            std::swap(lu.perm[k], lu.perm[p]);
            lu.sign = -lu.sign;
        }
        for (std::size_t i = k + 1; i < r; ++i) {
            const cplx f = lu.m(i, k) / lu.m(k, k);
            lu.m(i, k) = f;
            for (std::size_t j = k + 1; j < r; ++j) lu.m(i, j) -= f * lu.m(k, j);
        }
    }
    return lu;
}

}  // namespace

cplx determinant(const CMatrix& m) {
    const std::size_t r = m.size();
    LU lu = factor(m);
    cplx d = static_cast<double>(lu.sign);
    for (std::size_t i = 0; i < r; ++i) d *= lu.m(i, i);
    return d;
}

CVector solve(const CMatrix& m, const CVector& rhs) {
    const std::size_t r = m.size();
    LU lu = factor(m);
    if (lu.singular) throw Error(ErrorKind::singular, "solve: singular matrix");
    CVector x(r);
    for (std::size_t i = 0; i < r; ++i) {
        cplx s = rhs[lu.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu.m(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = r; i-- > 0;) {
        cplx s = x[i];
        for (std::size_t j = i + 1; j < r; ++j) s -= lu.m(i, j) * x[j];
        x[i] = s / lu.m(i, i);
    }
    return x;
}

CMatrix inverse(const CMatrix& m) {
    const std::size_t r = m.size();
    CMatrix inv(r);
    for (std::size_t j = 0; j < r; ++j) {
        CVector e(r);
        e[j] = 1.0;
        CVector col = solve(m, e);
        for (std::size_t i = 0; i < r; ++i) inv(i, j) = col[i];
    }
    return inv;
}

// Faddeev-LeVerrier on det(xi I - A) = sum c_k xi^k, c_r = 1:
//   M_1 = I, c_{r-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{r-k} I,
// with adj(xi I - A) = sum_{k=1}^{r} M_k xi^{r-k}.
Poly char_bipoly(const CMatrix& m) {
    const std::size_t r = m.size();
    CVector c(r + 1);
    c[r] = 1.0;
    CMatrix mk = CMatrix::identity(r);
    for (std::size_t k = 1; k <= r; ++k) {
        CMatrix am = m * mk;
        c[r - k] = -am.trace() / static_cast<double>(k);
        mk = am + CMatrix::identity(r) * c[r - k];
    }
    if (r % 2 == 1)
        for (cplx& v : c) v = -v;
    return Poly(std::move(c));
}

CMatrix adjugate(const CMatrix& m) {
    const std::size_t r = m.size();
    if (r == 1) return CMatrix::identity(1);
    CMatrix mk = CMatrix::identity(r);
    for (std::size_t k = 1; k < r; ++k) {
        CMatrix am = m * mk;
        const cplx c = -am.trace() / static_cast<double>(k);
        mk = am + CMatrix::identity(r) * c;
    }
    return (r % 2 == 1) ? mk : mk * cplx(-1.0);
}

std::size_t numerical_rank(const std::vector<CVector>& rows, double rel_tol) {
    std::vector<CVector> v = rows;
    auto nrm = [](const CVector& x) {
        double s = 0.0;
        for (cplx c : x) s += std::norm(c);
        return std::sqrt(s);
    };
    double ref = 0.0;
    for (const CVector& x : v) ref = std::max(ref, nrm(x));
    if (ref == 0.0) return 0;
    std::size_t rank = 0;
    std::vector<bool> used(v.size(), false);
    while (rank < v.size()) {
        std::size_t best = v.size();
        double bn = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (used[i]) continue;
            const double n = nrm(v[i]);
            if (n > bn) { bn = n; best = i; }
        }
        if (best == v.size() || bn <= rel_tol * ref) break;
        used[best] = true;
        ++rank;
        CVector q = v[best];
        for (cplx& c : q) c /= bn;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (used[i]) continue;
            cplx d{};
            for (std::size_t k = 0; k < q.size(); ++k) d += std::conj(q[k]) * v[i][k];
            for (std::size_t k = 0; k < q.size(); ++k) v[i][k] -= d * q[k];
        }
    }
    return rank;
}

CMatrix PolyMatrix::at(cplx z) const {
    CMatrix m(r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < r_; ++j) m(i, j) = (*this)(i, j)(z);
    return m;
}

CharData char_data(const PolyMatrix& a) {
    const std::size_t r = a.size();
    auto mul = [&](const std::vector<Poly>& x, const std::vector<Poly>& y) {
        std::vector<Poly> out(r * r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < r; ++k)
                for (std::size_t j = 0; j < r; ++j) out[i * r + j] += x[i * r + k] * y[k * r + j];
        return out;
    };
    std::vector<Poly> av(r * r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) av[i * r + j] = a(i, j);

    std::vector<Poly> c(r + 1);
    c[r] = Poly::constant(1.0);
    std::vector<std::vector<Poly>> ms;
    std::vector<Poly> mk(r * r);
    for (std::size_t i = 0; i < r; ++i) mk[i * r + i] = Poly::constant(1.0);
    ms.push_back(mk);
    for (std::size_t k = 1; k <= r; ++k) {
        std::vector<Poly> am = mul(av, mk);
        Poly tr;
        for (std::size_t i = 0; i < r; ++i) tr += am[i * r + i];
        c[r - k] = tr * cplx(-1.0 / static_cast<double>(k));
        if (k == r) break;
        for (std::size_t i = 0; i < r; ++i) am[i * r + i] += c[r - k];
        mk = std::move(am);
        ms.push_back(mk);
    }
    // det(A - xi I) = (-1)^r det(xi I - A); adj(A - xi I) = (-1)^{r-1} adj(xi I - A).
    const cplx sdet = (r % 2 == 0) ? 1.0 : -1.0;
    const cplx sadj = -sdet;
    CharData out;
    std::vector<Poly> rows(r + 1);
    for (std::size_t k = 0; k <= r; ++k) rows[k] = c[k] * sdet;
    out.det = BiPoly(std::move(rows));
    out.adj.resize(r * r);
    for (std::size_t e = 0; e < r * r; ++e) {
        std::vector<Poly> arows(r);
        for (std::size_t k = 1; k <= r; ++k) arows[r - k] = ms[k - 1][e] * sadj;
        out.adj[e] = BiPoly(std::move(arows));
    }
    return out;
}

}  // namespace sov
