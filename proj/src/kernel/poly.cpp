#include "sov/kernel/poly.hpp"

#include <algorithm>
#include <cmath>

namespace sov {

Poly::Poly(CVector coeffs, double trim) : c_(std::move(coeffs)) {
    if (trim > 0.0) {
        *this = normalized(trim);
    } else {
        trim_exact();
    }
}

Poly::Poly(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim_exact(); }

Poly Poly::constant(cplx c) { return Poly(CVector{c}); }

Poly Poly::monomial(cplx c, std::size_t degree) {
    CVector v(degree + 1);
    v[degree] = c;
    return Poly(std::move(v));
}

Poly Poly::from_roots(const CVector& roots) {
    Poly p = constant(1.0);
    for (cplx r : roots) p = p * Poly{-r, 1.0};
    return p;
}

void Poly::trim_exact() {
    while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

double Poly::max_abs() const {
    double m = 0.0;
    for (cplx v : c_) m = std::max(m, std::abs(v));
    return m;
}

cplx Poly::operator()(cplx z) const {
    cplx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double Poly::eval_bound(cplx z) const {
    const double az = std::abs(z);
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * az + std::abs(*it);
    return acc;
}

Poly Poly::derivative(std::size_t order) const {
    CVector d = c_;
    for (std::size_t o = 0; o < order; ++o) {
        if (d.size() <= 1) return Poly{};
        CVector next(d.size() - 1);
        for (std::size_t k = 1; k < d.size(); ++k) next[k - 1] = d[k] * static_cast<double>(k);
        d = std::move(next);
    }
    return Poly(std::move(d));
}

Poly Poly::normalized(double rel) const {
    Poly out;
    out.c_ = c_;
    const double cutoff = rel * max_abs();
    while (!out.c_.empty() && std::abs(out.c_.back()) <= cutoff) out.c_.pop_back();
    return out;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim_exact();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim_exact();
    return *this;
}

Poly& Poly::operator*=(cplx s) {
    for (cplx& v : c_) v *= s;
    trim_exact();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    CVector out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(out));
}

// ---------------------------------------------------------------------------

BiPoly::BiPoly(std::vector<Poly> rows) : rows_(std::move(rows)) { trim_rows(); }

void BiPoly::trim_rows() {
    while (!rows_.empty() && rows_.back().is_zero()) rows_.pop_back();
}

const Poly& BiPoly::row(std::size_t k) const {
    static const Poly zero;
    return k < rows_.size() ? rows_[k] : zero;
}

int BiPoly::deg_z() const {
    int d = -1;
    for (const Poly& p : rows_) d = std::max(d, p.degree());
    return d;
}

double BiPoly::max_abs() const {
    double m = 0.0;
    for (const Poly& p : rows_) m = std::max(m, p.max_abs());
    return m;
}

cplx BiPoly::operator()(cplx z, cplx xi) const {
    cplx acc{};
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) acc = acc * xi + (*it)(z);
    return acc;
}

double BiPoly::eval_bound(cplx z, cplx xi) const {
    const double ax = std::abs(xi);
    double acc = 0.0;
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) acc = acc * ax + it->eval_bound(z);
    return acc;
}

Poly BiPoly::at_z(cplx z) const {
    CVector c(rows_.size());
    for (std::size_t k = 0; k < rows_.size(); ++k) c[k] = rows_[k](z);
    return Poly(std::move(c));
}

Poly BiPoly::at_xi(cplx xi) const {
    Poly acc;
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) acc = acc * xi + *it;
    return acc;
}

BiPoly BiPoly::d_xi() const {
    std::vector<Poly> out;
    for (std::size_t k = 1; k < rows_.size(); ++k) out.push_back(rows_[k] * static_cast<double>(k));
    return BiPoly(std::move(out));
}

BiPoly BiPoly::d_z() const {
    std::vector<Poly> out;
    for (const Poly& p : rows_) out.push_back(p.derivative());
    return BiPoly(std::move(out));
}

BiPoly BiPoly::swapped() const {
    const int dz = deg_z();
    std::vector<CVector> grid(static_cast<std::size_t>(dz + 1), CVector(rows_.size()));
    for (std::size_t k = 0; k < rows_.size(); ++k)
        for (int l = 0; l <= dz; ++l) grid[l][k] = rows_[k].coeff(l);
    std::vector<Poly> out;
    for (auto& g : grid) out.emplace_back(std::move(g));
    return BiPoly(std::move(out));
}

BiPoly BiPoly::normalized(double rel) const {
    const double cutoff = rel * max_abs();
    std::vector<Poly> out;
    for (const Poly& p : rows_) {
        CVector c = p.coeffs();
        while (!c.empty() && std::abs(c.back()) <= cutoff) c.pop_back();
        out.emplace_back(std::move(c));
    }
    return BiPoly(std::move(out));
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
    if (o.rows_.size() > rows_.size()) rows_.resize(o.rows_.size());
    for (std::size_t k = 0; k < o.rows_.size(); ++k) rows_[k] += o.rows_[k];
    trim_rows();
    return *this;
}

BiPoly& BiPoly::operator*=(cplx s) {
    for (Poly& p : rows_) p *= s;
    trim_rows();
    return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() || b.is_zero()) return BiPoly{};
    std::vector<Poly> out(a.rows_.size() + b.rows_.size() - 1);
    for (std::size_t i = 0; i < a.rows_.size(); ++i)
        for (std::size_t j = 0; j < b.rows_.size(); ++j) out[i + j] += a.rows_[i] * b.rows_[j];
    return BiPoly(std::move(out));
}

}  // namespace sov
