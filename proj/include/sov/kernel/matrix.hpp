#pragma once

#include <cstddef>
#include <vector>

#include "sov/kernel/poly.hpp"
#include "sov/kernel/types.hpp"

namespace sov {

/// Dense square complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t r) : r_(r), a_(r * r) {}
    CMatrix(std::size_t r, CVector entries);

    static CMatrix identity(std::size_t r);
    static CMatrix diagonal(const CVector& d);

    std::size_t size() const { return r_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * r_ + j]; }
    cplx operator()(std::size_t i, std::size_t j) const { return a_[i * r_ + j]; }
    const CVector& data() const { return a_; }

    double norm() const;  // Frobenius
    CMatrix transpose() const;
    cplx trace() const;
    CVector apply(const CVector& v) const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);
    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

private:
    std::size_t r_ = 0;
    CVector a_;
};

/// LU-based determinant with partial pivoting.
cplx determinant(const CMatrix& m);
/// Solve m x = rhs; throws ErrorKind::singular when m is numerically singular.
CVector solve(const CMatrix& m, const CVector& rhs);
CMatrix inverse(const CMatrix& m);

/// det(M - xi I) as a polynomial in xi (Faddeev-LeVerrier, no pivoting).
Poly char_bipoly(const CMatrix& m);
CMatrix adjugate(const CMatrix& m);

/// Numerical rank of a rectangular matrix (rows x cols, row-major) by
/// Gram-Schmidt with column pivoting.
std::size_t numerical_rank(const std::vector<CVector>& rows, double rel_tol);

/// Matrix with polynomial entries in one variable.
class PolyMatrix {
public:
    PolyMatrix() = default;
    explicit PolyMatrix(std::size_t r) : r_(r), a_(r * r) {}
    std::size_t size() const { return r_; }
    Poly& operator()(std::size_t i, std::size_t j) { return a_[i * r_ + j]; }
    const Poly& operator()(std::size_t i, std::size_t j) const { return a_[i * r_ + j]; }
    CMatrix at(cplx z) const;

private:
    std::size_t r_ = 0;
    std::vector<Poly> a_;
};

/// Characteristic data of a polynomial matrix A(z):
/// det(A(z) - xi I) as a BiPoly and adj(A(z) - xi I) as r*r BiPolys
/// (row-major), both exact in polynomial arithmetic.
struct CharData {
    BiPoly det;
    std::vector<BiPoly> adj;
};
CharData char_data(const PolyMatrix& a);

}  // namespace sov
