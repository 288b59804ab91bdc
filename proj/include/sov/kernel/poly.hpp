#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "sov/kernel/types.hpp"

namespace sov {

/// Dense univariate polynomial, ascending coefficients. The zero polynomial
/// has an empty coefficient list.
class Poly {
public:
    Poly() = default;
    explicit Poly(CVector coeffs, double trim = 0.0);
    Poly(std::initializer_list<cplx> coeffs);

    static Poly constant(cplx c);
    static Poly monomial(cplx c, std::size_t degree);
    /// Monic polynomial with the given roots.
    static Poly from_roots(const CVector& roots);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const CVector& coeffs() const { return c_; }
    cplx coeff(std::size_t k) const { return k < c_.size() ? c_[k] : cplx{}; }
    cplx leading() const { return c_.empty() ? cplx{} : c_.back(); }
    double max_abs() const;

    cplx operator()(cplx z) const;
    /// Sum of |c_k||z|^k, the natural scale for evaluation residuals.
    double eval_bound(cplx z) const;

    Poly derivative(std::size_t order = 1) const;
    /// Drop trailing coefficients below rel * max|c|.
    Poly normalized(double rel) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(cplx s);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, cplx s) { return a *= s; }
    friend Poly operator*(cplx s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b);

private:
    void trim_exact();
    CVector c_;
};

/// Bivariate polynomial sum_{k,l} c[k][l] xi^k z^l stored as one z-polynomial
/// per power of xi.
class BiPoly {
public:
    BiPoly() = default;
    explicit BiPoly(std::vector<Poly> rows);

    int deg_xi() const { return static_cast<int>(rows_.size()) - 1; }
    int deg_z() const;
    bool is_zero() const { return rows_.empty(); }
    const std::vector<Poly>& rows() const { return rows_; }
    const Poly& row(std::size_t k) const;
    cplx coeff(std::size_t k, std::size_t l) const { return k < rows_.size() ? rows_[k].coeff(l) : cplx{}; }
    double max_abs() const;

    cplx operator()(cplx z, cplx xi) const;
    double eval_bound(cplx z, cplx xi) const;
    /// Restriction to a fixed z, as a polynomial in xi.
    Poly at_z(cplx z) const;
    /// Restriction to a fixed xi, as a polynomial in z.
    Poly at_xi(cplx xi) const;

    BiPoly d_xi() const;
    BiPoly d_z() const;
    /// Exchange the roles of the two variables.
    BiPoly swapped() const;
    BiPoly normalized(double rel) const;

    BiPoly& operator+=(const BiPoly& o);
    BiPoly& operator*=(cplx s);
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator*(BiPoly a, cplx s) { return a *= s; }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b);

private:
    void trim_rows();
    std::vector<Poly> rows_;
};

}  // namespace sov
