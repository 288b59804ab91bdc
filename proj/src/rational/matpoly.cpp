#include "sov/rational/matpoly.hpp"

#include <random>

namespace sov::rational {

MatPoly::MatPoly(std::size_t r_, std::size_t n_) : r(r_), n(n_), coeffs(n_ + 1, CMatrix(r_)) {}

MatPoly::MatPoly(std::size_t r_, std::size_t n_, const CVector& flat) : MatPoly(r_, n_) {
    if (flat.size() != dim()) throw Error(ErrorKind::internal, "MatPoly: flat size mismatch");
    for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) coeffs[k](i, j) = flat[index(k, i, j)];
}

CVector MatPoly::flat() const {
    CVector x(dim());
    for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) x[index(k, i, j)] = coeffs[k](i, j);
    return x;
}

CMatrix MatPoly::operator()(cplx z) const {
    CMatrix m(r);
    for (std::size_t k = n + 1; k-- > 0;) m = m * z + coeffs[k];
    return m;
}

PolyMatrix MatPoly::poly_matrix() const {
    PolyMatrix pm(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            CVector c(n + 1);
            for (std::size_t k = 0; k <= n; ++k) c[k] = coeffs[k](i, j);
            pm(i, j) = Poly(std::move(c));
        }
    return pm;
}

void MatPoly::validate() const {
    if (r < 1) throw Error(ErrorKind::schema, "matrix size r must be >= 1");
    if (coeffs.size() != n + 1) throw Error(ErrorKind::schema, "expected n+1 coefficient matrices");
    for (const CMatrix& m : coeffs) {
        if (m.size() != r) throw Error(ErrorKind::schema, "coefficient matrix has wrong size");
        for (cplx v : m.data())
            if (!is_finite(v)) throw Error(ErrorKind::schema, "non-finite coefficient");
    }
}

MatPoly random_matpoly(std::size_t r, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatPoly phi(r, n);
    for (CMatrix& m : phi.coeffs)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                cplx v;
                do v = cplx(u(rng), u(rng));
                while (std::abs(v) > 1.0);
                m(i, j) = v;
            }
    return phi;
}

}  // namespace sov::rational
