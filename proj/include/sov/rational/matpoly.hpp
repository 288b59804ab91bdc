#pragma once

#include <cstdint>
#include <vector>

#include "sov/kernel/matrix.hpp"

namespace sov::rational {

/// phi(z) = sum_k coeffs[k] z^k with r x r coefficients.
/// Flat coordinates: x[k*r*r + i*r + j] = coeffs[k](i, j).
struct MatPoly {
    std::size_t r = 0;
    std::size_t n = 0;
    std::vector<CMatrix> coeffs;

    MatPoly() = default;
    MatPoly(std::size_t r, std::size_t n);
    MatPoly(std::size_t r, std::size_t n, const CVector& flat);

    std::size_t dim() const { return (n + 1) * r * r; }
    std::size_t index(std::size_t k, std::size_t i, std::size_t j) const { return k * r * r + i * r + j; }
    CVector flat() const;
    CMatrix operator()(cplx z) const;
    PolyMatrix poly_matrix() const;
    void validate() const;
};

/// Coefficient entries uniform in the unit disk.
MatPoly random_matpoly(std::size_t r, std::size_t n, std::uint64_t seed);

}  // namespace sov::rational
