#include "sov/kernel/resultant.hpp"

#include <cmath>
#include <numbers>

#include "sov/kernel/matrix.hpp"

namespace sov {

namespace {

// Sylvester determinant with formal degrees dp, dq (coefficients may vanish).
cplx sylvester_det(const CVector& p, const CVector& q) {
    const std::size_t dp = p.size() - 1;
    const std::size_t dq = q.size() - 1;
    const std::size_t n = dp + dq;
    if (n == 0) return 1.0;
    CMatrix s(n);
    for (std::size_t row = 0; row < dq; ++row)
        for (std::size_t k = 0; k <= dp; ++k) s(row, row + k) = p[dp - k];
    for (std::size_t row = 0; row < dp; ++row)
        for (std::size_t k = 0; k <= dq; ++k) s(dq + row, row + k) = q[dq - k];
    return determinant(s);
}

}  // namespace

cplx resultant_value(const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) return 0.0;
    return sylvester_det(p.coeffs(), q.coeffs());
}

Poly resultant(const BiPoly& p_in, const BiPoly& q_in, Var eliminate, const Tolerances& tol) {
    const BiPoly p = eliminate == Var::xi ? p_in : p_in.swapped();
    const BiPoly q = eliminate == Var::xi ? q_in : q_in.swapped();
    if (p.deg_xi() < 1 || q.deg_xi() < 1) throw Error(ErrorKind::non_generic, "resultant degenerate");
    const int dp = p.deg_xi();
    const int dq = q.deg_xi();
    const int bound = dp * std::max(q.deg_z(), 0) + dq * std::max(p.deg_z(), 0);
    const int m = bound + 1;

    // Sample on the unit circle and interpolate by an inverse DFT.
    CVector values(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
        CVector pc(static_cast<std::size_t>(dp + 1)), qc(static_cast<std::size_t>(dq + 1));
        for (int j = 0; j <= dp; ++j) pc[j] = p.row(j)(z);
        for (int j = 0; j <= dq; ++j) qc[j] = q.row(j)(z);
        values[k] = sylvester_det(pc, qc);
    }
    CVector coeffs(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
        cplx acc{};
        for (int k = 0; k < m; ++k)
            acc += values[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) * l / m);
        coeffs[l] = acc / static_cast<double>(m);
    }
    return Poly(std::move(coeffs), tol.zero_trim * 100.0);
}

}  // namespace sov
