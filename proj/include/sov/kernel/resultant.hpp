#pragma once

#include "sov/kernel/poly.hpp"
#include "sov/kernel/types.hpp"

namespace sov {

enum class Var { xi, z };

/// Sylvester resultant of p and q with respect to `eliminate`, returned as a
/// polynomial in the other variable.
Poly resultant(const BiPoly& p, const BiPoly& q, Var eliminate, const Tolerances& tol = {});

/// Numeric Sylvester resultant of two univariate polynomials.
cplx resultant_value(const Poly& p, const Poly& q);

}  // namespace sov
