#pragma once

#include <vector>

#include "sov/kernel/poly.hpp"
#include "sov/kernel/types.hpp"

namespace sov {

struct Root {
    cplx value;
    int multiplicity = 1;
};

/// Raised when simultaneous iteration stalls; carries the last iterate.
class RootConvergenceError : public Error {
public:
    RootConvergenceError(const std::string& what, CVector best)
        : Error(ErrorKind::convergence, what), best_(std::move(best)) {}
    const CVector& best() const { return best_; }

private:
    CVector best_;
};

/// All roots of p, repeated roots merged with their multiplicity.
/// Sum of multiplicities equals deg p.
std::vector<Root> poly_roots(const Poly& p, const Tolerances& tol = {});
/// Same, expanded so that each root appears multiplicity times.
CVector poly_roots_flat(const Poly& p, const Tolerances& tol = {});

}  // namespace sov
