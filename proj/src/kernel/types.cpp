#include "sov/kernel/types.hpp"

namespace sov {

Tolerances Tolerances::scaled(double factor) const {
    Tolerances t = *this;
    t.root_residual *= factor;
    t.quad *= factor;
    t.ode *= factor;
    t.divisor *= factor;
    t.casimir *= factor;
    return t;
}

}  // namespace sov
