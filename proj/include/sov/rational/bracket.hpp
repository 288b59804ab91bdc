#pragma once

#include <functional>
#include <vector>

#include "sov/kernel/matrix.hpp"
#include "sov/kernel/ode.hpp"
#include "sov/rational/matpoly.hpp"

namespace sov::rational {

/// One member of the bracket family: a(lambda) of degree <= n+1 and b.
struct BracketSpec {
    Poly a;
    cplx b;
};

/// {x_alpha, x_beta} = sum lin c*x_gamma + sum quad c*x_gamma*x_delta,
/// for flat coordinates of a MatPoly.
struct StructureTensor {
    struct Lin {
        int gamma;
        cplx c;
    };
    struct Quad {
        int gamma;
        int delta;
        cplx c;
    };
    std::size_t r = 0;
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<std::vector<Lin>> lin;    // dim*dim entries
    std::vector<std::vector<Quad>> quad;  // dim*dim entries

    const std::vector<Lin>& lin_at(std::size_t a, std::size_t b) const { return lin[a * dim + b]; }
    const std::vector<Quad>& quad_at(std::size_t a, std::size_t b) const { return quad[a * dim + b]; }
    cplx entry(std::size_t a, std::size_t b, const CVector& x) const;
    /// Poisson matrix Pi(x), row-major dim x dim.
    CVector poisson_matrix(const CVector& x) const;
    /// d Pi_{ab} / d x_c, all c.
    CVector entry_gradient(std::size_t a, std::size_t b, const CVector& x) const;
};

StructureTensor structure_tensor(std::size_t r, std::size_t n, const BracketSpec& spec);

/// grad F . Pi . grad G
cplx bracket_from_gradients(const CVector& grad_f, const CVector& pi, const CVector& grad_g);
/// Bracket of two observables on coefficient space, gradients by finite differences.
cplx bracket(const ScalarField& f, const ScalarField& g, const MatPoly& phi, const StructureTensor& t,
             double h_rel = 1e-6);
/// Pi(x) v
CVector poisson_apply(const CVector& pi, const CVector& v);

/// Cyclic sum {x_a,{x_b,x_c}} + {x_b,{x_c,x_a}} + {x_c,{x_a,x_b}} and the
/// largest individual term, for scaling.
struct JacobiResidual {
    cplx sum;
    double scale;
};
JacobiResidual jacobi_residual(const StructureTensor& t, const CVector& x, std::size_t a, std::size_t b,
                               std::size_t c);

}  // namespace sov::rational
