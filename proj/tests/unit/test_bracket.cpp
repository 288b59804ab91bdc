#include <cmath>
#include <random>

#include "doctest.h"
#include "sov/rational/bracket.hpp"
#include "sov/rational/matpoly.hpp"
#include "test_helpers.hpp"

using namespace sov;
using namespace sov::rational;

namespace {

// (A (x) B)_{(i,m),(n,j)} = A_in B_mj
CMatrix kron(const CMatrix& a, const CMatrix& b) {
    const std::size_t r = a.size();
    CMatrix out(r * r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t m = 0; m < r; ++m)
            for (std::size_t n = 0; n < r; ++n)
                for (std::size_t j = 0; j < r; ++j) out(i * r + m, n * r + j) = a(i, n) * b(m, j);
    return out;
}

CMatrix perm(std::size_t r) {
    CMatrix p(r * r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t m = 0; m < r; ++m) p(i * r + m, m * r + i) = 1.0;
    return p;
}

// {phi(l) (x), phi(m)} = [P/(m - l), phi(l) (x) A(m) + A(l) (x) phi(m)], A = a + (b/2) phi
CMatrix tensor_oracle(const MatPoly& phi, const BracketSpec& spec, cplx l, cplx m) {
    const std::size_t r = phi.r;
    const CMatrix id = CMatrix::identity(r);
    auto A = [&](cplx x) { return id * spec.a(x) + phi(x) * (0.5 * spec.b); };
    const CMatrix x = kron(phi(l), A(m)) + kron(A(l), phi(m));
    const CMatrix p = perm(r);
    return (p * x - x * p) * (1.0 / (m - l));
}

CMatrix tensor_readout(const StructureTensor& t, const MatPoly& phi, cplx l, cplx m) {
    const std::size_t r = phi.r;
    const CVector x = phi.flat();
    const CVector pi = t.poisson_matrix(x);
    CMatrix out(r * r);
    for (std::size_t p = 0; p <= phi.n; ++p)
        for (std::size_t q = 0; q <= phi.n; ++q)
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t n = 0; n < r; ++n)
                    for (std::size_t mm = 0; mm < r; ++mm)
                        for (std::size_t j = 0; j < r; ++j)
                            out(i * r + mm, n * r + j) += std::pow(l, static_cast<double>(p)) *
                                                         std::pow(m, static_cast<double>(q)) *
                                                         pi[phi.index(p, i, n) * t.dim + phi.index(q, mm, j)];
    return out;
}

BracketSpec random_spec(std::mt19937_64& rng, std::size_t n) {
    return BracketSpec{Poly(sovtest::unit_disk_vector(rng, n + 2)), sovtest::unit_disk(rng)};
}

}  // namespace

TEST_CASE("rank one brackets vanish") {
    std::mt19937_64 rng(1);
    for (std::size_t n = 1; n <= 3; ++n) {
        const StructureTensor t = structure_tensor(1, n, random_spec(rng, n));
        const CVector pi = t.poisson_matrix(random_matpoly(1, n, 3).flat());
        for (cplx v : pi) CHECK(v == cplx{});
    }
}

TEST_CASE("structure tensor reproduces the r-matrix commutator") {
    std::mt19937_64 rng(2);
    for (std::size_t r : {2u, 3u})
        for (std::size_t n : {1u, 2u}) {
            const BracketSpec spec = random_spec(rng, n);
            const StructureTensor t = structure_tensor(r, n, spec);
            const MatPoly phi = random_matpoly(r, n, 10 * r + n);
            for (int k = 0; k < 3; ++k) {
                const cplx l = sovtest::unit_disk(rng), m = sovtest::unit_disk(rng);
                const CMatrix d = tensor_readout(t, phi, l, m) - tensor_oracle(phi, spec, l, m);
                CHECK(d.norm() < 1e-11 * tensor_oracle(phi, spec, l, m).norm());
            }
        }
}

TEST_CASE("linear bracket expansion in the leading coefficients") {
    // a = 1, b = 0: {phi(l) (x), phi(m)} = sum_k sum_{p+q=k-1} l^p m^q (phi_k (x) I - I (x) phi_k) P
    const std::size_t r = 2, n = 3;
    const MatPoly phi = random_matpoly(r, n, 4);
    const StructureTensor t = structure_tensor(r, n, BracketSpec{Poly{1.0}, 0.0});
    const CVector pi = t.poisson_matrix(phi.flat());
    const CMatrix id = CMatrix::identity(r), P = perm(r);
    double worst = 0.0;
    for (std::size_t p = 0; p <= n; ++p)
        for (std::size_t q = 0; q <= n; ++q) {
            CMatrix want(r * r);
            if (p + q + 1 <= n) want = (kron(phi.coeffs[p + q + 1], id) - kron(id, phi.coeffs[p + q + 1])) * P;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t nn = 0; nn < r; ++nn)
                    for (std::size_t m = 0; m < r; ++m)
                        for (std::size_t j = 0; j < r; ++j) {
                            const cplx got = pi[phi.index(p, i, nn) * t.dim + phi.index(q, m, j)];
                            worst = std::max(worst, std::abs(got - want(i * r + m, nn * r + j)));
                        }
        }
    CHECK(worst < 1e-13);
    // the leading coefficient is central
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t b = 0; b < t.dim; ++b) CHECK(std::abs(pi[phi.index(n, i, j) * t.dim + b]) < 1e-14);
}

TEST_CASE("Poisson matrix is antisymmetric") {
    std::mt19937_64 rng(3);
    const StructureTensor t = structure_tensor(2, 1, random_spec(rng, 1));
    const CVector x = random_matpoly(2, 1, 9).flat();
    for (std::size_t a = 0; a < t.dim; ++a)
        for (std::size_t b = 0; b < t.dim; ++b) CHECK(std::abs(t.entry(a, b, x) + t.entry(b, a, x)) < 1e-15);
}

TEST_CASE("bracket family is affine in (a, b)") {
    std::mt19937_64 rng(4);
    const std::size_t r = 2, n = 2;
    const BracketSpec s1 = random_spec(rng, n), s2 = random_spec(rng, n);
    const BracketSpec sum{s1.a + s2.a, s1.b + s2.b};
    const CVector x = random_matpoly(r, n, 5).flat();
    const CVector p1 = structure_tensor(r, n, s1).poisson_matrix(x);
    const CVector p2 = structure_tensor(r, n, s2).poisson_matrix(x);
    const CVector ps = structure_tensor(r, n, sum).poisson_matrix(x);
    for (std::size_t k = 0; k < ps.size(); ++k) CHECK(std::abs(ps[k] - p1[k] - p2[k]) < 1e-14);
}

TEST_CASE("Jacobi identity on coordinate triples") {
    std::mt19937_64 rng(5);
    for (std::size_t r : {2u, 3u}) {
        const std::size_t n = r == 2 ? 2 : 1;
        const CVector x = random_matpoly(r, n, 6).flat();
        for (int s = 0; s < 3; ++s) {
            const StructureTensor t = structure_tensor(r, n, random_spec(rng, n));
            std::uniform_int_distribution<std::size_t> idx(0, t.dim - 1);
            for (int k = 0; k < 10; ++k) {
                const JacobiResidual j = jacobi_residual(t, x, idx(rng), idx(rng), idx(rng));
                CHECK(std::abs(j.sum) < 1e-10 * std::max(1.0, j.scale));
            }
        }
    }
}

TEST_CASE("bracket of observables") {
    std::mt19937_64 rng(6);
    const MatPoly phi = random_matpoly(2, 2, 7);
    const StructureTensor t = structure_tensor(2, 2, random_spec(rng, 2));
    const CVector w = sovtest::unit_disk_vector(rng, phi.dim());
    const ScalarField f = [&](const CVector& x) {
        cplx s{};
        for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * x[k] * x[(k + 1) % x.size()];
        return s;
    };
    CHECK(std::abs(bracket(f, f, phi, t)) < 1e-12);
    const CVector x = phi.flat();
    for (std::size_t a : {0u, 3u, 5u})
        for (std::size_t b : {1u, 4u, 11u}) {
            const ScalarField xa = [a](const CVector& v) { return v[a]; };
            const ScalarField xb = [b](const CVector& v) { return v[b]; };
            CHECK(std::abs(bracket(xa, xb, phi, t) - t.entry(a, b, x)) < 1e-9);
        }
}

TEST_CASE("bracket degree bound") {
    CHECK_THROWS_AS(structure_tensor(2, 1, BracketSpec{Poly{1.0, 1.0, 1.0, 1.0}, 0.0}), Error);
}
