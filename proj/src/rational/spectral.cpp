#include "sov/rational/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "sov/kernel/resultant.hpp"
#include "sov/kernel/roots.hpp"

namespace sov::rational {

SpectralCurve spectral_curve(const MatPoly& phi) {
    phi.validate();
    SpectralCurve c;
    c.P = char_data(phi.poly_matrix()).det;
    c.positions = spectral_positions(phi.r, phi.n);
    return c;
}

std::vector<CoeffPos> spectral_positions(std::size_t r, std::size_t n) {
    std::vector<CoeffPos> pos;
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l <= (r - k) * n; ++l) pos.push_back({static_cast<int>(k), static_cast<int>(l)});
    return pos;
}

CVector spectral_values(const MatPoly& phi, const std::vector<CoeffPos>& pos) {
    const BiPoly P = char_data(phi.poly_matrix()).det;
    CVector v;
    for (const CoeffPos& p : pos) v.push_back(P.coeff(p.k, p.l));
    return v;
}

std::vector<CVector> spectral_gradients(const MatPoly& phi, const std::vector<CoeffPos>& pos) {
    const CharData cd = char_data(phi.poly_matrix());
    const std::size_t r = phi.r;
    std::vector<CVector> grads;
    for (const CoeffPos& c : pos) {
        CVector g(phi.dim());
        // d det(M) / d M_ij = adj(M)_ji, M = phi(z) - xi I
        for (std::size_t p = 0; p <= phi.n; ++p) {
            if (c.l < static_cast<int>(p)) continue;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    g[phi.index(p, i, j)] = cd.adj[j * r + i].coeff(c.k, c.l - p);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

GenusInfo genus(const MatPoly& phi, const Tolerances& tol) {
    phi.validate();
    GenusInfo info;
    if (phi.r == 1) return info;

    // no branching over infinity
    const CVector lead = poly_roots_flat(char_bipoly(phi.coeffs[phi.n]), tol);
    const double lead_scale = std::max(1.0, phi.coeffs[phi.n].norm());
    for (std::size_t a = 0; a < lead.size(); ++a)
        for (std::size_t b = a + 1; b < lead.size(); ++b)
            if (std::abs(lead[a] - lead[b]) < 1e-3 * lead_scale)
                throw Error(ErrorKind::non_generic, "non-generic curve: leading matrix has close eigenvalues");

    const BiPoly P = char_data(phi.poly_matrix()).det;
    const Poly disc = resultant(P, P.d_xi(), Var::xi, tol);
    if (disc.is_zero()) throw Error(ErrorKind::non_generic, "non-generic curve: discriminant vanishes identically");
    std::vector<Root> roots = poly_roots(disc, tol);
    double zscale = 1.0;
    for (const Root& rt : roots) zscale = std::max(zscale, std::abs(rt.value));
    for (const Root& rt : roots)
        if (rt.multiplicity > 1) throw Error(ErrorKind::non_generic, "non-generic curve: repeated branch point");
    for (std::size_t a = 0; a < roots.size(); ++a)
        for (std::size_t b = a + 1; b < roots.size(); ++b)
            if (std::abs(roots[a].value - roots[b].value) < 1e-3 * zscale)
                throw Error(ErrorKind::non_generic, "non-generic curve: clustered branch points");

    for (const Root& rt : roots) info.branch_points.push_back(rt.value);
    info.branch_count = static_cast<int>(roots.size());
    if (info.branch_count % 2 != 0) throw Error(ErrorKind::non_generic, "non-generic curve: odd branch count");
    info.genus = info.branch_count / 2 - static_cast<int>(phi.r) + 1;
    return info;
}

CasimirSplit casimir_detect(const MatPoly& phi, const BracketSpec& spec, const Tolerances& tol,
                            std::uint64_t seed) {
    const StructureTensor t = structure_tensor(phi.r, phi.n, spec);
    const std::vector<CoeffPos> pos = spectral_positions(phi.r, phi.n);
    std::vector<bool> casimir(pos.size(), true);
    for (int trial = 0; trial < 5; ++trial) {
        const MatPoly pt = trial == 0 ? phi : random_matpoly(phi.r, phi.n, seed * 1000003ULL + trial);
        const CVector x = pt.flat();
        const CVector pi = t.poisson_matrix(x);
        double pi_norm = 0.0;
        for (cplx v : pi) pi_norm += std::norm(v);
        pi_norm = std::sqrt(pi_norm);
        const std::vector<CVector> grads = spectral_gradients(pt, pos);
        for (std::size_t c = 0; c < pos.size(); ++c) {
            const CVector field = poisson_apply(pi, grads[c]);
            double fn = 0.0, gn = 0.0;
            for (cplx v : field) fn += std::norm(v);
            for (cplx v : grads[c]) gn += std::norm(v);
            const double scale = std::max(1.0, pi_norm * std::sqrt(gn));
            if (std::sqrt(fn) >= tol.casimir * scale) casimir[c] = false;
        }
    }
    CasimirSplit split;
    for (std::size_t c = 0; c < pos.size(); ++c) (casimir[c] ? split.casimirs : split.hamiltonians).push_back(pos[c]);
    try {
        const int g = genus(phi, tol).genus;
        if (static_cast<int>(split.hamiltonians.size()) != g)
            split.warnings.push_back("hamiltonian count " + std::to_string(split.hamiltonians.size()) +
                                     " differs from genus " + std::to_string(g));
    } catch (const Error& e) {
        split.warnings.push_back(std::string("genus unavailable: ") + e.what());
    }
    return split;
}

}  // namespace sov::rational
