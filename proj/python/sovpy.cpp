#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sov/accept/accept.hpp"
#include "sov/cli/cli.hpp"
#include "sov/elliptic/elliptic.hpp"
#include "sov/io/io.hpp"
#include "sov/rational/divisor.hpp"
#include "sov/rational/spectral.hpp"
#include "sov/theta/theta.hpp"

namespace py = pybind11;
using namespace sov;
using namespace sov::rational;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

MatPoly to_matpoly(const CArray& a) {
    if (a.ndim() != 3 || a.shape(1) != a.shape(2) || a.shape(0) < 1)
        throw py::value_error("coefficients must have shape (n+1, r, r)");
    const auto n = static_cast<std::size_t>(a.shape(0) - 1), r = static_cast<std::size_t>(a.shape(1));
    CVector flat(a.data(), a.data() + a.size());
    MatPoly phi(r, n, flat);
    phi.validate();
    return phi;
}

CArray from_matpoly(const MatPoly& phi) {
    const CVector flat = phi.flat();
    CArray out({phi.n + 1, phi.r, phi.r});
    std::copy(flat.begin(), flat.end(), out.mutable_data());
    return out;
}

CArray vec(const CVector& v) {
    CArray out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

BracketSpec bracket(const std::vector<cplx>& a, cplx b) { return BracketSpec{Poly(CVector(a.begin(), a.end())), b}; }

py::list positions(const std::vector<CoeffPos>& v) {
    py::list out;
    for (const CoeffPos& p : v) out.append(py::make_tuple(p.k, p.l));
    return out;
}

}  // namespace

PYBIND11_MODULE(sovpy, m) {
    m.doc() = "Spectral curves, separated coordinates and theta-function tools";
    static py::exception<Error> sov_error(m, "SovError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(sov_error, e.what());
        }
    });

    m.def("random_instance", [](std::size_t r, std::size_t n, std::uint64_t seed) { return from_matpoly(random_matpoly(r, n, seed)); },
          py::arg("r"), py::arg("n"), py::arg("seed") = 1, "Coefficients (n+1, r, r) with entries in the unit disk.");

    m.def(
        "spectral_curve",
        [](const CArray& coeffs) {
            const BiPoly P = spectral_curve(to_matpoly(coeffs)).P;
            py::array_t<cplx> out({P.deg_xi() + 1, P.deg_z() + 1});
            auto w = out.mutable_unchecked<2>();
            for (int k = 0; k <= P.deg_xi(); ++k)
                for (int l = 0; l <= P.deg_z(); ++l) w(k, l) = P.coeff(k, l);
            return out;
        },
        py::arg("coeffs"), "det(phi(z) - xi) as P[k, l], the coefficient of xi^k z^l.");

    m.def(
        "genus",
        [](const CArray& coeffs) {
            const GenusInfo g = genus(to_matpoly(coeffs));
            return py::dict(py::arg("genus") = g.genus, py::arg("branch_count") = g.branch_count,
                            py::arg("branch_points") = vec(g.branch_points));
        },
        py::arg("coeffs"));

    m.def(
        "casimir_split",
        [](const CArray& coeffs, const std::vector<cplx>& a, cplx b) {
            const CasimirSplit s = casimir_detect(to_matpoly(coeffs), bracket(a, b));
            return py::make_tuple(positions(s.hamiltonians), positions(s.casimirs));
        },
        py::arg("coeffs"), py::arg("a") = std::vector<cplx>{1.0}, py::arg("b") = cplx{});

    m.def(
        "divisor",
        [](const CArray& coeffs, std::uint64_t seed) {
            const DivisorCoords d = divisor_coords_auto(to_matpoly(coeffs), seed);
            CVector z, xi;
            for (const DivisorPoint& p : d.points) {
                z.push_back(p.z);
                xi.push_back(p.xi);
            }
            return py::dict(py::arg("z") = vec(z), py::arg("xi") = vec(xi), py::arg("s") = vec(d.s));
        },
        py::arg("coeffs"), py::arg("seed") = 1);

    m.def(
        "canonical_residuals",
        [](const CArray& coeffs, const std::vector<cplx>& a, cplx b, std::uint64_t seed) {
            const MatPoly phi = to_matpoly(coeffs);
            const CanonicalReport rep = verify_canonical(phi, bracket(a, b), divisor_coords_auto(phi, seed).s);
            return py::dict(py::arg("z_xi") = rep.max_z_xi, py::arg("z_z") = rep.max_z_z, py::arg("xi_xi") = rep.max_xi_xi);
        },
        py::arg("coeffs"), py::arg("a") = std::vector<cplx>{1.0}, py::arg("b") = cplx{}, py::arg("seed") = 1);

    m.def("riemann_theta", &theta::riemann_theta, py::arg("z"), py::arg("tau"), py::arg("deriv") = 0);

    m.def(
        "theta_relations",
        [](cplx tau, int r, std::uint64_t seed) {
            const theta::RelationResiduals res = theta::relation_residuals(theta::ThetaParams(tau, r), seed);
            return py::dict(py::arg("zero") = res.zero, py::arg("shifts") = res.shifts, py::arg("period") = res.period,
                            py::arg("roots") = res.roots);
        },
        py::arg("tau"), py::arg("r"), py::arg("seed") = 1);

    m.def(
        "elliptic_points",
        [](const std::string& doc) {
            const io::EllipticDoc d = io::load_elliptic(io::json::parse(doc));
            const auto phi = elliptic::assemble_lax(d.coeffs, d.divisor, d.params, d.z0);
            const auto res = elliptic::elliptic_divisor_coords(phi);
            CVector z, xi;
            for (const auto& p : res.points) {
                z.push_back(p.z);
                xi.push_back(p.xi);
            }
            return py::dict(py::arg("z") = vec(z), py::arg("xi") = vec(xi), py::arg("genus") = res.genus,
                            py::arg("argument_count") = res.argument_count);
        },
        py::arg("doc"), "Separating points of an elliptic Lax document given as JSON text.");

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"sovctl"};
            full.insert(full.end(), args.begin(), args.end());
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(full, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a sovctl command line and returns (exit code, stdout, stderr).");

    m.def(
        "accept",
        [](const std::vector<int>& criteria, std::uint64_t seed, int workers) {
            accept::AcceptConfig cfg;
            cfg.criteria = criteria;
            cfg.seed = seed;
            cfg.workers = workers;
            accept::Report rep;
            {
                py::gil_scoped_release release;
                rep = accept::run_acceptance(cfg);
            }
            return py::make_tuple(rep.passed(), rep.summary());
        },
        py::arg("criteria") = std::vector<int>{}, py::arg("seed") = 20240611, py::arg("workers") = 1);
}
