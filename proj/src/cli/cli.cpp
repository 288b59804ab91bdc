#include "sov/cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "sov/accept/accept.hpp"
#include "sov/elliptic/elliptic.hpp"
#include "sov/io/io.hpp"
#include "sov/rational/divisor.hpp"
#include "sov/rational/flow.hpp"
#include "sov/rational/spectral.hpp"
#include "sov/theta/theta.hpp"

namespace sov::cli {

namespace {

using io::json;
using namespace sov::rational;

struct Common {
    std::uint64_t seed = 20240611;
    double tol_scale = 1.0;
    std::string out;
    int workers = 1;
    std::string input;
    std::string bracket;
};

std::string out_dir(const Common& c) {
    std::string d = c.out;
    if (d.empty()) {
        const char* env = std::getenv("SOV_OUT_DIR");
        d = env && *env ? env : ".";
    }
    std::error_code ec;
    std::filesystem::create_directories(d, ec);
    if (ec) throw Error(ErrorKind::schema, "cannot create output directory '" + d + "'");
    return d;
}

json load_doc(const std::string& spec, const std::string& what) {
    if (spec.empty()) throw Error(ErrorKind::schema, what + " is required");
    const auto first = spec.find_first_not_of(" \t\n");
    if (first != std::string::npos && spec[first] == '{') {
        try {
            return json::parse(spec);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::schema, what + ": " + e.what());
        }
    }
    return io::read_json_file(spec);
}

BracketSpec bracket_of(const Common& c) {
    if (c.bracket.empty()) return BracketSpec{Poly{1.0}, 0.0};
    return io::load_bracket(load_doc(c.bracket, "--bracket"));
}

MatPoly lax_of(const Common& c) { return io::load_matpoly(load_doc(c.input, "--input")); }

int cmd_spectral(const Common& c, std::ostream& out) {
    const MatPoly phi = lax_of(c);
    const BracketSpec spec = bracket_of(c);
    structure_tensor(phi.r, phi.n, spec);
    SpectralCurve curve = spectral_curve(phi);
    const GenusInfo g = genus(phi);
    const CasimirSplit split = casimir_detect(phi, spec, {}, c.seed);
    curve.hamiltonians = split.hamiltonians;
    curve.casimirs = split.casimirs;
    json doc = io::save_curve(curve, g);
    doc["instance"] = io::save_matpoly(phi);
    doc["bracket"] = io::save_bracket(spec);
    doc["warnings"] = split.warnings;
    const std::string path = out_dir(c) + "/curve.json";
    io::write_json_file(path, doc);
    out << "genus " << g.genus << ", branch points " << g.branch_count << ", hamiltonians " << split.hamiltonians.size()
        << ", casimirs " << split.casimirs.size() << "\n";
    for (const std::string& w : split.warnings) out << "warning: " << w << "\n";
    out << "wrote " << path << "\n";
    return ok;
}

int cmd_sov(const Common& c, std::ostream& out) {
    const MatPoly phi = lax_of(c);
    const BracketSpec spec = bracket_of(c);
    structure_tensor(phi.r, phi.n, spec);
    const DivisorCoords d = divisor_coords_auto(phi, c.seed);
    const CanonicalReport rep = verify_canonical(phi, spec, d.s);
    const DivisorResidual res = divisor_residual(phi, d);
    const std::string dir = out_dir(c);
    io::CsvWriter csv(dir + "/points.csv", {"mu", "z_re", "z_im", "xi_re", "xi_im"});
    json pts = json::array(), diag = json::array();
    for (std::size_t m = 0; m < d.points.size(); ++m) {
        const DivisorPoint& p = d.points[m];
        csv.row({static_cast<double>(m), p.z.real(), p.z.imag(), p.xi.real(), p.xi.imag()});
        const cplx target = spec.a(p.z) + spec.b * p.xi;
        pts.push_back(json{{"z", io::to_json(p.z)}, {"xi", io::to_json(p.xi)}});
        diag.push_back(json{{"measured", io::to_json(rep.z_xi.empty() ? cplx{} : rep.z_xi[m][m])}, {"target", io::to_json(target)}});
    }
    const double tol = 1e-4 * c.tol_scale;
    const bool pass = rep.max_z_xi <= tol && rep.max_z_z <= tol && rep.max_xi_xi <= tol;
    json s = json::array();
    for (cplx v : d.s) s.push_back(io::to_json(v));
    const json doc{{"points", pts},
                   {"s", s},
                   {"rejected", d.rejected},
                   {"warnings", d.warnings},
                   {"curve_residual", res.curve},
                   {"adjugate_residual", res.adjugate},
                   {"z_xi_diagonal", diag},
                   {"max_z_xi", rep.max_z_xi},
                   {"max_z_z", rep.max_z_z},
                   {"max_xi_xi", rep.max_xi_xi},
                   {"tolerance", tol},
                   {"status", pass ? "pass" : "fail"}};
    io::write_json_file(dir + "/sov_report.json", doc);
    out << d.points.size() << " divisor points; max |{z,xi} - (a + b xi) delta| " << rep.max_z_xi << ", max |{z,z}| "
        << rep.max_z_z << ", max |{xi,xi}| " << rep.max_xi_xi << " -> " << (pass ? "pass" : "fail") << "\n";
    return pass ? ok : acceptance_failure;
}

CoeffPos parse_pos(const std::string& s, std::size_t r, std::size_t n) {
    std::stringstream ss(s);
    int k = -1, l = -1;
    char comma = 0;
    if (!(ss >> k >> comma >> l) || comma != ',') throw Error(ErrorKind::schema, "field 'ham': expected k,l");
    const CoeffPos p{k, l};
    for (const CoeffPos& q : spectral_positions(r, n))
        if (q == p) return p;
    throw Error(ErrorKind::schema, "field 'ham': not a spectral coefficient position");
}

int cmd_flow(const Common& c, const std::string& ham, double t_max, int samples, std::ostream& out) {
    const MatPoly phi = lax_of(c);
    const BracketSpec spec = bracket_of(c);
    structure_tensor(phi.r, phi.n, spec);
    if (samples < 3) throw Error(ErrorKind::schema, "field 'samples': must be >= 3");
    if (!(t_max > 0.0)) throw Error(ErrorKind::schema, "field 't-max': must be positive");
    const CasimirSplit split = casimir_detect(phi, spec, {}, c.seed);
    CoeffPos H;
    if (!ham.empty())
        H = parse_pos(ham, phi.r, phi.n);
    else if (!split.hamiltonians.empty())
        H = split.hamiltonians.front();
    else
        H = spectral_positions(phi.r, phi.n).front();
    const int steps = 4 * (samples - 1);
    std::vector<double> grid;
    for (int k = 0; k <= steps; ++k) grid.push_back(t_max * k / steps);
    const Trajectory tr = flow(phi, H, spec, grid);
    const auto pos = spectral_positions(phi.r, phi.n);
    const CVector c0 = spectral_values(phi, pos);
    double cscale = 0.0;
    for (cplx v : c0) cscale = std::max(cscale, std::abs(v));
    const CVector x0 = phi.flat();

    LinearizeResult lin;
    LinearFit fit;
    const bool linear = !split.hamiltonians.empty() && phi.r >= 2;
    std::vector<std::size_t> idx;
    for (int k = 0; k <= steps; k += 4) idx.push_back(static_cast<std::size_t>(k));
    if (linear) {
        const GenusInfo g = genus(phi);
        const DivisorCoords d = divisor_coords_auto(phi, c.seed);
        lin = linearize(tr, spec, choose_base_point(g.branch_points), d.s, split.hamiltonians);
        fit = fit_linear(lin, idx);
    }
    const std::string dir = out_dir(c);
    std::vector<std::string> header{"t", "drift", "motion"};
    for (std::size_t i = 0; linear && i < split.hamiltonians.size(); ++i) {
        header.push_back("Q" + std::to_string(i) + "_re");
        header.push_back("Q" + std::to_string(i) + "_im");
    }
    io::CsvWriter csv(dir + "/flow.csv", header);
    double max_drift = 0.0;
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        const CVector ck = spectral_values(tr.states[k], pos);
        const CVector xk = tr.states[k].flat();
        double drift = 0.0, motion = 0.0;
        for (std::size_t i = 0; i < ck.size(); ++i) drift = std::max(drift, std::abs(ck[i] - c0[i]) / std::max(cscale, 1e-300));
        for (std::size_t i = 0; i < xk.size(); ++i) motion = std::max(motion, std::abs(xk[i] - x0[i]));
        max_drift = std::max(max_drift, drift);
        std::vector<double> row{tr.t[k], drift, motion};
        for (std::size_t i = 0; linear && i < lin.Q[k].size(); ++i) {
            row.push_back(lin.Q[k][i].real());
            row.push_back(lin.Q[k][i].imag());
        }
        csv.row(row);
    }
    double worst = 0.0;
    if (linear) {
        io::CsvWriter f(dir + "/fit.csv", {"i", "k", "l", "slope_re", "slope_im", "residual"});
        for (std::size_t i = 0; i < fit.slope.size(); ++i) {
            f.row({static_cast<double>(i), static_cast<double>(split.hamiltonians[i].k), static_cast<double>(split.hamiltonians[i].l),
                   fit.slope[i].real(), fit.slope[i].imag(), fit.residual[i]});
            worst = std::max(worst, fit.residual[i]);
        }
    }
    const json doc{{"hamiltonian", json::array({H.k, H.l})},
                   {"t_max", t_max},
                   {"samples", samples},
                   {"max_drift", max_drift},
                   {"linearized", linear},
                   {"max_fit_residual", worst}};
    io::write_json_file(dir + "/flow_report.json", doc);
    out << "flow of H(" << H.k << "," << H.l << "): max drift " << max_drift;
    if (linear) out << ", max linear-fit residual " << worst;
    out << "\n";
    return ok;
}

cplx parse_tau(const std::string& s) {
    std::stringstream ss(s);
    double re = 0, im = 0;
    char comma = 0;
    if (!(ss >> re >> comma >> im) || comma != ',') throw Error(ErrorKind::schema, "field 'tau': expected re,im");
    if (im <= 0.0) throw Error(ErrorKind::schema, "field 'tau': Im tau must be positive");
    return {re, im};
}

int cmd_theta(const Common& c, const std::vector<std::string>& taus, const std::vector<int>& rs, std::ostream& out) {
    std::vector<cplx> tv;
    std::vector<int> rv = rs;
    if (!c.input.empty()) {
        const json doc = load_doc(c.input, "--input");
        tv.push_back(io::complex_from(doc.contains("tau") ? doc["tau"] : json(), "tau"));
        if (!doc.contains("r") || !doc["r"].is_number_integer()) throw Error(ErrorKind::schema, "field 'r': missing");
        rv = {doc["r"].get<int>()};
    }
    for (const std::string& t : taus) tv.push_back(parse_tau(t));
    if (tv.empty()) tv = {cplx(0, 1), cplx(0.2, 1.1)};
    if (rv.empty()) rv = {2, 3, 4, 5};
    for (int r : rv)
        if (r < 1 || r > 12) throw Error(ErrorKind::schema, "field 'r': must be in 1..12");
    const std::string dir = out_dir(c);
    io::CsvWriter csv(dir + "/theta.csv", {"r", "tau_re", "tau_im", "zero", "shifts", "period", "roots"});
    bool pass = true;
    for (cplx tau : tv)
        for (int r : rv) {
            const theta::ThetaParams p(tau, r);
            const theta::RelationResiduals res = theta::relation_residuals(p, c.seed + static_cast<std::uint64_t>(r));
            csv.row({static_cast<double>(r), tau.real(), tau.imag(), res.zero, res.shifts, res.period, res.roots});
            const double t = c.tol_scale;
            const bool good = res.zero <= 1e-12 * t && res.shifts <= 1e-12 * t && res.period <= 1e-10 * t && res.roots <= 1e-8 * t;
            pass = pass && good;
            out << "r=" << r << " tau=(" << tau.real() << "," << tau.imag() << "): zero " << res.zero << ", shifts " << res.shifts
                << ", period " << res.period << ", roots " << res.roots << (good ? "" : "  FAIL") << "\n";
        }
    return pass ? ok : acceptance_failure;
}

int cmd_elliptic(const Common& c, std::ostream& out) {
    using namespace sov::elliptic;
    const io::EllipticDoc doc = io::load_elliptic(load_doc(c.input, "--input"));
    const EllipticLax phi = assemble_lax(doc.coeffs, doc.divisor, doc.params, doc.z0);
    const double qp = quasi_periodicity_residual(phi, c.seed);
    const double inv = invariants_periodicity_residual(phi, c.seed);
    const EllipticDivisorResult res = elliptic_divisor_coords(phi);
    const cplx shift = 0.037 * doc.params.omega1() + 0.021 * doc.params.omega2();
    const TranslationReport tr = translation_check(phi, shift);
    const auto red = slr_reduce(res.points);
    const std::string dir = out_dir(c);
    io::CsvWriter csv(dir + "/elliptic_points.csv", {"mu", "z_re", "z_im", "xi_re", "xi_im", "sheet"});
    json pts = json::array(), rpts = json::array();
    for (std::size_t m = 0; m < res.points.size(); ++m) {
        const auto& p = res.points[m];
        csv.row({static_cast<double>(m), p.z.real(), p.z.imag(), p.xi.real(), p.xi.imag(), static_cast<double>(p.sheet)});
        pts.push_back(json{{"z", io::to_json(p.z)}, {"xi", io::to_json(p.xi)}, {"sheet", p.sheet}});
        rpts.push_back(json{{"z", io::to_json(red[m].z)}, {"xi", io::to_json(red[m].xi)}});
    }
    const json rep{{"quasi_periodicity", qp},
                   {"invariants_periodicity", inv},
                   {"points", pts},
                   {"argument_count", res.argument_count},
                   {"genus", res.genus},
                   {"branch_count", res.branch_count},
                   {"curve_residual", res.curve_residual},
                   {"adjugate_residual", res.adjugate_residual},
                   {"translation", json{{"shift", io::to_json(shift)}, {"max_z", tr.max_z}, {"max_xi", tr.max_xi}, {"counts_match", tr.counts_match}}},
                   {"slr_reduced", rpts}};
    io::write_json_file(dir + "/elliptic_report.json", rep);
    out << res.points.size() << " points (argument principle " << res.argument_count << ", genus " << res.genus
        << "); quasi-periodicity " << qp << ", translation " << std::max(tr.max_z, tr.max_xi) << "\n";
    return ok;
}

int cmd_accept(const Common& c, const std::vector<int>& criteria, std::ostream& out) {
    accept::AcceptConfig cfg;
    cfg.seed = c.seed;
    cfg.tol_scale = c.tol_scale;
    cfg.workers = c.workers;
    cfg.criteria = criteria;
    for (int k : criteria)
        if (k < 1 || k > 9) throw Error(ErrorKind::schema, "field 'criteria': entries must be in 1..9");
    if (!(c.tol_scale > 0.0)) throw Error(ErrorKind::schema, "field 'tol-scale': must be positive");
    if (c.workers < 1) throw Error(ErrorKind::schema, "field 'workers': must be >= 1");
    const accept::Report rep = accept::run_acceptance(cfg);
    const std::string dir = out_dir(c);
    io::write_json_file(dir + "/accept_report.json", rep.to_json());
    const std::string summary = rep.summary();
    std::ofstream(dir + "/accept_summary.txt") << summary;
    out << summary;
    return rep.passed() ? ok : acceptance_failure;
}

int exit_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::schema: return schema_error;
        case ErrorKind::non_generic: return non_generic;
        case ErrorKind::numeric_domain: return numeric_domain;
        case ErrorKind::convergence:
        case ErrorKind::singular: return numerical_failure;
        default: return internal_error;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Separation of variables toolkit"};
    app.require_subcommand(1);
    Common c;
    std::string ham;
    double t_max = 0.2;
    int samples = 9;
    std::vector<std::string> taus;
    std::vector<int> rs, criteria;

    auto common = [&](CLI::App* s, bool input, bool bracket) {
        s->add_option("--seed", c.seed, "random seed");
        s->add_option("--tol-scale", c.tol_scale, "multiplies acceptance tolerances");
        s->add_option("--out", c.out, "output directory (default $SOV_OUT_DIR or .)");
        s->add_option("--workers", c.workers, "worker threads");
        if (input) s->add_option("--input", c.input, "instance document (path or inline JSON)");
        if (bracket) s->add_option("--bracket", c.bracket, "bracket {a, b} (path or inline JSON)");
    };
    auto* spectral = app.add_subcommand("spectral", "spectral curve, genus and Hamiltonian/Casimir split");
    common(spectral, true, true);
    auto* sov = app.add_subcommand("sov", "divisor coordinates and canonical brackets");
    common(sov, true, true);
    auto* flw = app.add_subcommand("flow", "Hamiltonian flow and linearizing coordinates");
    common(flw, true, true);
    flw->add_option("--ham", ham, "spectral coefficient k,l (default: first Hamiltonian)");
    flw->add_option("--t-max", t_max, "final time");
    flw->add_option("--samples", samples, "sample times for the linear fit");
    auto* th = app.add_subcommand("theta", "theta identities and basic section shifts");
    common(th, true, false);
    th->add_option("--tau", taus, "re,im (repeatable)");
    th->add_option("--r", rs, "ranks");
    auto* ell = app.add_subcommand("elliptic", "elliptic Lax matrix and separating points");
    common(ell, true, false);
    auto* acc = app.add_subcommand("accept", "acceptance suite");
    common(acc, false, false);
    acc->add_option("--criteria", criteria, "subset of 1..9");

    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return schema_error;
    }
    try {
        if (spectral->parsed()) return cmd_spectral(c, out);
        if (sov->parsed()) return cmd_sov(c, out);
        if (flw->parsed()) return cmd_flow(c, ham, t_max, samples, out);
        if (th->parsed()) return cmd_theta(c, taus, rs, out);
        if (ell->parsed()) return cmd_elliptic(c, out);
        if (acc->parsed()) return cmd_accept(c, criteria, out);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::non_generic) err << "warning: reducible or singular curve\n";
        err << "error: " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return internal_error;
    }
    return internal_error;
}

}  // namespace sov::cli
