#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sov/cli/cli.hpp"
#include "sov/io/io.hpp"
#include "sov/rational/spectral.hpp"
#include "test_helpers.hpp"

using namespace sov;
using namespace sov::rational;
using sov::io::json;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("sov_test_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string file(const std::string& name, const std::string& contents) const {
        const std::string p = (dir / name).string();
        std::ofstream(p) << contents;
        return p;
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Outcome {
    int code;
    std::string out, err;
};

Outcome sovctl(std::vector<std::string> args) {
    args.insert(args.begin(), "sovctl");
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    return {code, o.str(), e.str()};
}

std::string error_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("doubles survive the 17-digit csv format") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Scratch s("csv");
    std::vector<std::vector<double>> rows;
    {
        io::CsvWriter w(s.path("t.csv"), {"x", "y", "z"});
        for (int k = 0; k < 50; ++k) {
            std::vector<double> row{u(rng) * std::pow(10.0, k % 30 - 15), u(rng), 1.0 / 3.0 + k};
            w.row(row);
            rows.push_back(row);
        }
    }
    std::vector<std::string> header;
    const auto back = io::read_csv(s.path("t.csv"), &header);
    CHECK(header == std::vector<std::string>{"x", "y", "z"});
    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) CHECK(back[k] == rows[k]);
}

TEST_CASE("instance, bracket and elliptic documents round-trip") {
    const MatPoly phi = random_matpoly(3, 2, 11);
    const json doc = json::parse(io::save_matpoly(phi).dump());
    const MatPoly back = io::load_matpoly(doc);
    CHECK(back.flat() == phi.flat());

    const BracketSpec spec{Poly({cplx(0.5, -1.0), cplx(0.0, 2.0)}), cplx(0.25, 0.125)};
    const BracketSpec sb = io::load_bracket(json::parse(io::save_bracket(spec).dump()));
    CHECK(sb.a.coeff(0) == spec.a.coeff(0));
    CHECK(sb.a.coeff(1) == spec.a.coeff(1));
    CHECK(sb.b == spec.b);

    const json ell = json::parse(
        R"({"tau":[0.1,1.0],"r":2,"divisor":[{"nu":[0.3,0.2]},{"nu":[0.6,0.55],"mult":1}],)"
        R"("coeffs":[[1,0],[0.5,-0.25],[0,1],[0.125,0],[0.3,0.1],[-0.2,0.4],[0.7,0],[0,-0.6]],"z0":[0.01,0.02]})");
    const io::EllipticDoc d = io::load_elliptic(ell);
    const json again = io::save_elliptic(d);
    CHECK(io::save_elliptic(io::load_elliptic(again)).dump() == again.dump());
    CHECK(d.coeffs.size() == 8);
}

TEST_CASE("curve document reproduces the recomputed coefficients exactly") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const MatPoly phi = random_matpoly(2, 2, seed);
        const json curve = json::parse(io::save_curve(spectral_curve(phi), genus(phi)).dump(2));
        const MatPoly reloaded = io::load_matpoly(json::parse(io::save_matpoly(phi).dump()));
        const BiPoly P = io::load_curve_poly(curve);
        const json again = io::save_curve(spectral_curve(reloaded), genus(reloaded));
        CHECK(again["P"].dump() == curve["P"].dump());
        const BiPoly Q = spectral_curve(reloaded).P;
        REQUIRE(P.deg_xi() == Q.deg_xi());
        for (int k = 0; k <= P.deg_xi(); ++k)
            for (int l = 0; l <= P.deg_z(); ++l) CHECK(P.coeff(k, l) == Q.coeff(k, l));
    }
}

TEST_CASE("schema errors name the offending field") {
    CHECK(error_message([] { io::load_matpoly(json::parse(R"({"r":2,"coeffs":[]})")); }).find("'n'") != std::string::npos);
    CHECK(error_message([] { io::load_matpoly(json::parse(R"({"r":2,"n":0,"coeffs":[[[1,0]]]})")); }).find("coeffs") !=
          std::string::npos);
    CHECK(error_message([] { io::load_bracket(json::parse(R"({"a":[[1,0]],"b":"x"})")); }).find("'b'") != std::string::npos);
    CHECK(error_message([] { io::complex_from(json::parse("[1]"), "z0"); }).find("z0") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    Scratch s("codes");
    const std::string out = s.dir.string();

    const Outcome help = sovctl({"--help"});
    CHECK(help.code == cli::ok);
    CHECK(help.out.find("spectral") != std::string::npos);

    const std::string diag = s.file("diag.json", R"({"r":2,"n":1,"coeffs":[[[[1,0],[0,0]],[[0,0],[2,0]]],[[[3,0],[0,0]],[[0,0],[-1,0]]]]})");
    const Outcome d = sovctl({"spectral", "--input", diag, "--out", out});
    CHECK(d.code == cli::non_generic);
    CHECK(d.err.find("reducible") != std::string::npos);

    const std::string no_n = s.file("no_n.json", R"({"r":2,"coeffs":[]})");
    const Outcome m = sovctl({"spectral", "--input", no_n, "--out", out});
    CHECK(m.code == cli::schema_error);
    CHECK(m.err.find("'n'") != std::string::npos);

    CHECK(sovctl({"theta", "--tau", "0,0.01", "--r", "3", "--out", out}).code == cli::numeric_domain);
    CHECK(sovctl({"theta", "--tau", "0,1", "--r", "2", "--r", "3", "--out", out}).code == cli::ok);
    const auto theta = io::read_csv(s.path("theta.csv"));
    REQUIRE(theta.size() == 2);
    for (const auto& row : theta) CHECK(row[5] < 1e-10);

    CHECK(sovctl({"nope"}).code == cli::schema_error);
    CHECK(sovctl({"spectral", "--input", s.path("absent.json"), "--out", out}).code == cli::schema_error);
    CHECK(sovctl({"spectral", "--input", "{\"r\":", "--out", out}).code == cli::schema_error);
}

TEST_CASE("cli spectral writes a loadable curve document") {
    Scratch s("spectral");
    const std::string in = s.file("phi.json", io::save_matpoly(random_matpoly(2, 2, 5)).dump());
    REQUIRE(sovctl({"spectral", "--input", in, "--out", s.dir.string()}).code == cli::ok);
    const json doc = io::read_json_file(s.path("curve.json"));
    CHECK(doc["genus"] == 1);
    CHECK(doc["hamiltonians"].size() == 2);
    const BiPoly P = io::load_curve_poly(doc);
    const BiPoly Q = spectral_curve(io::load_matpoly(doc["instance"])).P;
    for (int k = 0; k <= P.deg_xi(); ++k)
        for (int l = 0; l <= P.deg_z(); ++l) CHECK(P.coeff(k, l) == Q.coeff(k, l));
}

TEST_CASE("cli sov reports canonical brackets") {
    Scratch s("sov");
    const std::string in = s.file("phi.json", io::save_matpoly(random_matpoly(2, 2, 9)).dump());
    const Outcome a = sovctl({"sov", "--input", in, "--bracket", R"({"a":[[1,0]],"b":[0,0]})", "--out", s.dir.string()});
    CHECK(a.code == cli::ok);
    const json ra = io::read_json_file(s.path("sov_report.json"));
    CHECK(ra["status"] == "pass");
    CHECK(ra["max_z_z"].get<double>() < 1e-4);
    CHECK(ra["max_z_xi"].get<double>() < 1e-4);
    CHECK(io::read_csv(s.path("points.csv")).size() == 2);

    REQUIRE(sovctl({"sov", "--input", in, "--bracket", R"({"a":[],"b":[1,0]})", "--out", s.dir.string()}).code == cli::ok);
    const json rb = io::read_json_file(s.path("sov_report.json"));
    for (std::size_t m = 0; m < rb["points"].size(); ++m) {
        const cplx xi = io::complex_from(rb["points"][m]["xi"], "xi");
        const cplx target = io::complex_from(rb["z_xi_diagonal"][m]["target"], "target");
        const cplx measured = io::complex_from(rb["z_xi_diagonal"][m]["measured"], "measured");
        CHECK(target == xi);
        CHECK(std::abs(measured - xi) < 1e-4 * std::max(1.0, std::abs(xi)));
    }

    const std::string scalar = s.file("scalar.json", io::save_matpoly(random_matpoly(1, 2, 3)).dump());
    CHECK(sovctl({"sov", "--input", scalar, "--out", s.dir.string()}).code == cli::ok);
    CHECK(io::read_csv(s.path("points.csv")).empty());
    CHECK(io::read_json_file(s.path("sov_report.json"))["status"] == "pass");
}

TEST_CASE("cli flow: casimirs stay put and hamiltonian flows linearize") {
    Scratch s("flow");
    const MatPoly phi = random_matpoly(2, 3, 4);
    const std::string in = s.file("phi.json", io::save_matpoly(phi).dump());
    const CasimirSplit split = casimir_detect(phi, BracketSpec{Poly{1.0}, 0.0});
    REQUIRE(!split.casimirs.empty());
    const CoeffPos c = split.casimirs.front();
    const Outcome cas = sovctl({"flow", "--input", in, "--ham", std::to_string(c.k) + "," + std::to_string(c.l), "--out", s.dir.string()});
    INFO(cas.err);
    REQUIRE(cas.code == cli::ok);
    for (const auto& row : io::read_csv(s.path("flow.csv"))) {
        CHECK(row[1] < 1e-9);
        CHECK(row[2] < 1e-9);
    }

    auto worst_fit = [&](const std::string& t_max) {
        REQUIRE(sovctl({"flow", "--input", in, "--t-max", t_max, "--out", s.dir.string()}).code == cli::ok);
        double w = 0.0;
        for (const auto& row : io::read_csv(s.path("fit.csv"))) w = std::max(w, row[5]);
        return w;
    };
    const double full = worst_fit("0.2");
    const double half = worst_fit("0.1");
    CHECK(full < 1e-5);
    CHECK(half <= full);

    CHECK(sovctl({"flow", "--input", in, "--ham", "9,9", "--out", s.dir.string()}).code == cli::schema_error);
}

TEST_CASE("cli accept flags tightened tolerances without crashing") {
    Scratch s("accept");
    const Outcome tight = sovctl({"accept", "--criteria", "2", "--criteria", "4", "--tol-scale", "1e-6", "--out", s.dir.string()});
    CHECK((tight.code == cli::ok || tight.code == cli::acceptance_failure));
    CHECK(fs::exists(s.path("accept_report.json")));
    CHECK(fs::exists(s.path("accept_summary.txt")));
    const Outcome normal = sovctl({"accept", "--criteria", "2", "--out", s.dir.string()});
    CHECK(normal.code == cli::ok);
    CHECK(sovctl({"accept", "--criteria", "12", "--out", s.dir.string()}).code == cli::schema_error);
}
