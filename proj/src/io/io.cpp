#include "sov/io/io.hpp"

#include <cstdio>
#include <sstream>

namespace sov::io {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::schema, "field '" + field + "': " + what);
}

const json& member(const json& obj, const std::string& name, const std::string& path = "") {
    const std::string full = path.empty() ? name : path + "." + name;
    if (!obj.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) bad(full, "missing");
    return *it;
}

std::size_t positive_int(const json& j, const std::string& field, std::size_t min) {
    if (!j.is_number_integer()) bad(field, "expected an integer");
    const long long v = j.get<long long>();
    if (v < static_cast<long long>(min)) bad(field, "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

const json& array_of(const json& j, const std::string& field, std::size_t size) {
    if (!j.is_array()) bad(field, "expected an array");
    if (size != static_cast<std::size_t>(-1) && j.size() != size)
        bad(field, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
    return j;
}

constexpr std::size_t kAny = static_cast<std::size_t>(-1);

}  // namespace

json to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) bad(field, "expected [re, im]");
    const cplx v(j[0].get<double>(), j[1].get<double>());
    if (!is_finite(v)) bad(field, "non-finite value");
    return v;
}

rational::MatPoly load_matpoly(const json& doc) {
    const std::size_t r = positive_int(member(doc, "r"), "r", 1);
    const std::size_t n = positive_int(member(doc, "n"), "n", 0);
    if (r > 16 || n > 64) bad(r > 16 ? "r" : "n", "too large");
    const json& coeffs = array_of(member(doc, "coeffs"), "coeffs", n + 1);
    rational::MatPoly phi(r, n);
    for (std::size_t k = 0; k <= n; ++k) {
        const std::string fk = "coeffs[" + std::to_string(k) + "]";
        const json& m = array_of(coeffs[k], fk, r);
        for (std::size_t i = 0; i < r; ++i) {
            const std::string fi = fk + "[" + std::to_string(i) + "]";
            const json& row = array_of(m[i], fi, r);
            for (std::size_t j = 0; j < r; ++j) phi.coeffs[k](i, j) = complex_from(row[j], fi + "[" + std::to_string(j) + "]");
        }
    }
    phi.validate();
    return phi;
}

json save_matpoly(const rational::MatPoly& phi) {
    json coeffs = json::array();
    for (const CMatrix& m : phi.coeffs) {
        json mat = json::array();
        for (std::size_t i = 0; i < phi.r; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < phi.r; ++j) row.push_back(to_json(m(i, j)));
            mat.push_back(row);
        }
        coeffs.push_back(mat);
    }
    return json{{"r", phi.r}, {"n", phi.n}, {"coeffs", coeffs}};
}

rational::BracketSpec load_bracket(const json& doc) {
    const json& a = array_of(member(doc, "a"), "a", kAny);
    CVector ac;
    for (std::size_t k = 0; k < a.size(); ++k) ac.push_back(complex_from(a[k], "a[" + std::to_string(k) + "]"));
    return rational::BracketSpec{Poly(ac), complex_from(member(doc, "b"), "b")};
}

json save_bracket(const rational::BracketSpec& spec) {
    json a = json::array();
    for (cplx c : spec.a.coeffs()) a.push_back(to_json(c));
    return json{{"a", a}, {"b", to_json(spec.b)}};
}

json save_curve(const rational::SpectralCurve& c, const rational::GenusInfo& g) {
    json P = json::array();
    for (int k = 0; k <= c.P.deg_xi(); ++k) {
        json row = json::array();
        for (int l = 0; l <= c.P.deg_z(); ++l) row.push_back(to_json(c.P.coeff(k, l)));
        P.push_back(row);
    }
    auto positions = [](const std::vector<rational::CoeffPos>& v) {
        json out = json::array();
        for (const auto& p : v) out.push_back(json::array({p.k, p.l}));
        return out;
    };
    return json{{"P", P},
                {"genus", g.genus},
                {"branch_count", g.branch_count},
                {"hamiltonians", positions(c.hamiltonians)},
                {"casimirs", positions(c.casimirs)}};
}

BiPoly load_curve_poly(const json& doc) {
    const json& P = array_of(member(doc, "P"), "P", kAny);
    std::vector<Poly> rows;
    for (std::size_t k = 0; k < P.size(); ++k) {
        const std::string fk = "P[" + std::to_string(k) + "]";
        const json& row = array_of(P[k], fk, kAny);
        CVector c;
        for (std::size_t l = 0; l < row.size(); ++l) c.push_back(complex_from(row[l], fk + "[" + std::to_string(l) + "]"));
        rows.emplace_back(c);
    }
    return BiPoly(rows);
}

EllipticDoc load_elliptic(const json& doc) {
    const cplx tau = complex_from(member(doc, "tau"), "tau");
    if (tau.imag() <= 0.0) bad("tau", "Im tau must be positive");
    const std::size_t r = positive_int(member(doc, "r"), "r", 1);
    if (r > 8) bad("r", "too large");
    EllipticDoc out;
    out.params = elliptic::ThetaParams(tau, static_cast<int>(r));
    const json& div = array_of(member(doc, "divisor"), "divisor", kAny);
    if (div.empty()) bad("divisor", "must not be empty");
    for (std::size_t k = 0; k < div.size(); ++k) {
        const std::string fk = "divisor[" + std::to_string(k) + "]";
        const cplx nu = complex_from(member(div[k], "nu", fk), fk + ".nu");
        int mult = 1;
        if (div[k].contains("mult")) mult = static_cast<int>(positive_int(div[k]["mult"], fk + ".mult", 1));
        out.divisor.parts.push_back({nu, mult});
    }
    const std::size_t n = static_cast<std::size_t>(elliptic::normalize(out.divisor, out.params).degree());
    const json& coeffs = array_of(member(doc, "coeffs"), "coeffs", r * r * n);
    for (std::size_t k = 0; k < coeffs.size(); ++k) out.coeffs.push_back(complex_from(coeffs[k], "coeffs[" + std::to_string(k) + "]"));
    out.z0 = doc.contains("z0") ? complex_from(doc["z0"], "z0") : cplx{};
    return out;
}

json save_elliptic(const EllipticDoc& d) {
    json div = json::array();
    for (const auto& p : d.divisor.parts) div.push_back(json{{"nu", to_json(p.nu)}, {"mult", p.mult}});
    json coeffs = json::array();
    for (cplx c : d.coeffs) coeffs.push_back(to_json(c));
    return json{{"tau", to_json(d.params.tau)}, {"r", d.params.r}, {"divisor", div}, {"coeffs", coeffs}, {"z0", to_json(d.z0)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::schema, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::schema, path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::schema, "cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path), cols_(header.size()) {
    if (!out_) throw Error(ErrorKind::schema, "cannot write '" + path + "'");
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != cols_) throw Error(ErrorKind::internal, "csv row width mismatch");
    for (std::size_t k = 0; k < values.size(); ++k) out_ << (k ? "," : "") << format_double(values[k]);
    out_ << "\n";
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::schema, "cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            first = false;
            if (header)
                while (std::getline(ss, cell, ',')) header->push_back(cell);
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sov::io
