#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sov/elliptic/elliptic.hpp"
#include "sov/rational/bracket.hpp"
#include "sov/rational/matpoly.hpp"
#include "sov/rational/spectral.hpp"

namespace sov::io {

using nlohmann::json;

/// Complex numbers are [re, im] pairs.
json to_json(cplx v);
cplx complex_from(const json& j, const std::string& field);

/// Lax document: {"r": R, "n": N, "coeffs": [N+1 matrices of R rows of R [re, im]]}.
rational::MatPoly load_matpoly(const json& doc);
json save_matpoly(const rational::MatPoly& phi);

/// {"a": [[re, im], ...] ascending, "b": [re, im]}.
rational::BracketSpec load_bracket(const json& doc);
json save_bracket(const rational::BracketSpec& spec);

/// {"r", "n", "P": [[[re, im] per z-power] per xi-power], "genus", "branch_count",
///  "hamiltonians": [[k, l]], "casimirs": [[k, l]]}
json save_curve(const rational::SpectralCurve& c, const rational::GenusInfo& g);
BiPoly load_curve_poly(const json& doc);

struct EllipticDoc {
    elliptic::ThetaParams params;
    elliptic::EllipticDivisor divisor;
    CVector coeffs;
    cplx z0;
};
/// {"tau": [re, im], "r": R, "divisor": [{"nu": [re, im], "mult": m}], "coeffs": [[re, im]], "z0": [re, im]}
EllipticDoc load_elliptic(const json& doc);
json save_elliptic(const EllipticDoc& d);

/// Parses a file; syntax errors and missing files are schema errors.
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& doc);

/// 17 significant digits.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);

private:
    std::ofstream out_;
    std::size_t cols_;
};

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header = nullptr);

}  // namespace sov::io
