#include "sov/accept/accept.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "checks.hpp"
#include "sov/cli/cli.hpp"
#include "sov/kernel/types.hpp"

namespace sov::accept {

namespace detail {

CheckRecord record(const std::string& name, int criterion, const std::string& inputs, double measured, double tolerance,
                   const std::string& detail) {
    CheckRecord r;
    r.name = name;
    r.criterion = criterion;
    r.digest = fnv1a(inputs);
    r.measured = measured;
    r.tolerance = tolerance;
    r.passed = std::isfinite(measured) && measured <= tolerance;
    r.detail = detail;
    return r;
}

}  // namespace detail

namespace {

using detail::Context;
using detail::Job;
using nlohmann::json;

std::vector<Job> all_jobs() {
    std::vector<Job> jobs = detail::rational_jobs();
    for (auto& j : detail::theta_jobs()) jobs.push_back(std::move(j));
    for (auto& j : detail::elliptic_jobs()) jobs.push_back(std::move(j));
    return jobs;
}

bool selected(const AcceptConfig& cfg, int c) {
    return cfg.criteria.empty() || std::find(cfg.criteria.begin(), cfg.criteria.end(), c) != cfg.criteria.end();
}

struct JobResult {
    std::vector<CheckRecord> records;
    double seconds = 0.0;
};

JobResult run_job(const Job& job, const AcceptConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    JobResult res;
    try {
        res.records = job.run(Context{derive_seed(cfg.seed, job.name), cfg.tol_scale});
    } catch (const std::exception& e) {
        CheckRecord r = detail::record(job.name + ".error", job.criterion, job.name, std::nan(""), 0.0, e.what());
        res.records = {r};
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<JobResult> run_pool(const std::vector<Job>& jobs, const AcceptConfig& cfg) {
    std::vector<JobResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) results[k] = run_job(jobs[k], cfg);
    };
    const int n = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> threads;
    for (int k = 1; k < n; ++k) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    return results;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct MalformedCase {
    std::string name;
    std::vector<std::string> args;
    std::string file;
    std::string contents;
    int expected;
};

std::vector<CheckRecord> robustness(const AcceptConfig& cfg) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("sov_accept_" + std::to_string(cfg.seed) + "_" +
                                                      std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
    fs::create_directories(dir);
    const std::string d = dir.string();
    const std::string lax22 =
        R"({"r":2,"n":1,"coeffs":[[[[1,0],[0.5,0]],[[0.2,0],[0.3,0]]],[[[1,0],[0,0]],[[0,0],[2,0]]]]})";
    const std::vector<MalformedCase> cases{
        {"invalid_json", {"spectral", "--input", "@"}, "bad.json", "{ \"r\": 2, ", cli::schema_error},
        {"missing_n", {"spectral", "--input", "@"}, "missing_n.json", R"({"r":2,"coeffs":[]})", cli::schema_error},
        {"wrong_shape", {"spectral", "--input", "@"}, "shape.json", R"({"r":2,"n":1,"coeffs":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})",
         cli::schema_error},
        {"non_numeric", {"spectral", "--input", "@"}, "text.json",
         R"({"r":1,"n":0,"coeffs":[[[["a",0]]]]})", cli::schema_error},
        {"zero_rank", {"spectral", "--input", "@"}, "rank.json", R"({"r":0,"n":1,"coeffs":[]})", cli::schema_error},
        {"missing_file", {"spectral", "--input", d + "/does_not_exist.json"}, "", "", cli::schema_error},
        {"bracket_missing_b", {"sov", "--input", "@", "--bracket", R"({"a":[[1,0]]})"}, "lax.json", lax22, cli::schema_error},
        {"bracket_degree", {"sov", "--input", "@", "--bracket", R"({"a":[[1,0],[1,0],[1,0],[1,0]],"b":[0,0]})"}, "lax2.json",
         lax22, cli::schema_error},
        {"diagonal_instance", {"spectral", "--input", "@"}, "diag.json",
         R"({"r":2,"n":2,"coeffs":[[[[1,0],[0,0]],[[0,0],[-1,0]]],[[[0.5,0],[0,0]],[[0,0],[0.2,0]]],[[[1,0],[0,0]],[[0,0],[2,0]]]]})",
         cli::non_generic},
        {"degenerate_tau", {"theta", "--tau", "0,0.01", "--r", "3"}, "", "", cli::numeric_domain},
        {"elliptic_coeff_count", {"elliptic", "--input", "@"}, "ell.json",
         R"({"tau":[0,1],"r":2,"divisor":[{"nu":[0.1,0.2],"mult":1}],"coeffs":[[1,0]]})", cli::schema_error},
        {"elliptic_bad_tau", {"elliptic", "--input", "@"}, "ell2.json",
         R"({"tau":[0,-1],"r":2,"divisor":[{"nu":[0.1,0.2]}],"coeffs":[[1,0],[1,0],[1,0],[1,0]]})", cli::schema_error},
        {"unknown_subcommand", {"frobnicate"}, "", "", cli::schema_error},
        {"bad_flag_value", {"theta", "--r", "three"}, "", "", cli::schema_error},
    };
    std::vector<CheckRecord> out;
    for (const MalformedCase& c : cases) {
        std::vector<std::string> args{"sovctl"};
        for (const std::string& a : c.args) args.push_back(a == "@" ? d + "/" + c.file : a);
        if (!c.file.empty()) std::ofstream(d + "/" + c.file) << c.contents;
        args.push_back("--out");
        args.push_back(d);
        std::ostringstream so, se;
        int code = -1;
        try {
            code = cli::run(args, so, se);
        } catch (...) {
            code = -1;
        }
        out.push_back(detail::record("c9.malformed." + c.name, 9, c.name, std::abs(code - c.expected), 0.0,
                                     "exit=" + std::to_string(code) + " expected=" + std::to_string(c.expected)));
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    return out;
}

}  // namespace

std::string fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name) {
    std::uint64_t z = seed ^ std::stoull(fnv1a(name), nullptr, 16);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double runtime_budget(int c) {
    switch (c) {
        case 1: return 60;
        case 2: return 30;
        case 3: return 60;
        case 4: return 120;
        case 5: return 120;
        case 6: return 30;
        case 7: return 30;
        case 8: return 120;
        default: return 0;
    }
}

std::string criterion_title(int c) {
    switch (c) {
        case 1: return "involution";
        case 2: return "Jacobi identity";
        case 3: return "isospectrality";
        case 4: return "canonical divisor brackets";
        case 5: return "linearization";
        case 6: return "genus/count consistency";
        case 7: return "theta relations";
        case 8: return "elliptic engine";
        case 9: return "determinism and robustness";
        default: return "unknown";
    }
}

bool Report::criterion_passed(int c) const {
    bool any = false;
    for (const CheckRecord& r : records)
        if (r.criterion == c) {
            any = true;
            if (!r.passed) return false;
        }
    auto it = timing.find(c);
    if (it != timing.end() && it->second.budget > 0 && it->second.seconds > it->second.budget) return false;
    return any;
}

bool Report::passed() const {
    for (int c = 1; c <= 9; ++c)
        if (selected(config, c) && !criterion_passed(c)) return false;
    return true;
}

json Report::body() const {
    json recs = json::array();
    for (const CheckRecord& r : records)
        recs.push_back(json{{"name", r.name},
                            {"criterion", r.criterion},
                            {"inputs_digest", r.digest},
                            {"measured", std::isfinite(r.measured) ? json(r.measured) : json("nan")},
                            {"tolerance", r.tolerance},
                            {"passed", r.passed},
                            {"detail", r.detail}});
    json crit = json::object();
    for (int c = 1; c <= 9; ++c) {
        if (!selected(config, c)) continue;
        bool ok = true, any = false;
        for (const CheckRecord& r : records)
            if (r.criterion == c) {
                any = true;
                ok = ok && r.passed;
            }
        crit[std::to_string(c)] = json{{"title", criterion_title(c)}, {"checks_passed", ok && any}};
    }
    return json{{"config", json{{"seed", config.seed}, {"tol_scale", config.tol_scale}, {"criteria", config.criteria}}},
                {"criteria", crit},
                {"records", recs}};
}

json Report::to_json() const {
    json t = json::object();
    for (const auto& [c, v] : timing) t[std::to_string(c)] = json{{"seconds", v.seconds}, {"budget", v.budget}};
    return json{{"body", body()},
                {"stamp", json{{"timestamp", timestamp}, {"workers", config.workers}, {"runtimes", t}}},
                {"status", passed() ? "pass" : "fail"}};
}

std::string Report::summary() const {
    std::ostringstream os;
    for (int c = 1; c <= 9; ++c) {
        if (!selected(config, c)) continue;
        os << (criterion_passed(c) ? "PASS" : "FAIL") << "  criterion " << c << "  " << criterion_title(c);
        auto it = timing.find(c);
        if (it != timing.end()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "  (%.1f s", it->second.seconds);
            os << buf;
            if (it->second.budget > 0) os << " of " << it->second.budget << " s";
            os << ")";
        }
        os << "\n";
        for (const CheckRecord& r : records)
            if (r.criterion == c && !r.passed)
                os << "      failed: " << r.name << "  measured " << r.measured << "  tolerance " << r.tolerance << "  "
                   << r.detail << "\n";
    }
    os << (passed() ? "overall: pass" : "overall: FAIL") << "\n";
    return os.str();
}

Report run_acceptance(const AcceptConfig& cfg) {
    Report rep;
    rep.config = cfg;
    rep.timestamp = utc_timestamp();
    std::vector<Job> jobs;
    for (Job& j : all_jobs())
        if (selected(cfg, j.criterion)) jobs.push_back(std::move(j));
    const std::vector<JobResult> results = run_pool(jobs, cfg);
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        for (const CheckRecord& r : results[k].records) rep.records.push_back(r);
        CriterionTiming& t = rep.timing[jobs[k].criterion];
        t.seconds += results[k].seconds;
        t.budget = runtime_budget(jobs[k].criterion);
    }
    if (selected(cfg, 9)) {
        const auto t0 = std::chrono::steady_clock::now();
        // rerun the numeric criteria (or the theta suite alone) and compare report bodies
        AcceptConfig again = cfg;
        again.criteria.clear();
        for (int c = 1; c <= 8; ++c)
            if (selected(cfg, c) && !cfg.criteria.empty()) again.criteria.push_back(c);
        if (cfg.criteria.empty()) again.criteria = {1, 2, 3, 4, 5, 6, 7, 8};
        if (again.criteria.empty()) again.criteria = {7};
        std::vector<CheckRecord> first;
        for (const CheckRecord& r : rep.records)
            if (std::find(again.criteria.begin(), again.criteria.end(), r.criterion) != again.criteria.end()) first.push_back(r);
        std::sort(first.begin(), first.end(), [](const CheckRecord& x, const CheckRecord& y) { return x.name < y.name; });
        Report a;
        a.config = again;
        a.records = first;
        if (first.empty()) a = run_acceptance(again);
        const Report b = run_acceptance(again);
        const std::string da = a.body().dump(), db = b.body().dump();
        std::size_t diff = da.size() == db.size() ? 0 : 1;
        for (std::size_t k = 0; k < std::min(da.size(), db.size()); ++k) diff += da[k] != db[k];
        rep.records.push_back(detail::record("c9.determinism", 9, "criteria rerun with the same seed",
                                             static_cast<double>(diff), 0.0, "differing bytes"));
        for (const CheckRecord& r : robustness(cfg)) rep.records.push_back(r);
        rep.timing[9].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    std::sort(rep.records.begin(), rep.records.end(), [](const CheckRecord& x, const CheckRecord& y) { return x.name < y.name; });
    return rep;
}

}  // namespace sov::accept
