#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace sov::accept {

struct CheckRecord {
    std::string name;
    int criterion = 0;
    std::string digest;  // FNV-1a of the input description
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct AcceptConfig {
    std::uint64_t seed = 20240611;
    double tol_scale = 1.0;
    int workers = 1;
    std::vector<int> criteria;  // empty: all
};

struct CriterionTiming {
    double seconds = 0.0;
    double budget = 0.0;
};

struct Report {
    AcceptConfig config;
    std::vector<CheckRecord> records;  // sorted by name
    std::map<int, CriterionTiming> timing;
    std::string timestamp;

    bool criterion_passed(int c) const;
    bool passed() const;
    /// Deterministic part: config echo, records and statuses.
    nlohmann::json body() const;
    /// body plus the environment stamp (timestamp, runtimes).
    nlohmann::json to_json() const;
    std::string summary() const;
};

/// Runtime budget in seconds for each criterion.
double runtime_budget(int criterion);
std::string criterion_title(int criterion);

Report run_acceptance(const AcceptConfig& cfg);

std::string fnv1a(const std::string& s);

/// Seed for a named check, derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& name);

}  // namespace sov::accept
