#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sov/accept/accept.hpp"

namespace sov::accept::detail {

struct Context {
    std::uint64_t seed;  // already derived for the job
    double tol_scale;
};

struct Job {
    std::string name;
    int criterion;
    std::function<std::vector<CheckRecord>(const Context&)> run;
};

CheckRecord record(const std::string& name, int criterion, const std::string& inputs, double measured, double tolerance,
                   const std::string& detail = "");

std::vector<Job> rational_jobs();
std::vector<Job> theta_jobs();
std::vector<Job> elliptic_jobs();

}  // namespace sov::accept::detail
