#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "sov/accept/accept.hpp"

int main(int argc, char** argv) {
    sov::accept::AcceptConfig cfg;
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
    const sov::accept::Report rep = sov::accept::run_acceptance(cfg);

    bool all = true;
    for (int c = 1; c <= 9; ++c) {
        const bool ok = rep.criterion_passed(c);
        all = all && ok;
        int total = 0, failed = 0;
        double worst = -1.0;
        std::string worst_name;
        for (const auto& r : rep.records) {
            if (r.criterion != c) continue;
            ++total;
            if (!r.passed) ++failed;
            const double ratio = r.tolerance > 0 ? r.measured / r.tolerance : (r.measured == 0 ? 0.0 : 1e300);
            if (!(ratio <= worst)) {
                worst = ratio;
                worst_name = r.name;
            }
        }
        const auto t = rep.timing.count(c) ? rep.timing.at(c) : sov::accept::CriterionTiming{};
        std::printf("%s criterion %d %-28s checks %d/%d  worst %.2e of tol (%s)  %.1fs\n", ok ? "PASS" : "FAIL", c,
                    sov::accept::criterion_title(c).c_str(), total - failed, total, worst, worst_name.c_str(), t.seconds);
        if (!ok)
            for (const auto& r : rep.records)
                if (r.criterion == c && !r.passed)
                    std::printf("    %s measured %.3e tol %.3e %s\n", r.name.c_str(), r.measured, r.tolerance, r.detail.c_str());
    }
    if (const char* dir = std::getenv("SOV_OUT_DIR")) {
        std::filesystem::create_directories(dir);
        std::ofstream(std::string(dir) + "/accept_report.json") << rep.to_json().dump(2);
    }
    std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
    return all ? 0 : 1;
}
