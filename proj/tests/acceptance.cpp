// one line per acceptance criterion; exit status is nonzero if any fails
#include <chrono>
#include <cstdio>
#include <future>
#include <vector>

#include "kfgm/harness/verify.hpp"

int main() {
    kfgm::VerifyOptions opt;
    std::vector<std::future<kfgm::CheckResult>> jobs;
    // criterion 1 carries its own wall-clock limit, so it runs alone first
    kfgm::CheckResult first = kfgm::criterion_check(1, opt);
    for (int c = 2; c <= 9; ++c)
        jobs.push_back(std::async(std::launch::async, [c, &opt] { return kfgm::criterion_check(c, opt); }));
    std::vector<kfgm::CheckResult> results{first};
    for (auto& j : jobs) results.push_back(j.get());

    int failed = 0;
    for (size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::printf("criterion %zu: %s  %s  value=%.3g tol=%.3g  %s\n", i + 1, r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.value, r.tol, r.detail.c_str());
        failed += !r.pass;
    }
    std::printf("%d/9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
