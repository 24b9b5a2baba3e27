#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace kfgm {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;  // worst measured quantity
    double tol = 0.0;
    std::string detail;
};

struct VerifySuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const;
};

struct VerifyOptions {
    long samples = 100000;
    double tol = 1e-6;
    std::uint64_t seed = 20240601;
};

const std::vector<std::string>& suite_names();

/// throws Error(ConfigError) for an unknown suite
VerifySuiteResult run_verify(const std::string& suite, const VerifyOptions& opt = {});

/// one check per acceptance criterion, 1..9
CheckResult criterion_check(int criterion, const VerifyOptions& opt = {});
/// suite that owns the criterion
std::string criterion_suite(int criterion);

std::string suite_json(const VerifySuiteResult& r);

}  // namespace kfgm
