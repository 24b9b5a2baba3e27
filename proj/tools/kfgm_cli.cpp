#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kfgm/errors.hpp"
#include "kfgm/harness/config.hpp"
#include "kfgm/harness/experiments.hpp"
#include "kfgm/harness/report.hpp"
#include "kfgm/harness/verify.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;

kfgm::ExperimentConfig config_from(const std::string& path, const std::string& bc) {
    if (!path.empty()) return kfgm::load_config(path);
    if (!bc.empty()) return kfgm::parse_config("{\"bc\": \"" + bc + "\"}");
    throw kfgm::Error(kfgm::ErrorCode::ConfigError, "--config or --bc is required");
}

void emit(const std::string& text, const std::string& out_dir, const std::string& name) {
    std::cout << text;
    if (!out_dir.empty()) kfgm::write_text((std::filesystem::path(out_dir) / name).string(), text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Klein-Gordon boundary condition toolkit"};
    app.require_subcommand(1);

    std::string config, out, bc, suite = "all";
    long samples = 100000;
    double tol = 1e-6;
    std::uint64_t seed = 20240601;

    auto* classify = app.add_subcommand("classify", "classify a boundary condition, JSON on stdout");
    classify->add_option("--config", config, "experiment config (JSON)");
    classify->add_option("--bc", bc, "catalog tag, used when no config is given");
    classify->add_option("--out", out, "also write <out>/classify.json");

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues E^2 of the discrete operator");
    spectrum->add_option("--config", config)->required();
    spectrum->add_option("--out", out, "output directory (default: config output.dir)");

    auto* evolve = app.add_subcommand("evolve", "Cayley evolution with trajectory/summary/fields CSV");
    evolve->add_option("--config", config)->required();
    evolve->add_option("--out", out, "output directory (default: config output.dir)");

    auto* enumerate = app.add_subcommand("enumerate-confining", "sample the BC family for confining solutions");
    enumerate->add_option("--samples", samples)->check(CLI::PositiveNumber);
    enumerate->add_option("--tol", tol)->check(CLI::PositiveNumber);
    enumerate->add_option("--seed", seed);
    enumerate->add_option("--out", out, "also write <out>/enumerate.json");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "suite name or 'all'");
    verify->add_option("--samples", samples, "samples for the confining search")->check(CLI::PositiveNumber);
    verify->add_option("--tol", tol)->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed);
    verify->add_option("--out", out, "also write <out>/verify_<suite>.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }

    try {
        if (*classify) {
            emit(kfgm::run_classify(config_from(config, bc)), out, "classify.json");
            return kPass;
        }
        if (*spectrum || *evolve) {
            kfgm::ExperimentConfig cfg = kfgm::load_config(config);
            const std::string dir = out.empty() ? cfg.out_dir : out;
            auto files = *spectrum ? kfgm::run_spectrum(cfg, dir) : kfgm::run_evolve(cfg, dir);
            for (const auto& f : files) std::cout << f << "\n";
            return kPass;
        }
        if (*enumerate) {
            emit(kfgm::run_enumerate(samples, tol, seed), out, "enumerate.json");
            return kPass;
        }
        if (*verify) {
            kfgm::VerifyOptions opt{samples, tol, seed};
            std::vector<std::string> suites;
            if (suite == "all") suites = kfgm::suite_names();
            else suites.push_back(suite);
            bool ok = true;
            for (const auto& s : suites) {
                kfgm::VerifySuiteResult r = kfgm::run_verify(s, opt);
                for (const auto& c : r.checks)
                    std::fprintf(stderr, "%-4s %-48s value=%-10.3g tol=%-8.3g %s\n",
                                 c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tol,
                                 c.detail.c_str());
                emit(kfgm::suite_json(r), out, "verify_" + s + ".json");
                ok = ok && r.pass();
            }
            return ok ? kPass : kFail;
        }
    } catch (const kfgm::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return e.code() == kfgm::ErrorCode::ConfigError ? kConfig : kFail;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFail;
    }
    return kFail;
}
