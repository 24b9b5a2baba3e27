#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "kfgm/bc_family.hpp"
#include "kfgm/core_model.hpp"
#include "kfgm/evolution.hpp"
#include "kfgm/operator_assembly.hpp"

namespace kfgm {

struct StateSpec {
    enum class Kind { modes, random_modes, tabulated };
    Kind kind = Kind::modes;
    std::vector<ModeCoefficient> modes{{0, 1.0, 0.0}};
    int random_count = 2;      // random_modes: how many of the lowest modes get weights
    CVec psi, psi_t;           // tabulated
    double t0 = 0.0;
};

struct ExperimentConfig {
    PhysicalUnits units;
    double a = 0.0;
    double b = 3.141592653589793;
    int n = 128;
    ScalarPotential potential;
    std::string bc_tag;  // empty when raw params were given
    BcParams bc;
    MajoranaKind kind = MajoranaKind::plus;
    StateSpec state;
    EvolutionConfig evolution;
    std::string out_dir = ".";
    std::string prefix = "run";
    std::uint64_t seed = 0;
    std::string canonical;  // normalized JSON text, input to the hash

    Grid grid() const { return Grid::make(a, b, n); }
};

/// throws Error(ConfigError) on malformed input, unknown tags or invalid parameters
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// 64-bit FNV-1a, lowercase hex
std::string fnv1a_hex(const std::string& data);
std::string config_hash(const ExperimentConfig& cfg);

const char* kind_name(MajoranaKind k);

/// initial state for the config (modes resolved on the given mode set)
KfgState initial_state(const ExperimentConfig& cfg, const ModeSet& modes);

}  // namespace kfgm
