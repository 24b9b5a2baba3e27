#pragma once
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kfgm/harness/config.hpp"

namespace kfgm {

/// deterministic JSON for a BC report, including the raw condition values
std::string classify_json(const BcParams& p);
std::string run_classify(const ExperimentConfig& cfg);

/// files written, in order
std::vector<std::string> run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_evolve(const ExperimentConfig& cfg, const std::string& out_dir);

/// JSON with the confining clusters, the m0=m3=0 energy slice and the energy-confining set
std::string run_enumerate(long samples, double tol, std::uint64_t seed);

/// indices into modes.modes grouped by equal E^2 (relative 1e-8)
std::vector<std::vector<int>> level_groups(const ModeSet& modes);

/// each chosen level enters as one eigenvector: its degenerate members get random
/// weights and a shared phase
KfgState generic_level_state(const ModeSet& modes, const std::vector<int>& levels,
                             std::mt19937_64& rng, MajoranaKind kind, double t);

/// summary CSV columns, in order
const std::vector<std::string>& summary_columns();
std::vector<double> summary_row(const GlobalSummary& g);

}  // namespace kfgm
