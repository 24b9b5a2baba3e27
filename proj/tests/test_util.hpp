#pragma once
#include <random>

#include "kfgm/evolution.hpp"
#include "kfgm/harness/experiments.hpp"
#include "kfgm/observables.hpp"

namespace kt {

constexpr double kPi = 3.141592653589793;

inline kfgm::KineticMatrix kinetic(const std::string& tag, int n = 128, double L = kPi,
                                   const kfgm::ScalarPotential& pot = {}) {
    return kfgm::assemble_kinetic(kfgm::Grid::make(0.0, L, n), pot, 0.0, kfgm::params_from_tag(tag),
                                  kfgm::PhysicalUnits{});
}

inline kfgm::ScalarPotential quadratic(double L = kPi) {
    kfgm::ScalarPotential p;
    p.profile.kind = kfgm::SpatialProfile::Kind::quadratic;
    p.profile.s0 = 0.2;
    p.profile.s2 = 0.1;
    p.profile.x0 = 0.5 * L;
    p.nonneg = true;
    return p;
}

inline double maxabs(const kfgm::CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

inline kfgm::CVec random_cvec(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    kfgm::CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = {d(rng), d(rng)};
    return v;
}

}  // namespace kt
