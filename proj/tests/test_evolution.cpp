#include <gtest/gtest.h>

#include "kfgm/errors.hpp"
#include "test_util.hpp"

using namespace kfgm;

TEST(Evolution, ConfigValidation) {
    EXPECT_THROW((EvolutionConfig{1e-3, 0, 1}.validate()), Error);
    EXPECT_THROW((EvolutionConfig{0.0, 1, 1}.validate()), Error);
    EXPECT_THROW((EvolutionConfig{1e-3, 1, 0}.validate()), Error);
}

TEST(Evolution, CayleyPhaseOnStationaryMode) {
    // an eigenvector of h with eigenvalue E picks up (1 - i k E)/(1 + i k E), k = dt/2hbar
    KineticMatrix k = kt::kinetic("mixed_b0", 64, kt::kPi, kt::quadratic());
    ModeSet ms = eigenmodes(k);
    DiscreteHamiltonian h = assemble_fv_hamiltonian(k);
    const double dt = 0.05, kap = dt / 2;
    for (int i : {0, 3}) {
        FvState s = kfg_to_fv(synthesize_state(ms, {{i, 1.0, 0.0}}, 0.0, MajoranaKind::none), k.units);
        CVec y = h.to_y(s);
        CVec r = CayleyPropagator(h, dt).apply(y);
        const double E = ms.modes[i].E;
        cd expect = (1.0 - cd(0, kap * E)) / (1.0 + cd(0, kap * E));
        EXPECT_LT((r - expect * y).norm() / y.norm(), 1e-12);
    }
}

TEST(Evolution, OnePeriodReturn) {
    KineticMatrix k = kt::kinetic("dirichlet", 128);
    ModeSet ms = eigenmodes(k);
    DiscreteHamiltonian h = assemble_fv_hamiltonian(k);
    FvState s = kfg_to_fv(synthesize_state(ms, {{2, 1.0, 0.0}}, 0.0, MajoranaKind::none), k.units);
    const double T = 2 * kt::kPi / ms.modes[2].E;
    FvState r = s;
    for (int i = 0; i < 1000; ++i) r = step_cayley(r, h, T / 1000);
    double err = std::sqrt((r.psi1 - s.psi1).squaredNorm() + (r.psi2 - s.psi2).squaredNorm()) /
                 std::sqrt(s.psi1.squaredNorm() + s.psi2.squaredNorm());
    EXPECT_LT(err, 1e-4);
}

TEST(Evolution, SnapshotCounts) {
    KineticMatrix k = kt::kinetic("periodic", 32);
    HamiltonianProvider hp(k, ScalarPotential{});
    ModeSet ms = eigenmodes(k);
    FvState s = kfg_to_fv(synthesize_state(ms, {{1, 1.0, 0.0}}, 0.0, MajoranaKind::plus), k.units);
    EXPECT_EQ(evolve(s, hp, {1e-2, 1, 1}).snapshots.size(), 2u);
    Trajectory t = evolve(s, hp, {1e-2, 10, 4});
    ASSERT_EQ(t.snapshots.size(), 4u);  // 0, 4, 8, 10
    EXPECT_NEAR(t.snapshots.back().t, 0.1, 1e-15);
    EXPECT_EQ(evolve_states(s, hp, 1e-2, 7).size(), 8u);
}

TEST(Evolution, ConservationProperty) {
    std::mt19937_64 rng(8);
    for (const char* tag : {"robin_mit_minus", "rotation:0.7", "quasimixed-", "neumann"}) {
        KineticMatrix k = kt::kinetic(tag, 64, kt::kPi, kt::quadratic());
        ModeSet ms = eigenmodes(k);
        HamiltonianProvider hp(k, kt::quadratic());
        KfgState st = generic_level_state(ms, {0, 1, 2}, rng, MajoranaKind::none, 0.0);
        Trajectory t = evolve(kfg_to_fv(st, k.units), hp, {2e-3, 2000, 2000});
        const auto& a = t.snapshots.front().summary;
        const auto& b = t.snapshots.back().summary;
        EXPECT_LT(std::abs(b.norm - a.norm) / std::abs(a.norm), 1e-12) << tag;
        EXPECT_LT(std::abs(b.energy_integral - a.energy_integral) / std::abs(a.energy_integral), 1e-12) << tag;
    }
}

TEST(Evolution, TimeDependentEnergyBalance) {
    // d/dt int rho_E = int (dS/dt)|psi|^2, up to O(dt^2 + dx^2)
    ScalarPotential p = kt::quadratic();
    p.time.kind = TimeFactor::Kind::sinusoidal;
    p.time.offset = 1.0;
    p.time.amplitude = 0.5;
    p.time.omega = 2.0;
    KineticMatrix k = kt::kinetic("dirichlet", 129, kt::kPi, p);
    ModeSet ms = eigenmodes(k);
    HamiltonianProvider hp(k, p);
    std::mt19937_64 rng(2);
    KfgState st = generic_level_state(ms, {0, 1}, rng, MajoranaKind::plus, 0.0);
    const double dt = 1e-3;
    auto states = evolve_states(kfg_to_fv(st, k.units), hp, dt, 400);
    auto energy = [&](int i) {
        KineticMatrix ki = hp.kinetic_at(states[i].t);
        return global_summary(local_fields(states[i], ki), ki).energy_mean;
    };
    const int m = 200;
    double lhs = (energy(m + 1) - energy(m - 1)) / (2 * dt);
    RVec sdt = p.sample_dt(k.grid, states[m].t);
    CVec w = (sdt.array() * states[m].psi.cwiseAbs2().array()).cast<cd>();
    double rhs = trapezoid(w, k.grid.dx).real();
    EXPECT_GT(std::abs(rhs), 1e-2);
    EXPECT_NEAR(lhs, rhs, 1e-3 * std::abs(rhs));
}

TEST(Evolution, MajoranaPreservation) {
    KineticMatrix k = kt::kinetic("robin_mit_plus", 64, kt::kPi, kt::quadratic());
    ModeSet ms = eigenmodes(k);
    DiscreteHamiltonian h = assemble_fv_hamiltonian(k);
    for (MajoranaKind kind : {MajoranaKind::plus, MajoranaKind::minus}) {
        FvState s = kfg_to_fv(synthesize_state(ms, {{0, 1.0, 0.0}}, 0.0, kind), k.units);
        auto r = check_majorana_preservation(s, h, 1e-2, 1000);
        EXPECT_EQ(r.kind, kind);
        EXPECT_LE(r.max_deviation, 1e-12);
    }
    FvState c = kfg_to_fv(synthesize_state(ms, {{0, 1.0, 0.4}}, 0.0, MajoranaKind::none), k.units);
    auto r = check_majorana_preservation(c, h, 1e-2, 10);
    EXPECT_EQ(r.kind, MajoranaKind::none);
    EXPECT_GT(r.max_deviation, 0.1);
}

TEST(Evolution, ComplexClosureHasNoRealShortcut) {
    // m2 != 0: a real initial state must pick up imaginary parts
    KineticMatrix k = kt::kinetic("quasimixed+", 64);
    EXPECT_FALSE(k.is_real());
    ModeSet ms = eigenmodes(k);
    HamiltonianProvider hp(k, ScalarPotential{});
    FvState s = kfg_to_fv(synthesize_state(ms, {{0, 1.0, 0.0}, {1, 1.0, 0.0}}, 0.0, MajoranaKind::none), k.units);
    Trajectory t = evolve(s, hp, {1e-2, 100, 100});
    EXPECT_LT(std::abs(t.snapshots.back().summary.norm - t.snapshots.front().summary.norm), 1e-12);
}
