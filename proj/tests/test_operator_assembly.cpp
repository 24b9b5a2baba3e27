#include <gtest/gtest.h>

#include "kfgm/errors.hpp"
#include "test_util.hpp"

using namespace kfgm;

TEST(Assembly, DirichletLowestLevel) {
    ModeSet ms = eigenmodes(kt::kinetic("dirichlet", 257));
    EXPECT_NEAR(ms.modes[0].E2, 2.0, 1e-3);
    for (int k = 1; k <= 5; ++k)
        EXPECT_NEAR(ms.modes[k - 1].E / std::sqrt(1.0 + k * k), 1.0, 5e-3);
}

TEST(Assembly, NeumannConstantMode) {
    ModeSet ms = eigenmodes(kt::kinetic("neumann", 129));
    EXPECT_NEAR(ms.modes[0].E2, 1.0, 1e-12);
    const CVec& u = ms.modes[0].u;
    EXPECT_LT((u.array() - u[0]).abs().maxCoeff(), 1e-10);
}

TEST(Assembly, PeriodicDegeneratePair) {
    ModeSet ms = eigenmodes(kt::kinetic("periodic", 257, 2 * kt::kPi));
    EXPECT_NEAR(ms.modes[0].E2, 1.0, 1e-12);
    EXPECT_NEAR(ms.modes[1].E2, 2.0, 1e-3);
    EXPECT_NEAR(ms.modes[1].E2, ms.modes[2].E2, 1e-10);
}

TEST(Assembly, ConstantPotentialShiftsByTwoMcSquaredS0) {
    ScalarPotential p;
    p.profile.s0 = 0.3;
    ModeSet a = eigenmodes(kt::kinetic("robin_mit_plus", 64));
    ModeSet b = eigenmodes(kt::kinetic("robin_mit_plus", 64, kt::kPi, p));
    for (size_t i = 0; i < a.spectrum.size(); ++i)
        EXPECT_NEAR(b.spectrum[i].E2 - a.spectrum[i].E2, 0.6, 1e-10);
}

TEST(Assembly, ZeroKineticHamiltonian) {
    SpMat z(3, 3);
    SpMat h = fv_matrix(z, z, 2.0);
    Eigen::MatrixXcd d(h);
    Eigen::VectorXcd diag(6);
    diag << 2, 2, 2, -2, -2, -2;
    EXPECT_LT((d - Eigen::MatrixXcd(diag.asDiagonal())).norm(), 1e-15);
    EXPECT_EQ(pseudo_hermiticity_defect(h), 0.0);
}

TEST(Assembly, PseudoHermiticityAllCases) {
    for (const auto& e : catalog_cases()) {
        KineticMatrix k = kt::kinetic(e.tag, 64, kt::kPi, kt::quadratic());
        EXPECT_LT(pseudo_hermiticity_defect(assemble_fv_hamiltonian(k).h), 1e-14) << e.tag;
        EXPECT_LT(k.asymmetry(), 1e-14) << e.tag;
    }
}

TEST(Assembly, RobinSpectrumDiagnostics) {
    // everything is reported; nonpositive E^2 never enters the mode list
    for (const char* t : {"robin_mit_plus", "robin_mit_minus", "rotation:0"}) {
        ModeSet ms = eigenmodes(kt::kinetic(t, 128));
        EXPECT_EQ(ms.spectrum.size(), ms.modes.size() + ms.diagnostics.size());
        for (const auto& m : ms.modes) EXPECT_GT(m.E2, 0.0);
        for (double d : ms.diagnostics) EXPECT_LE(d, 0.0);
        EXPECT_LT(ms.max_residual, 1e-12);
    }
}

TEST(Assembly, ModesAreTrapezoidOrthonormal) {
    KineticMatrix k = kt::kinetic("rotation:0.7", 96);
    ModeSet ms = eigenmodes(k);
    RVec w = trapezoid_weights(k.grid);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cd ip = (ms.modes[i].u.conjugate().array() * w.array().cast<cd>() * ms.modes[j].u.array()).sum();
            EXPECT_NEAR(std::abs(ip), i == j ? 1.0 : 0.0, 1e-10);
        }
}

TEST(Assembly, ApplyFullMatchesEigenpairs) {
    KineticMatrix k = kt::kinetic("mixed_a0", 128, kt::kPi, kt::quadratic());
    ModeSet ms = eigenmodes(k);
    for (int i = 0; i < 3; ++i) {
        CVec r = apply_full(k, ms.modes[i].u) - ms.modes[i].E2 * ms.modes[i].u;
        EXPECT_LT(kt::maxabs(r), 1e-9 * ms.modes[i].E2);
    }
}

TEST(Assembly, GhostDerivativesSatisfyTheBc) {
    // Robin (v) with lambda = 1: psi_x(a) = psi(a)... checked through the realization
    for (const char* t : {"robin_mit_plus", "mixed_b0", "neumann"}) {
        BcParams p = params_from_tag(t);
        BcRealization r = m_matrix(p);
        KineticMatrix k = kt::kinetic(t, 200);
        ModeSet ms = eigenmodes(k);
        const CVec& u = ms.modes[1].u;
        BoundaryDerivatives d = ghost_derivatives(k, u);
        EXPECT_LT(std::abs(r.alpha_a * u[0] + r.beta_a * d.a), 1e-12) << t;
        EXPECT_LT(std::abs(r.alpha_b * u[u.size() - 1] + r.beta_b * d.b), 1e-12) << t;
    }
}

TEST(Assembly, SynthesizeExamples) {
    KineticMatrix k = kt::kinetic("dirichlet", 64);
    ModeSet ms = eigenmodes(k);
    KfgState s = synthesize_state(ms, {{0, 1.0, 0.0}}, 0.0, MajoranaKind::plus);
    EXPECT_LT((s.psi - ms.modes[0].u).norm(), 1e-15);
    EXPECT_LT(s.psi_t.norm(), 1e-15);
    const double T = 2 * kt::kPi / ms.modes[0].E;
    KfgState p = synthesize_state(ms, {{0, 1.0, 0.3}}, T, MajoranaKind::none);
    KfgState q = synthesize_state(ms, {{0, 1.0, 0.3}}, 0.0, MajoranaKind::none);
    EXPECT_LT((p.psi - q.psi).norm(), 1e-12);
    EXPECT_THROW(synthesize_state(ms, {{1000, 1.0, 0.0}}, 0.0, MajoranaKind::plus), Error);
}

TEST(Assembly, TwoModeEnergyIntegral) {
    KineticMatrix k = kt::kinetic("neumann", 128);
    ModeSet ms = eigenmodes(k);
    const double A1 = 0.7, A2 = -0.4;
    double expect = (A1 * A1 * ms.modes[1].E2 + A2 * A2 * ms.modes[3].E2) / 2.0;
    for (double t : {0.0, 0.5, 3.3}) {
        KfgState s = synthesize_state(ms, {{1, A1, 0.2}, {3, A2, 1.0}}, t, MajoranaKind::plus);
        GlobalSummary g = global_summary(local_fields(s, k), k);
        EXPECT_NEAR(g.energy_mean, expect, 1e-12 * expect);
    }
}
