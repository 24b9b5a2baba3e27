#include <gtest/gtest.h>

#include "kfgm/errors.hpp"
#include "test_util.hpp"

using namespace kfgm;

namespace {
struct Fixture {
    KineticMatrix k;
    ModeSet ms;
    explicit Fixture(const std::string& tag, int n = 128, const ScalarPotential& p = {})
        : k(kt::kinetic(tag, n, kt::kPi, p)), ms(eigenmodes(k)) {}
};
}  // namespace

TEST(Observables, RealSingleMode) {
    Fixture f("neumann");
    const Mode& m = f.ms.modes[2];
    KfgState s = synthesize_state(f.ms, {{2, 1.0, 0.0}}, 0.77, MajoranaKind::plus);
    ObservableFields o = local_fields(s, f.k);
    EXPECT_EQ(kt::maxabs(o.rho), 0.0);
    EXPECT_EQ(kt::maxabs(o.j), 0.0);
    CVec expect = (m.E2 / 2.0) * m.u.cwiseAbs2().cast<cd>();
    EXPECT_LT(kt::maxabs(o.rho_E - expect), 1e-9 * m.E2);
    EXPECT_LT(kt::maxabs(o.j_E), 1e-12 * m.E2);
}

TEST(Observables, ComplexModeDensity) {
    Fixture f("dirichlet");
    const Mode& m = f.ms.modes[1];
    KfgState s = synthesize_state(f.ms, {{1, 1.0, 0.0}}, 0.3, MajoranaKind::none);
    ObservableFields o = local_fields(s, f.k);
    CVec expect = m.E * m.u.cwiseAbs2().cast<cd>();
    EXPECT_LT(kt::maxabs(o.rho - expect), 1e-12);
}

TEST(Observables, ZeroState) {
    Fixture f("periodic");
    KfgState z{CVec::Zero(f.k.grid.n), CVec::Zero(f.k.grid.n), 0.0};
    ObservableFields o = local_fields(z, f.k);
    TwoComponentFields t = two_component_fields(kfg_to_fv(z, f.k.units), f.k);
    for (const CVec* v : {&o.rho, &o.j, &o.rho_E, &o.j_E, &o.T00, &t.rho, &t.j, &t.rho_E, &t.j_E})
        EXPECT_EQ(kt::maxabs(*v), 0.0);
    EXPECT_EQ(std::abs(boundary_Ej(o, f.k.bc, f.k.units).value), 0.0);
}

TEST(Observables, DualPathRandomStates) {
    std::mt19937_64 rng(21);
    for (const char* tag : {"robin_mit_minus", "quasiperiodic-", "antiperiodic"}) {
        Fixture f(tag, 96, kt::quadratic());
        KfgState s = generic_level_state(f.ms, {0, 2, 4}, rng, MajoranaKind::none, 0.9);
        ObservableFields o = local_fields(s, f.k);
        TwoComponentFields t = two_component_fields(kfg_to_fv(s, f.k.units), f.k);
        const double sc = kt::maxabs(o.T00);
        EXPECT_LT(kt::maxabs(o.rho - t.rho), 1e-11 * kt::maxabs(o.rho)) << tag;
        EXPECT_LT(kt::maxabs(o.rho_E - t.rho_E), 1e-11 * sc) << tag;
        EXPECT_LT(kt::maxabs(o.j_E - t.j_E), 1e-11 * sc) << tag;
    }
}

TEST(Observables, BoundaryChargeCurrent) {
    std::mt19937_64 rng(4);
    Fixture per("periodic", 200);
    KfgState s = generic_level_state(per.ms, {1, 2}, rng, MajoranaKind::none, 0.2);
    ObservableFields o = local_fields(s, per.k);
    BoundaryPair p = boundary_j(o, per.k.bc, per.k.units);
    EXPECT_GT(std::abs(p.a), 1e-3);
    EXPECT_LT(std::abs(p.a - p.b), 1e-8);

    Fixture dir("dirichlet", 200);
    ObservableFields od = local_fields(generic_level_state(dir.ms, {0, 1}, rng, MajoranaKind::none, 0.2), dir.k);
    BoundaryPair pd = boundary_j(od, dir.k.bc, dir.k.units);
    EXPECT_LT(std::abs(pd.a) + std::abs(pd.b), 1e-12);
}

TEST(Observables, BoundaryEnergyCurrents) {
    std::mt19937_64 rng(5);
    Fixture rob("robin_mit_plus", 256);
    ObservableFields o = local_fields(generic_level_state(rob.ms, {0, 1}, rng, MajoranaKind::plus, 0.4), rob.k);
    BoundaryPair e = boundary_j_E(o, rob.k.bc, rob.k.units);
    EXPECT_LT(std::abs(e.a) + std::abs(e.b), 1e-8);
    BoundaryTilde bt = boundary_jtilde_E(o);
    EXPECT_GT(std::abs(bt.a), 1e-3);
    EXPECT_GT(std::abs(bt.difference), 1e-3);
    EXPECT_LT(std::abs(boundary_Ej(o, rob.k.bc, rob.k.units).value), 1e-12);

    Fixture rot("rotation:0", 256);
    ObservableFields r = local_fields(generic_level_state(rot.ms, {0, 1}, rng, MajoranaKind::plus, 0.4), rot.k);
    BoundaryPair er = boundary_j_E(r, rot.k.bc, rot.k.units);
    EXPECT_GT(std::abs(er.a), 1e-3);
    EXPECT_LT(std::abs(er.a - er.b), 1e-8);

    Fixture per("periodic", 256);
    ObservableFields p = local_fields(generic_level_state(per.ms, {0, 1}, rng, MajoranaKind::plus, 0.4), per.k);
    BoundaryTilde pt = boundary_jtilde_E(p);
    EXPECT_GT(std::abs(pt.a), 1e-3);
    EXPECT_LT(std::abs(pt.difference), 1e-8);

    // a stationary state carries no energy current anywhere
    KfgState single = synthesize_state(per.ms, {{3, 1.0, 0.0}}, 0.4, MajoranaKind::plus);
    EXPECT_LT(kt::maxabs(local_fields(single, per.k).j_E), 1e-12);
}

TEST(Observables, ComplexPeriodicEj) {
    std::mt19937_64 rng(6);
    Fixture per("periodic", 256);
    ObservableFields o = local_fields(generic_level_state(per.ms, {0, 1}, rng, MajoranaKind::none, 0.4), per.k);
    BoundaryEj e = boundary_Ej(o, per.k.bc, per.k.units);
    EXPECT_GT(std::abs(e.direct_a), 1e-3);
    EXPECT_LT(std::abs(e.direct_a - e.direct_b), 1e-8);
}

TEST(Observables, DirichletSummary) {
    std::mt19937_64 rng(7);
    Fixture f("dirichlet", 256, kt::quadratic());
    ObservableFields o = local_fields(generic_level_state(f.ms, {0, 1}, rng, MajoranaKind::minus, 0.1), f.k);
    GlobalSummary g = global_summary(o, f.k);
    EXPECT_EQ(g.surface_term, 0.0);
    EXPECT_GT(g.energy_mean, 0.0);
    EXPECT_NEAR(g.energy_mean, g.T00_integral, 1e-12 * g.T00_integral);
    EXPECT_NEAR(g.J_E.real(), g.J_tilde_E, 1e-12 * g.T00_integral);
    for (double term : g.positivity) EXPECT_GE(term, 0.0);
}

TEST(Observables, RobinSummarySplit) {
    std::mt19937_64 rng(9);
    Fixture f("robin_mit_plus", 256, kt::quadratic());
    ObservableFields o = local_fields(generic_level_state(f.ms, {0, 1}, rng, MajoranaKind::plus, 0.1), f.k);
    GlobalSummary g = global_summary(o, f.k);
    EXPECT_LT(g.current_split_residual, 1e-12 * g.T00_integral);
    EXPECT_GT(std::abs(g.J_E.real() - g.J_tilde_E), 1e-3 * g.T00_integral);
}

TEST(Observables, QuadratureOracles) {
    Grid g = Grid::make(0.0, 1.0, 101);
    CVec f(g.n), h(g.n);
    for (int i = 0; i < g.n; ++i) {
        f[i] = g.x(i) * g.x(i);
        h[i] = std::sin(g.x(i));
    }
    EXPECT_NEAR(trapezoid(f, g.dx).real(), 1.0 / 3.0, 2e-5);
    // int f' h' dx with f = x^2, h = sin x: int 2x cos x = 2(cos1 + sin1 - 1)
    EXPECT_NEAR(edge_gradient_product(f, h, g.dx).real(), 2 * (std::cos(1.0) + std::sin(1.0) - 1), 1e-4);
    // int x^2 cos x dx = 2 cos1 - sin1
    const double exact = 2 * std::cos(1.0) - std::sin(1.0);
    EXPECT_NEAR(edge_average_derivative(f, h).real(), exact, 1e-4);
}

TEST(Observables, WindowValidation) {
    Fixture f("dirichlet", 32);
    KfgState s = synthesize_state(f.ms, {{0, 1.0, 0.0}}, 0.0, MajoranaKind::plus);
    std::vector<KfgState> two{s, s};
    try {
        continuity_residuals(two, f.k, ScalarPotential{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(Observables, ContinuityControlWithoutSource) {
    ScalarPotential p = kt::quadratic();
    p.time.kind = TimeFactor::Kind::sinusoidal;
    p.time.offset = 1.0;
    p.time.amplitude = 0.5;
    p.time.omega = 2.0;
    KineticMatrix k = kt::kinetic("dirichlet", 129, kt::kPi, p);
    ModeSet ms = eigenmodes(k);
    HamiltonianProvider hp(k, p);
    std::mt19937_64 rng(3);
    KfgState st = generic_level_state(ms, {0, 1}, rng, MajoranaKind::plus, 0.0);
    auto states = evolve_states(kfg_to_fv(st, k.units), hp, 0.2 * k.grid.dx, 100);
    std::vector<KfgState> w(states.end() - 3, states.end());
    ContinuityResiduals c = continuity_residuals(w, k, p);
    EXPECT_GT(c.energy_no_source, 10 * c.energy);
    EXPECT_GT(c.tensor_time_no_source, 10 * c.tensor_time);
    EXPECT_GT(c.tensor_space_no_source, 10 * c.tensor_space);
}

TEST(Observables, RealStateDecomposition) {
    KineticMatrix k = kt::kinetic("periodic", 129, kt::kPi, kt::quadratic());
    ModeSet ms = eigenmodes(k);
    HamiltonianProvider hp(k, kt::quadratic());
    std::mt19937_64 rng(13);
    KfgState st = generic_level_state(ms, {1, 2}, rng, MajoranaKind::plus, 0.0);
    auto states = evolve_states(kfg_to_fv(st, k.units), hp, 1e-3, 3);
    DecompositionResiduals d = decomposition_checks({states[1], states[2], states[3]}, k, kt::quadratic());
    EXPECT_LT(d.rho_E_energy_form_exact, 1e-12 * d.scale_rho_E);
    EXPECT_LT(d.j_E_form_exact, 1e-12 * d.scale_j_E);
    EXPECT_LT(d.rho_tilde_real, 1e-13 * d.scale_rho_E);
}
