#include <gtest/gtest.h>

#include "kfgm/errors.hpp"
#include "test_util.hpp"

using namespace kfgm;

TEST(CoreModel, ZeroStateMapsToZero) {
    KfgState s{CVec::Zero(5), CVec::Zero(5), 0.0};
    FvState f = kfg_to_fv(s, PhysicalUnits{});
    EXPECT_EQ(f.psi1.norm(), 0.0);
    EXPECT_EQ(f.psi2.norm(), 0.0);
}

TEST(CoreModel, StaticRealProfileSplitsEvenly) {
    CVec u(3);
    u << 0.3, -1.2, 2.0;
    FvState f = kfg_to_fv({u, CVec::Zero(3), 0.0}, PhysicalUnits{});
    EXPECT_LT((f.psi1 - u / 2.0).norm(), 1e-15);
    EXPECT_LT((f.psi2 - u / 2.0).norm(), 1e-15);
}

TEST(CoreModel, PlaneWaveComponents) {
    const double E = 1.7, t = 0.4;
    const cd ph = std::exp(cd(0, -E * t));
    CVec u(2);
    u << 1.0, -0.5;
    KfgState s{ph * u, cd(0, -E) * ph * u, t};
    FvState f = kfg_to_fv(s, PhysicalUnits{});
    EXPECT_LT((f.psi1 - (1 + E) / 2 * ph * u).norm(), 1e-14);
    EXPECT_LT((f.psi2 - (1 - E) / 2 * ph * u).norm(), 1e-14);
}

TEST(CoreModel, UpperComponentOnly) {
    PhysicalUnits un{1.0, 2.0, 0.5, 1.0};
    CVec u(2);
    u << 1.0, 2.0;
    KfgState s = fv_to_kfg({u, CVec::Zero(2), 0.0}, un);
    EXPECT_LT((s.psi - u).norm(), 1e-15);
    EXPECT_LT((s.psi_t - cd(0, -un.mc2() / un.hbar) * u).norm(), 1e-14);
}

TEST(CoreModel, RoundTripRandom) {
    std::mt19937_64 rng(1);
    PhysicalUnits un{0.7, 3.0, 1.3, 1.0};
    for (int k = 0; k < 20; ++k) {
        KfgState s{kt::random_cvec(16, rng), kt::random_cvec(16, rng), 0.1 * k};
        KfgState r = fv_to_kfg(kfg_to_fv(s, un), un);
        EXPECT_LT((r.psi - s.psi).norm() / s.psi.norm(), 1e-14);
        EXPECT_LT((r.psi_t - s.psi_t).norm() / s.psi_t.norm(), 1e-14);
    }
}

TEST(CoreModel, MajoranaProjection) {
    CVec u(3);
    u << 1.0, 0.2, -0.7;
    KfgState s{cd(1, 2) * u, cd(0.5, -1) * u, 0.0};
    KfgState p = majorana_project(s, MajoranaKind::plus);
    KfgState m = majorana_project(s, MajoranaKind::minus);
    EXPECT_LT((p.psi - u).norm(), 1e-15);
    EXPECT_LT((m.psi - cd(0, 2) * u).norm(), 1e-15);
    EXPECT_EQ(majorana_tag_defect(p, MajoranaKind::plus), 0.0);
    KfgState pp = majorana_project(p, MajoranaKind::plus);
    EXPECT_EQ((pp.psi - p.psi).norm(), 0.0);
    // plus in KFG form is Psi = tau1 Psi* in the two-component form
    EXPECT_LT(majorana_fv_defect(kfg_to_fv(p, PhysicalUnits{}), MajoranaKind::plus), 1e-15);
    EXPECT_LT(majorana_fv_defect(kfg_to_fv(m, PhysicalUnits{}), MajoranaKind::minus), 1e-15);
}

TEST(CoreModel, InvalidUnitsAndPotential) {
    PhysicalUnits u{0.0, 1.0, 1.0, 1.0};
    EXPECT_THROW(u.validate(), Error);
    ScalarPotential p;
    p.profile.s0 = -1.0;
    p.nonneg = true;
    EXPECT_THROW(p.validate(Grid::make(0, 1, 8), 0.0), Error);
    EXPECT_THROW(Grid::make(0, 1, 2), Error);
}

TEST(CoreModel, PotentialSamplingAndDerivatives) {
    ScalarPotential p;
    p.profile.kind = SpatialProfile::Kind::quadratic;
    p.profile.s0 = 1.0;
    p.profile.s2 = 2.0;
    p.profile.x0 = 0.5;
    p.time.kind = TimeFactor::Kind::sinusoidal;
    p.time.offset = 1.0;
    p.time.amplitude = 0.5;
    p.time.omega = 3.0;
    const double x = 0.8, t = 0.3, h = 1e-6;
    double fdx = (p.value(x + h, t) - p.value(x - h, t)) / (2 * h);
    double fdt = (p.value(x, t + h) - p.value(x, t - h)) / (2 * h);
    Grid g = Grid::make(0.0, 1.6, 9);
    EXPECT_NEAR(p.sample_dx(g, t)[4], fdx, 1e-7);
    EXPECT_NEAR(p.sample_dt(g, t)[4], fdt, 1e-7);
}
