#include <gtest/gtest.h>

#include <Eigen/LU>
#include <set>

#include "kfgm/errors.hpp"
#include "test_util.hpp"

using namespace kfgm;

namespace {
BcParams P(double m0, double m1, double m2, double m3, double mu) {
    BcParams p;
    p.m0 = m0;
    p.m1 = m1;
    p.m2 = m2;
    p.m3 = m3;
    p.mu = mu;
    return p;
}
}  // namespace

TEST(BcFamily, U2Examples) {
    EXPECT_LT((u2_matrix(P(-1, 0, 0, 0, 0)) + Eigen::Matrix2cd::Identity()).norm(), 1e-15);
    EXPECT_LT((u2_matrix(P(1, 0, 0, 0, 0)) - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
    Eigen::Matrix2cd swap;
    swap << 0, 1, 1, 0;
    EXPECT_LT((u2_matrix(P(0, 1, 0, 0, kHalfPi)) - swap).norm(), 1e-15);
}

TEST(BcFamily, U2IsUnitaryForRandomParams) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    std::uniform_real_distribution<double> mu(0.0, kt::kPi);
    for (int k = 0; k < 200; ++k) {
        Eigen::Vector4d m(d(rng), d(rng), d(rng), d(rng));
        m.normalize();
        Eigen::Matrix2cd U = u2_matrix(P(m[0], m[1], m[2], m[3], mu(rng)));
        EXPECT_LT((U.adjoint() * U - Eigen::Matrix2cd::Identity()).norm(), 1e-14);
    }
}

TEST(BcFamily, NormalizeMu) {
    BcParams p = normalize_mu(P(0.6, 0, 0, 0.8, 4.0));
    EXPECT_NEAR(p.mu, 4.0 - kt::kPi, 1e-15);
    EXPECT_DOUBLE_EQ(p.m0, -0.6);
    // U = e^{i mu} A(m) with A linear, so U(m, 4) = -U(m, 4 - pi)
    Eigen::Matrix2cd ref = -u2_matrix(P(0.6, 0, 0, 0.8, 4.0 - kt::kPi));
    EXPECT_LT((u2_matrix(p) - ref).norm(), 1e-14);
}

TEST(BcFamily, MajoranaRestrict) {
    BcParams d = params_from_tag("dirichlet");
    BcParams r = majorana_restrict(d);
    EXPECT_EQ(r.m0, d.m0);
    BcParams q = majorana_restrict(P(0.6, 0, 0.8, 0, 0));
    EXPECT_DOUBLE_EQ(q.m0, 1.0);
    EXPECT_EQ(q.m2, 0.0);
    try {
        majorana_restrict(params_from_tag("quasiperiodic+"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotMajoranaCompatible);
    }
}

TEST(BcFamily, MMatrixExamples) {
    BcRealization per = m_matrix(params_from_tag("periodic"));
    ASSERT_TRUE(per.coupled());
    EXPECT_LT((per.M - Eigen::Matrix2d::Identity()).norm(), 1e-15);
    BcRealization anti = m_matrix(params_from_tag("antiperiodic"));
    EXPECT_LT((anti.M + Eigen::Matrix2d::Identity()).norm(), 1e-15);
    BcRealization dir = m_matrix(params_from_tag("dirichlet"));
    ASSERT_FALSE(dir.coupled());
    EXPECT_NEAR(std::abs(dir.alpha_a), 1.0, 1e-15);
    EXPECT_NEAR(dir.beta_a, 0.0, 1e-15);
    EXPECT_NEAR(std::abs(dir.alpha_b), 1.0, 1e-15);
    EXPECT_NEAR(dir.beta_b, 0.0, 1e-15);
}

TEST(BcFamily, CoupledMHasUnitDeterminant) {
    for (double mu : {0.0, 0.3, 1.1, 2.9})
        for (const char* pre : {"rotation:", "rotation-:"}) {
            BcRealization r = m_matrix(params_from_tag(pre + format_mu(mu)));
            EXPECT_NEAR(r.M.determinant(), 1.0, 1e-14);
        }
}

TEST(BcFamily, ConditionExamples) {
    EXPECT_TRUE(check_confining_conditions(params_from_tag("dirichlet")));
    EXPECT_TRUE(check_confining_conditions(params_from_tag("mixed_a0")));
    EXPECT_FALSE(check_confining_conditions(params_from_tag("robin_mit_plus")));
    EXPECT_TRUE(check_tau1_condition(m_matrix(params_from_tag("periodic"))));
    EXPECT_TRUE(check_tau1_condition(m_matrix(params_from_tag("antiperiodic"))));
    EXPECT_FALSE(check_tau1_condition(m_matrix(params_from_tag("rotation:0"))));
    EXPECT_TRUE(check_energy_condition(params_from_tag("dirichlet")));
    EXPECT_FALSE(check_energy_condition(params_from_tag("neumann")));
    EXPECT_TRUE(check_energy_condition(params_from_tag("periodic")));
}

TEST(BcFamily, ClassifyExamples) {
    BcReport d = classify(params_from_tag("dirichlet"));
    EXPECT_TRUE(d.majorana_compatible && d.confining);
    EXPECT_TRUE(*d.tau1_condition && *d.energy_condition);
    EXPECT_EQ(*d.named_case, "(i)");
    BcReport r = classify(params_from_tag("robin_mit_plus"));
    EXPECT_TRUE(r.majorana_compatible && r.confining);
    EXPECT_FALSE(*r.tau1_condition);
    EXPECT_FALSE(*r.energy_condition);
    EXPECT_EQ(*r.named_case, "(v)");
    BcReport q = classify(params_from_tag("quasimixed+"));
    EXPECT_FALSE(q.majorana_compatible);
    EXPECT_FALSE(q.confining);
    EXPECT_FALSE(q.tau1_condition.has_value());
    EXPECT_FALSE(q.energy_condition.has_value());
    EXPECT_EQ(*q.named_case, "(xii)");
}

TEST(BcFamily, CatalogRoundTrip) {
    for (const auto& e : catalog()) {
        auto m = match_catalog(params_from_tag(e.tag));
        ASSERT_TRUE(m.has_value()) << e.tag;
        EXPECT_EQ(m->tag, e.tag);
        EXPECT_EQ(m->roman, e.roman);
    }
    EXPECT_EQ(match_catalog(params_from_tag("rotation:0.7"))->roman, "(ix)");
    EXPECT_EQ(match_catalog(params_from_tag("rotation:0"))->roman, "(x)");
    EXPECT_EQ(catalog_cases().size(), 12u);
}

TEST(BcFamily, CatalogPointsSolveTheirRelations) {
    for (const char* t : {"dirichlet", "neumann", "mixed_a0", "mixed_b0"})
        for (double r : confining_residuals(params_from_tag(t))) EXPECT_LT(std::abs(r), 1e-15) << t;
    for (double r : energy_residuals(params_from_tag("dirichlet"))) EXPECT_LT(std::abs(r), 1e-15);
}

TEST(BcFamily, InvalidInputs) {
    EXPECT_THROW(params_from_tag("nope"), Error);
    EXPECT_THROW(params_from_tag("rotation:abc"), Error);
    EXPECT_THROW(P(0.5, 0, 0, 0, 0).validate(), Error);
    BcParams p = params_from_tag("dirichlet");
    p.lambda = -1.0;
    EXPECT_THROW(p.validate(), Error);
}

TEST(BcFamily, EnumerationSmallRun) {
    auto sols = enumerate_confining_solutions(20000, 1e-6, 99);
    std::set<std::string> tags;
    for (const auto& s : sols) tags.insert(match_catalog(s.params)->tag);
    EXPECT_EQ(tags, (std::set<std::string>{"dirichlet", "neumann", "mixed_a0", "mixed_b0"}));
    auto slice = enumerate_energy_slice(20000, 1e-6, -1.0, 5);
    ASSERT_EQ(slice.size(), 1u);
    EXPECT_NEAR(slice[0], kHalfPi, 1e-6);
}
