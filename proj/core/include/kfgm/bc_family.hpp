#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace kfgm {

struct BcParams {
    double m0 = -1.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double mu = 0.0;
    double lambda = 1.0;

    double norm2() const { return m0 * m0 + m1 * m1 + m2 * m2 + m3 * m3; }
    /// unit norm within 1e-12, mu in [0,pi), lambda > 0
    void validate() const;
};

/// shifts mu into [0,pi) by adding pi and flipping all m_i
BcParams normalize_mu(BcParams p);

struct BcRealization {
    enum class Variant { coupled, separated };
    Variant variant = Variant::separated;
    Eigen::Matrix2d M = Eigen::Matrix2d::Identity();  // [psi(b), l psi_x(b)] = M [psi(a), l psi_x(a)]
    // alpha psi + beta lambda psi_x = 0 at each end
    double alpha_a = 1.0, beta_a = 0.0;
    double alpha_b = 1.0, beta_b = 0.0;

    bool coupled() const { return variant == Variant::coupled; }
};

struct ConditionValue {
    std::string name;
    double value;
};

struct BcReport {
    bool majorana_compatible = false;
    bool confining = false;
    std::optional<bool> tau1_condition;
    std::optional<bool> energy_condition;
    std::optional<std::string> named_match;  // catalog tag
    std::optional<std::string> named_case;   // "(i)" ... "(xii)"
    std::vector<ConditionValue> conditions;  // raw residuals of the scalar relations
};

inline constexpr double kConditionTol = 1e-10;
inline constexpr double kHalfPi = 1.57079632679489661923;

/// sin and cos of mu, exact at mu = 0 and mu = kHalfPi
void mu_trig(double mu, double& s, double& c);

Eigen::Matrix2cd u2_matrix(const BcParams& p);
BcParams majorana_restrict(const BcParams& p);
BcRealization m_matrix(const BcParams& p);
bool check_confining_conditions(const BcParams& p);
bool check_tau1_condition(const BcRealization& r);
bool check_energy_condition(const BcParams& p);
BcReport classify(const BcParams& p);

/// residual vectors of the scalar relations
std::vector<double> confining_residuals(const BcParams& p);
std::vector<double> energy_residuals(const BcParams& p);

struct CatalogEntry {
    std::string tag;
    std::string roman;
    BcParams params;
};

/// fixed entries; the rotation family is reached through params_from_tag("rotation:<mu>")
const std::vector<CatalogEntry>& catalog();
/// one representative per named case (i)..(xii), in order; used by sweeps
std::vector<CatalogEntry> catalog_cases();
/// throws InvalidParams on an unknown tag
BcParams params_from_tag(const std::string& tag, double lambda = 1.0);
std::optional<CatalogEntry> match_catalog(const BcParams& p, double tol = kConditionTol);
std::string format_mu(double mu);

struct ConfiningSolution {
    BcParams params;
    int hits = 0;
};

/// random starts over (m0,m3,mu) with m1=m2=0, refined by Gauss-Newton on
/// the tau1 relations, clustered by distance between U matrices
std::vector<ConfiningSolution> enumerate_confining_solutions(long samples, double tol,
                                                            std::uint64_t seed = 12345);
/// same search on the m0=m3=0, m1=+-1 slice against the energy relations; returns mu clusters
std::vector<double> enumerate_energy_slice(long samples, double tol, double m1 = 1.0,
                                           std::uint64_t seed = 777);
/// confining set (m1=m2=0) against the energy relations
std::vector<ConfiningSolution> enumerate_energy_confining(long samples, double tol,
                                                         std::uint64_t seed = 4242);

}  // namespace kfgm
