#include "kfgm/bc_family.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "kfgm/errors.hpp"

namespace kfgm {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near(double a, double b, double tol = kConditionTol) { return std::abs(a - b) <= tol; }

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

BcParams make(double m0, double m1, double m2, double m3, double mu) {
    BcParams p;
    p.m0 = m0;
    p.m1 = m1;
    p.m2 = m2;
    p.m3 = m3;
    p.mu = mu;
    return p;
}

// separated relation at one end: pick the larger of the two candidate pairs
void pick_pair(double a1, double b1, double a2, double b2, double& alpha, double& beta) {
    double n1 = std::hypot(a1, b1), n2 = std::hypot(a2, b2);
    double a = a1, b = b1, n = n1;
    if (n2 > n1) {
        a = a2;
        b = b2;
        n = n2;
    }
    if (n < 1e-12) throw Error(ErrorCode::SingularClosure, "degenerate separated boundary relation");
    a /= n;
    b /= n;
    if (std::abs(a) < 1e-14) a = 0.0;
    if (std::abs(b) < 1e-14) b = 0.0;
    double lead = a != 0.0 ? a : b;
    if (lead < 0) {
        a = -a;
        b = -b;
    }
    alpha = a;
    beta = b;
}

// snap radius; double roots of the squared relations only refine to ~sqrt(eps)
constexpr double kSnap = 1e-6;

// snap values near a lattice point {0, +-1} / {0, pi/2}
double snap_unit(double v) {
    for (double t : {-1.0, 0.0, 1.0})
        if (std::abs(v - t) < kSnap) return t;
    return v;
}

BcParams snap(BcParams p) {
    p.m0 = snap_unit(p.m0);
    p.m1 = snap_unit(p.m1);
    p.m2 = snap_unit(p.m2);
    p.m3 = snap_unit(p.m3);
    if (std::abs(p.mu) < kSnap) p.mu = 0.0;
    if (std::abs(p.mu - kHalfPi) < kSnap) p.mu = kHalfPi;
    if (std::abs(p.mu - kPi) < kSnap) {
        p.mu = 0.0;
        p.m0 = 0.0 - p.m0;
        p.m1 = 0.0 - p.m1;
        p.m2 = 0.0 - p.m2;
        p.m3 = 0.0 - p.m3;
    }
    return p;
}

// damped Gauss-Newton on a small parameter vector; numeric Jacobian
Eigen::VectorXd refine(const std::function<std::vector<double>(const Eigen::VectorXd&)>& f,
                       Eigen::VectorXd x, int iters = 60) {
    const int n = static_cast<int>(x.size());
    for (int it = 0; it < iters; ++it) {
        std::vector<double> r0 = f(x);
        const int m = static_cast<int>(r0.size());
        if (max_abs(r0) < 1e-15) break;
        Eigen::MatrixXd J(m, n);
        for (int k = 0; k < n; ++k) {
            Eigen::VectorXd xp = x, xm = x;
            double h = 1e-7;
            xp[k] += h;
            xm[k] -= h;
            std::vector<double> rp = f(xp), rm = f(xm);
            for (int i = 0; i < m; ++i) J(i, k) = (rp[i] - rm[i]) / (2 * h);
        }
        Eigen::VectorXd r = Eigen::Map<Eigen::VectorXd>(r0.data(), m);
        Eigen::MatrixXd JtJ = J.transpose() * J;
        JtJ.diagonal().array() += 1e-12 + 1e-9 * JtJ.diagonal().array();
        Eigen::VectorXd step = JtJ.ldlt().solve(J.transpose() * r);
        if (!step.allFinite()) break;
        x -= step;
        if (step.norm() < 1e-10) break;
    }
    return x;
}

double u_distance(const BcParams& a, const BcParams& b) {
    return (u2_matrix(a) - u2_matrix(b)).norm();
}

// (theta, mu) -> confining point with mu wrapped into [0,pi)
BcParams confining_point(double theta, double mu) {
    double m0 = std::cos(theta), m3 = std::sin(theta);
    mu = std::fmod(mu, 2 * kPi);
    if (mu < 0) mu += 2 * kPi;
    if (mu >= kPi) {
        mu -= kPi;
        m0 = -m0;
        m3 = -m3;
    }
    return make(m0, 0.0, 0.0, m3, mu);
}

std::vector<ConfiningSolution> search_confining(
    long samples, double tol, std::uint64_t seed,
    const std::function<std::vector<double>(const BcParams&)>& residual) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> th(-kPi, kPi), mu(0.0, kPi);
    std::vector<ConfiningSolution> out;
    auto f = [&](const Eigen::VectorXd& v) { return residual(confining_point(v[0], v[1])); };
    for (long s = 0; s < samples; ++s) {
        Eigen::VectorXd x(2);
        x << th(rng), mu(rng);
        x = refine(f, x);
        BcParams p = snap(confining_point(x[0], x[1]));
        if (max_abs(residual(p)) > tol) continue;
        bool merged = false;
        for (auto& c : out)
            if (u_distance(c.params, p) < 1e-4) {
                ++c.hits;
                merged = true;
                break;
            }
        if (!merged) out.push_back({p, 1});
    }
    std::sort(out.begin(), out.end(), [](const ConfiningSolution& a, const ConfiningSolution& b) {
        if (a.params.mu != b.params.mu) return a.params.mu < b.params.mu;
        if (a.params.m0 != b.params.m0) return a.params.m0 < b.params.m0;
        return a.params.m3 < b.params.m3;
    });
    return out;
}

}  // namespace

void mu_trig(double mu, double& s, double& c) {
    if (mu == 0.0) {
        s = 0.0;
        c = 1.0;
    } else if (mu == kHalfPi) {
        s = 1.0;
        c = 0.0;
    } else {
        s = std::sin(mu);
        c = std::cos(mu);
    }
}

void BcParams::validate() const {
    if (!std::isfinite(norm2()) || std::abs(norm2() - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidParams, "m0^2+m1^2+m2^2+m3^2 must equal 1");
    if (!(mu >= 0.0 && mu < kPi)) throw Error(ErrorCode::InvalidParams, "mu must lie in [0,pi)");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::InvalidParams, "lambda must be positive");
}

BcParams normalize_mu(BcParams p) {
    if (!std::isfinite(p.mu)) throw Error(ErrorCode::InvalidParams, "mu not finite");
    double k = std::floor(p.mu / kPi);
    p.mu -= k * kPi;
    if (p.mu >= kPi) p.mu = 0.0;  // round-off at the top edge
    if (static_cast<long long>(k) % 2 != 0) {
        p.m0 = -p.m0;
        p.m1 = -p.m1;
        p.m2 = -p.m2;
        p.m3 = -p.m3;
    }
    if (std::abs(p.mu - kHalfPi) < 1e-15) p.mu = kHalfPi;
    return p;
}

Eigen::Matrix2cd u2_matrix(const BcParams& p) {
    p.validate();
    using cd = std::complex<double>;
    double s, c;
    mu_trig(p.mu, s, c);
    cd ph(c, s);
    Eigen::Matrix2cd U;
    U << cd(p.m0, -p.m3), cd(-p.m2, -p.m1), cd(p.m2, -p.m1), cd(p.m0, p.m3);
    return ph * U;
}

BcParams majorana_restrict(const BcParams& p) {
    double n2 = p.m0 * p.m0 + p.m1 * p.m1 + p.m3 * p.m3;
    if (n2 < 1e-12)
        throw Error(ErrorCode::NotMajoranaCompatible, "BC is dominated by m2; no real counterpart");
    double n = std::sqrt(n2);
    BcParams r = p;
    r.m0 /= n;
    r.m1 /= n;
    r.m3 /= n;
    r.m2 = 0.0;
    return r;
}

BcRealization m_matrix(const BcParams& p) {
    p.validate();
    if (std::abs(p.m2) > kConditionTol)
        throw Error(ErrorCode::NotMajoranaCompatible, "m2 != 0 has no real transfer matrix");
    double s, c;
    mu_trig(p.mu, s, c);
    BcRealization r;
    if (std::abs(p.m1) > 1e-10) {
        r.variant = BcRealization::Variant::coupled;
        r.M << p.m3 + s, -p.m0 - c, -p.m0 + c, -p.m3 + s;
        r.M /= p.m1;
        return r;
    }
    r.variant = BcRealization::Variant::separated;
    pick_pair(p.m3 + s, -(p.m0 + c), p.m0 - c, p.m3 - s, r.alpha_a, r.beta_a);
    pick_pair(p.m3 - s, -(p.m0 + c), p.m0 - c, p.m3 + s, r.alpha_b, r.beta_b);
    return r;
}

std::vector<double> confining_residuals(const BcParams& p) {
    double s, c;
    mu_trig(p.mu, s, c);
    return {(p.m3 + s) * (p.m0 - c), (p.m3 - s) * (p.m0 + c), (p.m3 + s) * (p.m0 + c),
            (p.m3 - s) * (p.m0 - c), (p.m3 - s) * (p.m3 + s)};
}

std::vector<double> energy_residuals(const BcParams& p) {
    double s, c;
    mu_trig(p.mu, s, c);
    double m1s = p.m1 * p.m1;
    return {(p.m3 + s) * (p.m0 + c), (p.m3 + s) * (p.m3 + s) - m1s, (p.m0 + c) * (p.m0 + c),
            (-p.m3 + s) * (p.m0 + c), (-p.m3 + s) * (-p.m3 + s) - m1s};
}

bool check_confining_conditions(const BcParams& p) {
    if (std::abs(p.m1) > kConditionTol || std::abs(p.m2) > kConditionTol)
        throw Error(ErrorCode::WrongBranch, "confining relations need m1 = m2 = 0");
    return max_abs(confining_residuals(p)) <= kConditionTol;
}

bool check_tau1_condition(const BcRealization& r) {
    if (!r.coupled()) throw Error(ErrorCode::WrongBranch, "tau1 matrix test needs a coupled BC");
    Eigen::Matrix2d X;
    X << 0, 1, 1, 0;
    Eigen::Matrix2d Mi = r.M.inverse();
    double d1 = (r.M.transpose() * X * r.M - X).cwiseAbs().maxCoeff();
    double d2 = (Mi.transpose() * X * Mi - X).cwiseAbs().maxCoeff();
    return d1 <= kConditionTol && d2 <= kConditionTol;
}

bool check_energy_condition(const BcParams& p) {
    if (std::abs(p.m2) > kConditionTol)
        throw Error(ErrorCode::NotMajoranaCompatible, "energy relations need m2 = 0");
    return max_abs(energy_residuals(p)) <= kConditionTol;
}

BcReport classify(const BcParams& p) {
    p.validate();
    BcReport rep;
    rep.majorana_compatible = std::abs(p.m2) <= kConditionTol;
    rep.confining = std::abs(p.m1) <= kConditionTol && std::abs(p.m2) <= kConditionTol;
    auto cr = confining_residuals(p);
    auto er = energy_residuals(p);
    const char* cn[] = {"(m3+s)(m0-c)", "(m3-s)(m0+c)", "(m3+s)(m0+c)", "(m3-s)(m0-c)",
                        "(m3-s)(m3+s)"};
    const char* en[] = {"(m3+s)(m0+c)", "(m3+s)^2-m1^2", "(m0+c)^2", "(s-m3)(m0+c)",
                        "(s-m3)^2-m1^2"};
    for (int i = 0; i < 5; ++i) rep.conditions.push_back({std::string("tau1:") + cn[i], cr[i]});
    for (int i = 0; i < 5; ++i) rep.conditions.push_back({std::string("energy:") + en[i], er[i]});
    if (rep.majorana_compatible) {
        if (rep.confining) {
            rep.tau1_condition = check_confining_conditions(p);
        } else {
            BcRealization r = m_matrix(p);
            rep.tau1_condition = check_tau1_condition(r);
            double det = r.M.determinant();
            rep.conditions.push_back({"det(M)-1", det - 1.0});
        }
        rep.energy_condition = check_energy_condition(p);
    }
    if (auto m = match_catalog(p)) {
        rep.named_match = m->tag;
        rep.named_case = m->roman;
    }
    return rep;
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"dirichlet", "(i)", make(-1, 0, 0, 0, 0)},
        {"neumann", "(ii)", make(1, 0, 0, 0, 0)},
        {"mixed_a0", "(iii)", make(0, 0, 0, 1, kHalfPi)},
        {"mixed_b0", "(iv)", make(0, 0, 0, -1, kHalfPi)},
        {"robin_mit_plus", "(v)", make(1, 0, 0, 0, kHalfPi)},
        {"robin_mit_minus", "(vi)", make(-1, 0, 0, 0, kHalfPi)},
        {"periodic", "(vii)", make(0, 1, 0, 0, kHalfPi)},
        {"antiperiodic", "(viii)", make(0, -1, 0, 0, kHalfPi)},
        {"quasiperiodic+", "(xi)", make(0, 0, 1, 0, kHalfPi)},
        {"quasiperiodic-", "(xi)", make(0, 0, -1, 0, kHalfPi)},
        {"quasimixed+", "(xii)", make(0, 0, 1, 0, 0)},
        {"quasimixed-", "(xii)", make(0, 0, -1, 0, 0)},
    };
    return entries;
}

std::vector<CatalogEntry> catalog_cases() {
    const auto& c = catalog();
    std::vector<CatalogEntry> out(c.begin(), c.begin() + 8);
    out.push_back({"rotation:0.7", "(ix)", params_from_tag("rotation:0.7")});
    out.push_back({"rotation:0", "(x)", params_from_tag("rotation:0")});
    out.push_back(c[8]);
    out.push_back(c[10]);
    return out;
}

std::string format_mu(double mu) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, mu);
    return std::string(buf, res.ptr);
}

BcParams params_from_tag(const std::string& tag, double lambda) {
    for (const auto& e : catalog())
        if (e.tag == tag) {
            BcParams p = e.params;
            p.lambda = lambda;
            return p;
        }
    for (const char* pre : {"rotation:", "rotation-:"}) {
        std::string prefix(pre);
        if (tag.rfind(prefix, 0) != 0) continue;
        std::string num = tag.substr(prefix.size());
        double mu = 0.0;
        auto res = std::from_chars(num.data(), num.data() + num.size(), mu);
        if (res.ec != std::errc() || res.ptr != num.data() + num.size() || !std::isfinite(mu))
            throw Error(ErrorCode::InvalidParams, "bad rotation angle in tag '" + tag + "'");
        double m1 = prefix == "rotation:" ? 1.0 : -1.0;
        BcParams p = normalize_mu(make(0, m1, 0, 0, mu));
        p.lambda = lambda;
        return p;
    }
    throw Error(ErrorCode::InvalidParams, "unknown BC tag '" + tag + "'");
}

std::optional<CatalogEntry> match_catalog(const BcParams& p, double tol) {
    for (const auto& e : catalog()) {
        const BcParams& q = e.params;
        if (near(p.m0, q.m0, tol) && near(p.m1, q.m1, tol) && near(p.m2, q.m2, tol) &&
            near(p.m3, q.m3, tol) && near(p.mu, q.mu, tol))
            return e;
    }
    if (near(p.m0, 0, tol) && near(p.m2, 0, tol) && near(p.m3, 0, tol) &&
        near(std::abs(p.m1), 1.0, tol)) {
        CatalogEntry e;
        e.tag = std::string(p.m1 > 0 ? "rotation:" : "rotation-:") + format_mu(p.mu);
        e.roman = near(p.mu, 0.0, tol) ? "(x)" : "(ix)";
        e.params = p;
        return e;
    }
    return std::nullopt;
}

std::vector<ConfiningSolution> enumerate_confining_solutions(long samples, double tol,
                                                            std::uint64_t seed) {
    return search_confining(samples, tol, seed, confining_residuals);
}

std::vector<ConfiningSolution> enumerate_energy_confining(long samples, double tol,
                                                         std::uint64_t seed) {
    return search_confining(samples, tol, seed, energy_residuals);
}

std::vector<double> enumerate_energy_slice(long samples, double tol, double m1,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, kPi);
    auto at = [m1](double mu) {
        mu = std::fmod(mu, kPi);
        if (mu < 0) mu += kPi;
        return make(0, m1, 0, 0, mu);
    };
    auto f = [&](const Eigen::VectorXd& v) { return energy_residuals(at(v[0])); };
    std::vector<double> out;
    for (long s = 0; s < samples; ++s) {
        Eigen::VectorXd x(1);
        x << dist(rng);
        x = refine(f, x);
        BcParams p = snap(at(x[0]));
        if (max_abs(energy_residuals(p)) > tol) continue;
        bool merged = false;
        for (double m : out)
            if (std::abs(m - p.mu) < 1e-4) merged = true;
        if (!merged) out.push_back(p.mu);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace kfgm
