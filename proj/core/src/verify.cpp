#include "kfgm/harness/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>
#include <set>

#include "json.hpp"
#include "kfgm/errors.hpp"
#include "kfgm/evolution.hpp"
#include "kfgm/harness/experiments.hpp"
#include "kfgm/observables.hpp"

namespace kfgm {

namespace {

constexpr double kPi = 3.141592653589793;

std::string g3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

template <class T, class F>
auto parallel_map(const std::vector<T>& items, F f) {
    using R = decltype(f(items.front()));
    std::vector<std::future<R>> fut;
    for (const auto& it : items) fut.push_back(std::async(std::launch::async, f, std::cref(it)));
    std::vector<R> out;
    for (auto& x : fut) out.push_back(x.get());
    return out;
}

ScalarPotential nonneg_quadratic(double L) {
    ScalarPotential p;
    p.profile.kind = SpatialProfile::Kind::quadratic;
    p.profile.s0 = 0.2;
    p.profile.s2 = 0.1;
    p.profile.x0 = 0.5 * L;
    p.nonneg = true;
    return p;
}

std::vector<CatalogEntry> majorana_cases() {
    std::vector<CatalogEntry> out;
    for (const auto& e : catalog_cases())
        if (e.params.m2 == 0.0) out.push_back(e);
    return out;
}

bool in_set(const std::string& tag, std::initializer_list<const char*> s) {
    for (const char* t : s)
        if (tag == t) return true;
    return false;
}

const std::initializer_list<const char*> kBoundaryFree = {"dirichlet", "neumann",  "mixed_a0",
                                                          "mixed_b0",  "periodic", "antiperiodic"};

// max |psi| etc. for scale-relative checks
double mx(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

struct Setup {
    KineticMatrix k;
    ModeSet ms;
};

Setup make_setup(const BcParams& bc, double L, int n, const ScalarPotential& pot) {
    PhysicalUnits u;
    Grid g = Grid::make(0.0, L, n);
    KineticMatrix k = assemble_kinetic(g, pot, 0.0, bc, u);
    ModeSet ms = eigenmodes(k);
    return {std::move(k), std::move(ms)};
}

double ymetric(const CVec& a, const CVec& b) {
    const Eigen::Index d = a.size() / 2;
    return std::abs(a.head(d).dot(b.head(d)) - a.tail(d).dot(b.tail(d)));
}

// ---------------------------------------------------------------- criterion 1
CheckResult c1_bc_algebra(const VerifyOptions& opt) {
    CheckResult r{"four_confining_solutions", false, 0.0, 10.0, ""};
    auto t0 = std::chrono::steady_clock::now();
    auto sols = enumerate_confining_solutions(opt.samples, opt.tol, opt.seed);
    std::set<std::string> tags;
    for (const auto& s : sols) {
        auto m = match_catalog(s.params);
        tags.insert(m ? m->tag : "?");
    }
    bool four = sols.size() == 4 &&
                tags == std::set<std::string>{"dirichlet", "neumann", "mixed_a0", "mixed_b0"};

    auto slice_p = enumerate_energy_slice(opt.samples, opt.tol, 1.0, opt.seed + 1);
    auto slice_m = enumerate_energy_slice(opt.samples, opt.tol, -1.0, opt.seed + 2);
    auto only_half_pi = [](const std::vector<double>& v) {
        return v.size() == 1 && std::abs(v[0] - 0.5 * kPi) < 1e-6;
    };
    bool slice_ok = only_half_pi(slice_p) && only_half_pi(slice_m);

    int passing = 0;
    bool dirichlet_passes = false;
    for (const auto& s : sols)
        if (check_energy_condition(s.params)) {
            ++passing;
            auto m = match_catalog(s.params);
            dirichlet_passes = dirichlet_passes || (m && m->tag == "dirichlet");
        }
    auto econf = enumerate_energy_confining(std::max(10000L, opt.samples / 10), opt.tol, opt.seed + 3);
    bool econf_ok = econf.size() == 1 && match_catalog(econf[0].params) &&
                    match_catalog(econf[0].params)->tag == "dirichlet";
    bool unique = passing == 1 && dirichlet_passes && econf_ok;

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.value = secs;
    r.pass = four && slice_ok && unique && secs < 10.0;
    r.detail = "clusters=" + std::to_string(sols.size()) + (four ? " (i)-(iv)" : " MISMATCH") +
               "; slice mu=pi/2 only: " + (slice_ok ? "yes" : "no") +
               "; energy condition on confining set: " + std::to_string(passing) +
               (unique ? " (dirichlet)" : " MISMATCH") + "; runtime " + g3(secs) + "s";
    return r;
}

// ---------------------------------------------------------------- criterion 2
CheckResult c2_pseudo_hermiticity(const VerifyOptions&) {
    CheckResult r{"pseudo_hermiticity", true, 0.0, 1e-10, ""};
    std::string worst;
    for (const auto& e : catalog_cases()) {
        auto pot = nonneg_quadratic(kPi);
        KineticMatrix k = assemble_kinetic(Grid::make(0, kPi, 128), pot, 0.0, e.params, PhysicalUnits{});
        double d = pseudo_hermiticity_defect(fv_matrix(k.kin, k.S, k.units.mc2()));
        if (d >= r.value) {
            r.value = d;
            worst = e.tag;
        }
    }
    r.pass = r.value <= r.tol;
    r.detail = "12 catalog BCs at n=128, worst " + worst;
    return r;
}

// ---------------------------------------------------------------- criterion 3
CheckResult c3_dispersion(const VerifyOptions&) {
    CheckResult r{"dispersion_second_order", true, 0.0, 0.4, ""};
    struct Case {
        const char* tag;
        double L;
        std::vector<double> k;  // wavenumbers of the compared levels
        std::vector<int> level; // which spectrum entries
    };
    std::vector<Case> cases = {
        {"dirichlet", kPi, {1, 2, 3, 4, 5}, {0, 1, 2, 3, 4}},
        {"neumann", kPi, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}},
        {"periodic", 2 * kPi, {1, 2, 3, 4, 5}, {1, 3, 5, 7, 9}},
    };
    double rmin = 1e9, rmax = 0, worst_rel = 0;
    for (const auto& c : cases) {
        std::vector<double> err[2];
        int idx = 0;
        for (int n : {129, 257}) {
            Setup s = make_setup(params_from_tag(c.tag), c.L, n, ScalarPotential{});
            for (size_t i = 0; i < c.k.size(); ++i) {
                double exact = 1.0 + c.k[i] * c.k[i];
                double e2 = s.ms.spectrum[c.level[i]].E2;
                err[idx].push_back(std::abs(e2 - exact));
                if (n == 257) worst_rel = std::max(worst_rel, std::abs(std::sqrt(e2) / std::sqrt(exact) - 1));
            }
            ++idx;
        }
        for (size_t i = 0; i < c.k.size(); ++i) {
            double ratio = err[0][i] / err[1][i];
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
            r.value = std::max(r.value, std::abs(ratio - 4.0));
        }
    }
    r.pass = r.value <= r.tol && worst_rel < 0.005;
    r.detail = "dirichlet/neumann/periodic k=1..5, n=128->256 intervals: ratio in [" + g3(rmin) +
               ", " + g3(rmax) + "]; worst |E/E_exact-1| at n=256: " + g3(worst_rel);
    return r;
}

// ---------------------------------------------------------------- criterion 4
CheckResult c4_conservation(const VerifyOptions& opt) {
    CheckResult r{"conservation_drift", true, 0.0, 1e-10, ""};
    auto cases = majorana_cases();
    auto res = parallel_map(cases, [&](const CatalogEntry& e) {
        auto pot = nonneg_quadratic(kPi);
        Setup s = make_setup(e.params, kPi, 128, pot);
        HamiltonianProvider hp(s.k, pot);
        std::mt19937_64 rng(opt.seed ^ std::hash<std::string>{}(e.tag));
        EvolutionConfig cfg{1e-3, 10000, 10000};
        double worst = 0.0;
        for (MajoranaKind kind : {MajoranaKind::none, MajoranaKind::plus}) {
            KfgState st = generic_level_state(s.ms, {0, 1}, rng, kind, 0.0);
            Trajectory tr = evolve(kfg_to_fv(st, s.k.units), hp, cfg);
            const auto& a = tr.snapshots.front().summary;
            const auto& b = tr.snapshots.back().summary;
            worst = std::max(worst, std::abs(b.energy_integral - a.energy_integral) /
                                        std::abs(a.energy_integral));
            if (kind == MajoranaKind::none)
                worst = std::max(worst, std::abs(b.norm - a.norm) / std::abs(a.norm));
        }
        return worst;
    });
    std::string worst;
    for (size_t i = 0; i < cases.size(); ++i)
        if (res[i] >= r.value) {
            r.value = res[i];
            worst = cases[i].tag;
        }
    r.pass = r.value <= r.tol;
    r.detail = std::to_string(cases.size()) +
               " Majorana-compatible BCs, static S>=0, 1e4 steps dt=1e-3; norm (complex states) "
               "and energy (complex and Majorana); worst " + worst;
    return r;
}

// ---------------------------------------------------------------- criterion 5
CheckResult c5_majorana(const VerifyOptions& opt) {
    CheckResult r{"majorana_triviality", true, 0.0, 1e-13, ""};
    auto cases = majorana_cases();
    struct Out {
        double fields = 0.0, tag = 0.0;
    };
    auto res = parallel_map(cases, [&](const CatalogEntry& e) {
        auto pot = nonneg_quadratic(kPi);
        Setup s = make_setup(e.params, kPi, 128, pot);
        HamiltonianProvider hp(s.k, pot);
        std::mt19937_64 rng(opt.seed + 5);
        Out o;
        for (MajoranaKind kind : {MajoranaKind::plus, MajoranaKind::minus}) {
            KfgState st = generic_level_state(s.ms, {0, 1}, rng, kind, 0.1);
            FvState fv = kfg_to_fv(st, s.k.units);
            Trajectory tr = evolve(fv, hp, {1e-3, 2000, 200});
            for (const auto& sn : tr.snapshots) {
                ObservableFields f = local_fields(sn.state, s.k);
                const PhysicalUnits& u = s.k.units;
                double sr = density_scale(f, u);
                double sj = u.hbar * mx(f.psi) * mx(f.psi_x) / u.mass;
                double se = mx(f.T00);
                double sje = current_scale(f, u);
                o.fields = std::max({o.fields, mx(f.rho) / sr, mx(f.j) / sj,
                                     f.rho_E.imag().cwiseAbs().maxCoeff() / se,
                                     f.j_E.imag().cwiseAbs().maxCoeff() / sje});
            }
            auto mp = check_majorana_preservation(fv, hp.at(0.1), 1e-3, 2000);
            o.tag = std::max(o.tag, mp.max_deviation);
        }
        return o;
    });
    double fields = 0, tag = 0;
    for (const auto& o : res) {
        fields = std::max(fields, o.fields);
        tag = std::max(tag, o.tag);
    }
    r.value = fields;
    r.pass = fields <= 1e-13 && tag <= 1e-12;
    r.detail = "plus/minus states on " + std::to_string(cases.size()) +
               " BCs, 11 snapshots over 2000 steps: max scaled |rho|,|j|,|Im rho_E|,|Im j_E| = " +
               g3(fields) + "; tau1 defect " + g3(tag) + " (tol 1e-12)";
    return r;
}

// ---------------------------------------------------------------- criterion 6
struct CurrentCase {
    std::string tag;
    BcParams bc;
};

std::vector<CurrentCase> current_cases() {
    std::vector<CurrentCase> v;
    for (const auto& e : majorana_cases()) v.push_back({e.tag, e.params});
    for (const char* t : {"rotation-:0", "rotation-:0.7", "rotation:1.2"})
        v.push_back({t, params_from_tag(t)});
    return v;
}

CheckResult c6_boundary_currents(const VerifyOptions& opt) {
    CheckResult r{"boundary_energy_currents", true, 0.0, 1e-6, ""};
    double worst_balance = 0, worst_zero = 0, min_open = 1e9;
    std::string mismatches;
    for (const auto& c : current_cases()) {
        Setup s = make_setup(c.bc, kPi, 256, ScalarPotential{});
        std::mt19937_64 rng(opt.seed + 6);
        KfgState st = generic_level_state(s.ms, {0, 1}, rng, MajoranaKind::plus, 0.37);
        ObservableFields f = local_fields(st, s.k);
        double scale = current_scale(f, s.k.units);
        const int n = s.k.grid.n;
        double ja = std::abs(f.j_E[0]), jb = std::abs(f.j_E[n - 1]);
        worst_balance = std::max(worst_balance, std::abs(f.j_E[0] - f.j_E[n - 1]) / scale);
        bool m1zero = c.bc.m1 == 0.0;
        if (m1zero) {
            worst_zero = std::max({worst_zero, ja / scale, jb / scale});
            if (ja / scale > 1e-6) mismatches += " " + c.tag + ":j_E(a)!=0";
        } else {
            min_open = std::min(min_open, ja / scale);
            if (ja / scale < 1e-3) mismatches += " " + c.tag + ":j_E(a)~0";
        }
        BoundaryTilde bt = boundary_jtilde_E(f);
        bool tilde_zero = std::abs(bt.difference) <= 1e-6 * scale;
        bool expected = in_set(c.tag, kBoundaryFree);
        BcReport rep = classify(c.bc);
        bool flag = rep.tau1_condition.value_or(false);
        if (tilde_zero != expected || flag != expected)
            mismatches += " " + c.tag + ":[jtilde]" + (tilde_zero ? "=0" : "!=0");
        if (!tilde_zero && std::abs(bt.difference) < 1e-3 * scale)
            mismatches += " " + c.tag + ":[jtilde]-small";
    }
    r.value = std::max(worst_balance, worst_zero);
    r.pass = r.value <= r.tol && mismatches.empty();
    r.detail = "n=256 generic two-level plus states; max |j_E(a)-j_E(b)|/scale " + g3(worst_balance) +
               ", m1=0 max |j_E|/scale " + g3(worst_zero) + ", m1!=0 min |j_E(a)|/scale " +
               g3(min_open) + (mismatches.empty() ? "; [jtilde_E] pattern matches" : ";" + mismatches);
    return r;
}

// ---------------------------------------------------------------- criterion 7
CheckResult c7_positivity(const VerifyOptions& opt) {
    CheckResult r{"positivity_and_identities", true, 0.0, 1e-8, ""};
    double min_energy = 1e9, worst_surface = 0, worst_split = 0, worst_equal = 0;
    double robin_gap = 0;
    std::string bad;
    for (const auto& e : majorana_cases()) {
        auto pot = nonneg_quadratic(kPi);
        Setup s = make_setup(e.params, kPi, 256, pot);
        std::mt19937_64 rng(opt.seed + 7);
        for (MajoranaKind kind : {MajoranaKind::plus, MajoranaKind::minus, MajoranaKind::none}) {
            // adjacent levels: for reflection-symmetric setups they have opposite parity
            for (std::vector<int> lv : {std::vector<int>{0, 1}, std::vector<int>{1, 2}, std::vector<int>{2, 3}}) {
                KfgState st = generic_level_state(s.ms, lv, rng, kind, 0.21);
                ObservableFields f = local_fields(st, s.k);
                GlobalSummary gs = global_summary(f, s.k);
                double escale = gs.T00_integral;
                worst_surface = std::max(worst_surface, std::abs(gs.surface_identity_residual) / escale);
                if (kind != MajoranaKind::none)
                    worst_split = std::max(worst_split, gs.current_split_residual / escale);
                if (in_set(e.tag, kBoundaryFree)) {
                    min_energy = std::min(min_energy, gs.energy_mean);
                    if (!(gs.energy_mean > 0)) bad += " " + e.tag + ":E<=0";
                }
                if (kind == MajoranaKind::none) continue;
                double jscale = s.k.units.c * escale;
                double gap = std::abs(gs.J_E - gs.J_tilde_E) / jscale;
                if (in_set(e.tag, {"dirichlet", "periodic", "antiperiodic"}))
                    worst_equal = std::max(worst_equal, gap);
                if (e.tag == "robin_mit_plus") {
                    robin_gap = robin_gap == 0 ? gap : std::min(robin_gap, gap);
                    if (gap < 1e-3) bad += " robin_mit_plus:J_E=J~_E";
                }
            }
        }
    }
    r.value = std::max({worst_surface, worst_split, worst_equal});
    r.pass = r.value <= r.tol && bad.empty();
    r.detail = "S>=0, n=256: min energy_mean over six BCs " + g3(min_energy) +
               "; surface identity " + g3(worst_surface) + "; current split " + g3(worst_split) +
               "; |J_E-J~_E| (i),(vii),(viii) " + g3(worst_equal) + "; robin (v) gap " + g3(robin_gap) +
               bad;
    return r;
}

// ---------------------------------------------------------------- criterion 8
struct ConvRun {
    std::string label;
    const char* tag;
    bool time_dependent;
    MajoranaKind kind;
    bool charge;  // charge residual meaningful (complex state)
};

// charge, energy, T0, T1, then energy and T0 without the source term
std::array<double, 6> conv_level(const ConvRun& run, int n, int steps, const VerifyOptions& opt) {
    const double L = kPi;
    ScalarPotential pot = nonneg_quadratic(L);
    if (run.time_dependent) {
        pot.time.kind = TimeFactor::Kind::sinusoidal;
        pot.time.offset = 1.0;
        pot.time.amplitude = 0.5;
        pot.time.omega = 2.0;
    }
    Setup s = make_setup(params_from_tag(run.tag), L, n, pot);
    std::mt19937_64 rng(opt.seed + 8);
    KfgState st = generic_level_state(s.ms, {0, 1, 2}, rng, run.kind, 0.0);
    HamiltonianProvider hp(s.k, pot);
    const double dt = 0.2 * s.k.grid.dx;
    auto states = evolve_states(kfg_to_fv(st, s.k.units), hp, dt, steps + 1);
    std::vector<KfgState> w(states.end() - 3, states.end());
    ContinuityResiduals c = continuity_residuals(w, s.k, pot);
    return {c.charge, c.energy, c.tensor_time, c.tensor_space, c.energy_no_source,
            c.tensor_time_no_source};
}

CheckResult c8_convergence(const VerifyOptions& opt) {
    CheckResult r{"continuity_convergence", true, 0.0, 0.4, ""};
    std::vector<ConvRun> runs = {
        {"dirichlet static complex", "dirichlet", false, MajoranaKind::none, true},
        {"dirichlet S(x,t) complex", "dirichlet", true, MajoranaKind::none, true},
        {"dirichlet S(x,t) plus", "dirichlet", true, MajoranaKind::plus, false},
        {"periodic static plus", "periodic", false, MajoranaKind::plus, false},
        {"robin (v) static complex", "robin_mit_plus", false, MajoranaKind::none, true},
    };
    // n = 64, 128, 256 intervals; dt = 0.2 dx and a common final time
    const int base_steps = 50;
    auto res = parallel_map(runs, [&](const ConvRun& run) {
        std::array<std::array<double, 6>, 3> lv;
        for (int i = 0; i < 3; ++i) lv[i] = conv_level(run, 64 * (1 << i) + 1, base_steps << i, opt);
        return lv;
    });
    const char* names[] = {"charge", "energy", "T0", "T1"};
    double rmin = 1e9, rmax = 0;
    bool control_ok = true;
    std::string detail;
    for (size_t k = 0; k < runs.size(); ++k) {
        detail += (k ? "; " : "") + runs[k].label + ":";
        for (int q = 0; q < 4; ++q) {
            if (q == 0 && !runs[k].charge) continue;
            double ratio = res[k][1][q] / res[k][2][q];
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
            r.value = std::max(r.value, std::abs(ratio - 4.0));
            detail += std::string(" ") + names[q] + "=" + g3(ratio);
        }
        if (runs[k].time_dependent) {
            // dropping the source must leave a residual that does not shrink under refinement
            const auto& c = res[k][1];
            const auto& f = res[k][2];
            double ctrl = std::max(c[4] / f[4], c[5] / f[5]);
            control_ok = control_ok && ctrl < 1.5;
            detail += " no-source ratio=" + g3(ctrl);
        }
    }
    r.pass = r.value <= r.tol && control_ok;
    r.detail = "ratios n=128->256 [" + g3(rmin) + ", " + g3(rmax) + "] " + detail;
    return r;
}

// ---------------------------------------------------------------- criterion 9
CheckResult c9_dual_path(const VerifyOptions& opt) {
    CheckResult r{"dual_path_agreement", true, 0.0, 1e-11, ""};
    auto cases = catalog_cases();
    std::mt19937_64 rng(opt.seed + 9);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), ph(0.0, 2 * kPi), tt(0.0, 2.0);
    std::uniform_int_distribution<int> pick(0, 9);
    std::vector<Setup> setups;
    auto pot = nonneg_quadratic(kPi);
    for (const auto& e : cases) setups.push_back(make_setup(e.params, kPi, 128, pot));
    for (int s = 0; s < 100; ++s) {
        const int ci = s % static_cast<int>(cases.size());
        const Setup& su = setups[ci];
        MajoranaKind kind = MajoranaKind::none;
        if (su.ms.real) kind = static_cast<MajoranaKind>((s / static_cast<int>(cases.size())) % 3);
        std::vector<ModeCoefficient> cs;
        for (int m = 0; m < 3; ++m) cs.push_back({pick(rng), amp(rng), ph(rng)});
        KfgState st = synthesize_state(su.ms, cs, tt(rng), kind);
        const PhysicalUnits& u = su.k.units;
        ObservableFields f = local_fields(st, su.k);
        TwoComponentFields t = two_component_fields(kfg_to_fv(st, u), su.k);
        const double mc2 = u.mc2(), hb = u.hbar, m = u.mass;
        double s_rho = hb * mx(f.psi) * mx(f.psi_t) / mc2;
        double s_j = hb * mx(f.psi) * mx(f.psi_x) / m;
        double s_rE = std::max(mx(f.psi) * mx(f.L_psi), hb * hb * mx(f.psi_t) * mx(f.psi_t)) / (2 * mc2);
        double s_jE = hb * hb / (2 * m) * std::max(mx(f.psi) * mx(f.psi_tx), mx(f.psi_x) * mx(f.psi_t));
        r.value = std::max({r.value, mx(f.rho - t.rho) / s_rho, mx(f.j - t.j) / s_j,
                            mx(f.rho_E - t.rho_E) / s_rE, mx(f.j_E - t.j_E) / s_jE});
    }
    r.pass = r.value <= r.tol;
    r.detail = "100 random on-shell states over 12 catalog BCs (complex and Majorana), rho, j, rho_E, j_E";
    return r;
}

// ---------------------------------------------------------------- auxiliary checks
std::vector<CheckResult> aux_bc_algebra() {
    std::vector<CheckResult> out;
    CheckResult rt{"catalog_roundtrip", true, 0, 0, ""};
    for (const auto& e : catalog()) {
        BcReport rep = classify(params_from_tag(e.tag));
        if (!rep.named_match || *rep.named_match != e.tag) {
            rt.pass = false;
            rt.detail += " " + e.tag;
        }
    }
    for (const char* t : {"rotation:0.7", "rotation-:1.2", "rotation:0"}) {
        BcReport rep = classify(params_from_tag(t));
        if (!rep.named_match || *rep.named_match != t) {
            rt.pass = false;
            rt.detail += std::string(" ") + t;
        }
    }
    rt.value = rt.pass ? 0 : 1;
    if (rt.detail.empty()) rt.detail = "tag -> params -> classify -> same tag";
    out.push_back(rt);

    CheckResult cl{"classify_examples", true, 0, 0, ""};
    BcReport d = classify(params_from_tag("dirichlet"));
    bool dok = d.majorana_compatible && d.confining && d.tau1_condition.value_or(false) &&
               d.energy_condition.value_or(false) && d.named_case.value_or("") == "(i)";
    BcReport rv = classify(params_from_tag("robin_mit_plus"));
    bool rok = rv.confining && !rv.tau1_condition.value_or(true);
    cl.pass = dok && rok;
    cl.value = cl.pass ? 0 : 1;
    cl.detail = std::string("dirichlet all flags: ") + (dok ? "yes" : "no") +
                "; robin (v) confining, tau1 false: " + (rok ? "yes" : "no");
    out.push_back(cl);
    return out;
}

std::vector<CheckResult> aux_conservation(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    // two different solutions keep their tau3 product
    {
        CheckResult c{"bilinear_conservation", true, 0, 1e-11, ""};
        for (const char* tag : {"dirichlet", "robin_mit_plus", "rotation:0.7", "quasiperiodic+"}) {
            auto pot = nonneg_quadratic(kPi);
            Setup s = make_setup(params_from_tag(tag), kPi, 128, pot);
            std::mt19937_64 rng(opt.seed + 11);
            DiscreteHamiltonian h = assemble_fv_hamiltonian(s.k);
            CVec a = h.to_y(kfg_to_fv(generic_level_state(s.ms, {0, 1}, rng, MajoranaKind::none, 0), s.k.units));
            CVec b = h.to_y(kfg_to_fv(generic_level_state(s.ms, {0, 2}, rng, MajoranaKind::none, 0.4), s.k.units));
            // keep a nontrivial overlap
            b += 0.3 * a;
            double p0 = ymetric(a, b);
            CayleyPropagator prop(h, 1e-3);
            for (int i = 0; i < 2000; ++i) {
                a = prop.apply(a);
                b = prop.apply(b);
            }
            c.value = std::max(c.value, std::abs(ymetric(a, b) - p0) / p0);
        }
        c.pass = c.value <= c.tol;
        c.detail = "<<Psi,Phi>> over 2000 steps, 4 BCs";
        out.push_back(c);
    }
    // single mode over one period, and halving dt
    {
        CheckResult c{"cayley_period_return", true, 0, 1e-4, ""};
        Setup s = make_setup(params_from_tag("dirichlet"), kPi, 128, ScalarPotential{});
        DiscreteHamiltonian h = assemble_fv_hamiltonian(s.k);
        const double E = s.ms.modes[0].E;
        const double T = 2 * kPi / E;
        double errs[2];
        for (int q = 0; q < 2; ++q) {
            int steps = 1000 << q;
            FvState f0 = kfg_to_fv(synthesize_state(s.ms, {{0, 1.0, 0.0}}, 0.0, MajoranaKind::none), s.k.units);
            CVec y0 = h.to_y(f0), y = y0;
            CayleyPropagator prop(h, T / steps);
            for (int i = 0; i < steps; ++i) y = prop.apply(y);
            errs[q] = (y - y0).norm() / y0.norm();
        }
        c.value = errs[0];
        double ratio = errs[0] / errs[1];
        c.pass = errs[0] <= 1e-4 && std::abs(ratio - 4.0) <= 0.4;
        c.detail = "dt=T/1000 error " + g3(errs[0]) + ", halving ratio " + g3(ratio);
        out.push_back(c);
    }
    return out;
}

std::vector<CheckResult> aux_boundary(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    CheckResult c{"boundary_formulas", true, 0, 1e-8, ""};
    for (const auto& e : catalog_cases()) {
        Setup s = make_setup(e.params, kPi, 256, ScalarPotential{});
        std::mt19937_64 rng(opt.seed + 12);
        for (MajoranaKind kind : {MajoranaKind::none, MajoranaKind::plus}) {
            if (kind != MajoranaKind::none && !s.ms.real) continue;
            KfgState st = generic_level_state(s.ms, {0, 1}, rng, kind, 0.3);
            ObservableFields f = local_fields(st, s.k);
            const PhysicalUnits& u = s.k.units;
            double sj = u.hbar * mx(f.psi) * mx(f.psi_x) / u.mass;
            double sje = current_scale(f, u);
            BoundaryPair bj = boundary_j(f, e.params, u);
            c.value = std::max(c.value, std::abs(bj.a - bj.a_direct) / sj);
            c.value = std::max(c.value, std::abs(bj.a_direct - bj.b) / sj);
            if (kind != MajoranaKind::none) {
                BoundaryPair be = boundary_j_E(f, e.params, u);
                c.value = std::max(c.value, std::abs(be.a - be.a_direct) / sje);
                BoundaryEj ej = boundary_Ej(f, e.params, u);
                c.value = std::max(c.value, std::abs(ej.value - ej.direct_a) / sje);
            }
        }
    }
    c.pass = c.value <= c.tol;
    c.detail = "closed-form boundary j, j_E, E j vs direct ghost values, and j(a)=j(b), 12 BCs";
    out.push_back(c);
    return out;
}

std::vector<CheckResult> aux_positivity(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    CheckResult c{"momentum_relation", true, 0, 1e-8, ""};
    for (const auto& e : majorana_cases()) {
        Setup s = make_setup(e.params, kPi, 256, nonneg_quadratic(kPi));
        std::mt19937_64 rng(opt.seed + 13);
        for (MajoranaKind kind : {MajoranaKind::plus, MajoranaKind::minus}) {
            KfgState st = generic_level_state(s.ms, {0, 1}, rng, kind, 0.5);
            GlobalSummary g = global_summary(local_fields(st, s.k), s.k);
            c.value = std::max(c.value, g.momentum_relation_residual / (s.k.units.c * g.T00_integral));
        }
    }
    c.pass = c.value <= c.tol;
    c.detail = "<<Psi,cp Psi>> - J_E/c for Majorana states, 10 BCs (same edge quadrature)";
    out.push_back(c);

    // J_E from the edge quadrature against a plain trapezoid of the local field
    CheckResult q{"current_quadrature_consistency", true, 0, 1e-3, ""};
    for (const auto& e : majorana_cases()) {
        Setup s = make_setup(e.params, kPi, 256, nonneg_quadratic(kPi));
        std::mt19937_64 rng(opt.seed + 16);
        KfgState st = generic_level_state(s.ms, {0, 1}, rng, MajoranaKind::plus, 0.5);
        ObservableFields f = local_fields(st, s.k);
        GlobalSummary g = global_summary(f, s.k);
        cd direct = trapezoid(f.j_E, s.k.grid.dx);
        q.value = std::max(q.value, std::abs(g.J_E - direct) / (s.k.units.c * g.T00_integral));
    }
    q.pass = q.value <= q.tol;
    q.detail = "|J_E - trapezoid(j_E)| / (c int T00), n=256, 10 BCs";
    out.push_back(q);

    CheckResult ci{"energy_integral_real", true, 0, 1e-11, ""};
    for (const auto& e : catalog_cases()) {
        Setup s = make_setup(e.params, kPi, 256, nonneg_quadratic(kPi));
        std::mt19937_64 rng(opt.seed + 14);
        KfgState st = generic_level_state(s.ms, {0, 1}, rng, MajoranaKind::none, 0.5);
        GlobalSummary g = global_summary(local_fields(st, s.k), s.k);
        ci.value = std::max(ci.value, std::abs(g.energy_integral.imag()) / g.T00_integral);
    }
    ci.pass = ci.value <= ci.tol;
    ci.detail = "|Im int rho_E| for complex states, 12 BCs";
    out.push_back(ci);
    return out;
}

std::vector<CheckResult> aux_decompositions(const VerifyOptions& opt) {
    CheckResult ex{"decomposition_exact_forms", true, 0, 1e-12, ""};
    CheckResult fd{"decomposition_fd_forms", true, 0, 1e-3, ""};
    CheckResult sp{"decomposition_spatial_forms", true, 0, 1e-3, ""};
    CheckResult sym{"tensor_symmetry_and_realness", true, 0, 1e-13, ""};
    for (const char* tag : {"dirichlet", "periodic", "robin_mit_plus", "rotation:0.7"}) {
        auto pot = nonneg_quadratic(kPi);
        Setup s = make_setup(params_from_tag(tag), kPi, 257, pot);
        std::mt19937_64 rng(opt.seed + 15);
        KfgState st = generic_level_state(s.ms, {0, 1}, rng, MajoranaKind::plus, 0.0);
        HamiltonianProvider hp(s.k, pot);
        double dt = 0.2 * s.k.grid.dx;
        auto states = evolve_states(kfg_to_fv(st, s.k.units), hp, dt, 100);
        std::vector<KfgState> w(states.end() - 3, states.end());
        DecompositionResiduals d = decomposition_checks(w, s.k, pot);
        ex.value = std::max({ex.value, d.rho_E_energy_form_exact / d.scale_rho_E, d.j_E_form_exact / d.scale_j_E});
        fd.value = std::max({fd.value, d.rho_E_energy_form_fd / d.scale_rho_E, d.j_E_form_fd / d.scale_j_E});
        sp.value = std::max({sp.value, d.rho_E_T00_form / d.scale_rho_E, d.majorana_gradient_form / d.scale_j_E});
        sym.value = std::max({sym.value, d.tensor_symmetry / d.scale_j_E, d.rho_tilde_real / d.scale_rho_E});
    }
    for (CheckResult* c : {&ex, &fd, &sp, &sym}) c->pass = c->value <= c->tol;
    ex.detail = "rho_E and j_E splits with on-shell time derivatives";
    fd.detail = "same splits, time derivatives by centred differences over snapshots (n=256, dt=0.2dx)";
    sp.detail = "T00 form and Majorana gradient form, centred spatial differences";
    sym.detail = "T01 = cT10 and Im rho~_E = 0 on Majorana states";
    return {ex, fd, sp, sym};
}

}  // namespace

bool VerifySuiteResult::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n = {"bc_algebra", "conservation", "boundary_currents",
                                               "positivity", "decompositions", "convergence"};
    return n;
}

std::string criterion_suite(int c) {
    switch (c) {
        case 1:
        case 2: return "bc_algebra";
        case 4:
        case 5: return "conservation";
        case 6: return "boundary_currents";
        case 7: return "positivity";
        case 9: return "decompositions";
        case 3:
        case 8: return "convergence";
        default: throw Error(ErrorCode::ConfigError, "criteria are numbered 1..9");
    }
}

CheckResult criterion_check(int c, const VerifyOptions& opt) {
    CheckResult r;
    switch (c) {
        case 1: r = c1_bc_algebra(opt); break;
        case 2: r = c2_pseudo_hermiticity(opt); break;
        case 3: r = c3_dispersion(opt); break;
        case 4: r = c4_conservation(opt); break;
        case 5: r = c5_majorana(opt); break;
        case 6: r = c6_boundary_currents(opt); break;
        case 7: r = c7_positivity(opt); break;
        case 8: r = c8_convergence(opt); break;
        case 9: r = c9_dual_path(opt); break;
        default: throw Error(ErrorCode::ConfigError, "criteria are numbered 1..9");
    }
    r.name = "criterion_" + std::to_string(c) + ":" + r.name;
    return r;
}

VerifySuiteResult run_verify(const std::string& suite, const VerifyOptions& opt) {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw Error(ErrorCode::ConfigError, "unknown suite '" + suite + "'");
    VerifySuiteResult r;
    r.suite = suite;
    for (int c = 1; c <= 9; ++c)
        if (criterion_suite(c) == suite) r.checks.push_back(criterion_check(c, opt));
    std::vector<CheckResult> aux;
    if (suite == "bc_algebra") aux = aux_bc_algebra();
    else if (suite == "conservation") aux = aux_conservation(opt);
    else if (suite == "boundary_currents") aux = aux_boundary(opt);
    else if (suite == "positivity") aux = aux_positivity(opt);
    else if (suite == "decompositions") aux = aux_decompositions(opt);
    r.checks.insert(r.checks.end(), aux.begin(), aux.end());
    return r;
}

std::string suite_json(const VerifySuiteResult& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["pass"] = r.pass();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json o;
        o["name"] = c.name;
        o["pass"] = c.pass;
        o["value"] = c.value;
        o["tol"] = c.tol;
        o["detail"] = c.detail;
        arr.push_back(o);
    }
    j["checks"] = arr;
    return j.dump(2) + "\n";
}

}  // namespace kfgm
