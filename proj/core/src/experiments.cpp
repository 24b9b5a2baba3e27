#include "kfgm/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "json.hpp"
#include "kfgm/errors.hpp"
#include "kfgm/harness/report.hpp"

namespace kfgm {

using ojson = nlohmann::ordered_json;

namespace {

ojson opt_bool(const std::optional<bool>& b) { return b ? ojson(*b) : ojson(nullptr); }
ojson opt_str(const std::optional<std::string>& s) { return s ? ojson(*s) : ojson(nullptr); }

ojson params_json(const BcParams& p) {
    ojson j;
    j["m0"] = p.m0;
    j["m1"] = p.m1;
    j["m2"] = p.m2;
    j["m3"] = p.m3;
    j["mu"] = p.mu;
    j["lambda"] = p.lambda;
    return j;
}

std::string join(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

std::string bc_label(const ExperimentConfig& cfg) {
    if (!cfg.bc_tag.empty()) return cfg.bc_tag;
    auto m = match_catalog(cfg.bc);
    return m ? m->tag : std::string("raw");
}

void common_header(CsvWriter& w, const ExperimentConfig& cfg) {
    w.comment("config_hash=" + config_hash(cfg));
    w.comment("bc=" + bc_label(cfg) + " majorana=" + kind_name(cfg.kind) +
              " n=" + std::to_string(cfg.n) + " a=" + fmt_num(cfg.a) + " b=" + fmt_num(cfg.b));
}

void spectral_header(CsvWriter& w, const ModeSet& ms) {
    w.comment("negative_E2_levels=" + std::to_string(ms.diagnostics.size()));
    std::string vals;
    for (double e : ms.diagnostics) vals += (vals.empty() ? "" : " ") + fmt_num(e);
    if (!vals.empty()) w.comment("negative_E2_values=" + vals);
    w.comment(std::string("nonreal_spectrum=") + (ms.diagnostics.empty() ? "false" : "true"));
}


// no negative zeros in reports
double nz(double v) { return v + 0.0; }

}  // namespace

std::string classify_json(const BcParams& p) {
    BcReport r;
    try {
        r = classify(p);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidParams) throw Error(ErrorCode::ConfigError, e.what());
        throw;
    }
    ojson j;
    j["params"] = params_json(p);
    j["majorana_compatible"] = r.majorana_compatible;
    j["confining"] = r.confining;
    j["tau1_condition"] = opt_bool(r.tau1_condition);
    j["energy_condition"] = opt_bool(r.energy_condition);
    j["named_match"] = opt_str(r.named_match);
    j["named_case"] = opt_str(r.named_case);
    if (r.majorana_compatible) {
        try {
            BcRealization m = m_matrix(p);
            ojson rj;
            if (m.coupled()) {
                rj["variant"] = "coupled";
                rj["M"] = {{nz(m.M(0, 0)), nz(m.M(0, 1))}, {nz(m.M(1, 0)), nz(m.M(1, 1))}};
            } else {
                rj["variant"] = "separated";
                rj["a"] = {nz(m.alpha_a), nz(m.beta_a)};
                rj["b"] = {nz(m.alpha_b), nz(m.beta_b)};
            }
            j["realization"] = rj;
        } catch (const Error&) {
            j["realization"] = nullptr;
        }
    } else {
        j["realization"] = nullptr;
    }
    ojson conds = ojson::array();
    for (const auto& c : r.conditions) conds.push_back({{"name", c.name}, {"value", nz(c.value)}});
    j["conditions"] = conds;
    return j.dump(2) + "\n";
}

std::string run_classify(const ExperimentConfig& cfg) { return classify_json(cfg.bc); }

std::vector<std::vector<int>> level_groups(const ModeSet& ms) {
    std::vector<std::vector<int>> out;
    for (int i = 0; i < static_cast<int>(ms.modes.size()); ++i) {
        double e = ms.modes[i].E2;
        if (!out.empty()) {
            double e0 = ms.modes[out.back().front()].E2;
            if (std::abs(e - e0) <= 1e-8 * std::max(1.0, std::abs(e0))) {
                out.back().push_back(i);
                continue;
            }
        }
        out.push_back({i});
    }
    return out;
}

KfgState generic_level_state(const ModeSet& ms, const std::vector<int>& levels,
                             std::mt19937_64& rng, MajoranaKind kind, double t) {
    auto groups = level_groups(ms);
    std::uniform_real_distribution<double> amp(0.5, 1.0), ph(0.0, 6.283185307179586);
    std::bernoulli_distribution sign(0.5);
    std::vector<ModeCoefficient> cs;
    for (int l : levels) {
        if (l < 0 || l >= static_cast<int>(groups.size()))
            throw Error(ErrorCode::InvalidMode, "level index out of range");
        double phase = ph(rng);
        for (int idx : groups[l]) {
            double a = amp(rng) * (sign(rng) ? 1.0 : -1.0);
            cs.push_back({idx, a, phase});
        }
    }
    return synthesize_state(ms, cs, t, kind);
}

const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols = {
        "t", "norm", "energy_mean", "momentum_mean", "J_E", "J_tilde_E", "j_a", "j_b", "jE_a",
        "jE_b", "jtildeE_a", "jtildeE_b", "surface_term", "surface_identity_residual",
        "current_split_residual",
        // imaginary parts and extras
        "energy_imag", "momentum_mean_imag", "J_E_imag", "j_a_imag", "j_b_imag", "jE_a_imag",
        "jE_b_imag", "T00_integral", "momentum_relation_residual"};
    return cols;
}

std::vector<double> summary_row(const GlobalSummary& g) {
    return {g.t,
            g.norm,
            g.energy_mean,
            g.momentum_mean.real(),
            g.J_E.real(),
            g.J_tilde_E,
            g.j_a.real(),
            g.j_b.real(),
            g.jE_a.real(),
            g.jE_b.real(),
            g.jtildeE_a,
            g.jtildeE_b,
            g.surface_term,
            g.surface_identity_residual,
            g.current_split_residual,
            g.energy_integral.imag(),
            g.momentum_mean.imag(),
            g.J_E.imag(),
            g.j_a.imag(),
            g.j_b.imag(),
            g.jE_a.imag(),
            g.jE_b.imag(),
            g.T00_integral,
            g.momentum_relation_residual};
}

std::vector<std::string> run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir) {
    KineticMatrix k = assemble_kinetic(cfg.grid(), cfg.potential, 0.0, cfg.bc, cfg.units);
    ModeSet ms = eigenmodes(k);
    CsvWriter w({"index", "E2", "E", "diagnostic"});
    common_header(w, cfg);
    spectral_header(w, ms);
    w.comment("max_residual=" + fmt_num(ms.max_residual));
    for (size_t i = 0; i < ms.spectrum.size(); ++i) {
        const auto& s = ms.spectrum[i];
        double E = s.E2 > 0 ? std::sqrt(s.E2) : std::nan("");
        w.row({static_cast<double>(i), s.E2, E, s.diagnostic ? 1.0 : 0.0});
    }
    std::string path = join(out_dir, cfg.prefix + "_spectrum.csv");
    w.save(path);
    return {path};
}

std::vector<std::string> run_evolve(const ExperimentConfig& cfg, const std::string& out_dir) {
    const Grid grid = cfg.grid();
    KineticMatrix k = assemble_kinetic(grid, cfg.potential, cfg.state.t0, cfg.bc, cfg.units);
    ModeSet ms = eigenmodes(k);
    KfgState s0 = initial_state(cfg, ms);
    HamiltonianProvider hp(k, cfg.potential);
    Trajectory tr = evolve(kfg_to_fv(s0, cfg.units), hp, cfg.evolution);

    CsvWriter traj({"step", "t", "tau3_norm", "tau3_energy", "tau3_energy_imag", "majorana_defect",
                    "max_abs_psi", "max_abs_psi_t"});
    CsvWriter summ(summary_columns());
    for (CsvWriter* w : {&traj, &summ}) {
        common_header(*w, cfg);
        spectral_header(*w, ms);
        w->comment("dt=" + fmt_num(cfg.evolution.dt) + " steps=" + std::to_string(cfg.evolution.steps) +
                   " record_every=" + std::to_string(cfg.evolution.record_every));
    }
    for (const Snapshot& sn : tr.snapshots) {
        double step = std::round((sn.t - cfg.state.t0) / cfg.evolution.dt);
        double defect = majorana_fv_defect(kfg_to_fv(sn.state, cfg.units), cfg.kind);
        double mp = sn.state.psi.size() ? sn.state.psi.cwiseAbs().maxCoeff() : 0.0;
        double mpt = sn.state.psi_t.size() ? sn.state.psi_t.cwiseAbs().maxCoeff() : 0.0;
        traj.row({step, sn.t, sn.summary.norm, sn.summary.energy_integral.real(),
                  sn.summary.energy_integral.imag(), defect, mp, mpt});
        summ.row(summary_row(sn.summary));
    }

    const Snapshot& last = tr.snapshots.back();
    KineticMatrix kl = hp.kinetic_at(last.t);
    ObservableFields f = local_fields(last.state, kl);
    std::vector<std::string> cols = {"x", "psi_re", "psi_im"};
    const char* names[] = {"rho", "j", "rho_E", "j_E", "rho_tilde_E", "T00", "cT10", "T11"};
    for (const char* n : names) {
        cols.push_back(std::string(n) + "_re");
        cols.push_back(std::string(n) + "_im");
    }
    CsvWriter fw(cols);
    common_header(fw, cfg);
    fw.comment("t=" + fmt_num(last.t));
    const CVec* fields[] = {&f.rho, &f.j, &f.rho_E, &f.j_E, &f.rho_tilde_E, &f.T00, &f.cT10, &f.T11};
    for (int i = 0; i < grid.n; ++i) {
        std::vector<double> r = {grid.x(i), f.psi[i].real(), f.psi[i].imag()};
        for (const CVec* v : fields) {
            r.push_back((*v)[i].real());
            r.push_back((*v)[i].imag());
        }
        fw.row(r);
    }

    std::vector<std::string> files = {join(out_dir, cfg.prefix + "_trajectory.csv"),
                                      join(out_dir, cfg.prefix + "_summary.csv"),
                                      join(out_dir, cfg.prefix + "_fields.csv")};
    traj.save(files[0]);
    summ.save(files[1]);
    fw.save(files[2]);
    return files;
}

std::string run_enumerate(long samples, double tol, std::uint64_t seed) {
    if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be positive");
    if (!(tol > 0)) throw Error(ErrorCode::ConfigError, "tol must be positive");
    auto cluster_json = [](const std::vector<ConfiningSolution>& v) {
        ojson arr = ojson::array();
        for (const auto& s : v) {
            ojson c = params_json(s.params);
            c["hits"] = s.hits;
            auto m = match_catalog(s.params);
            c["named_match"] = m ? ojson(m->tag) : ojson(nullptr);
            c["named_case"] = m ? ojson(m->roman) : ojson(nullptr);
            arr.push_back(c);
        }
        return arr;
    };
    ojson j;
    j["samples"] = samples;
    j["tol"] = tol;
    j["seed"] = seed;
    j["confining"] = cluster_json(enumerate_confining_solutions(samples, tol, seed));
    j["energy_slice_m1_plus"] = enumerate_energy_slice(samples, tol, 1.0, seed + 1);
    j["energy_slice_m1_minus"] = enumerate_energy_slice(samples, tol, -1.0, seed + 2);
    j["energy_confining"] = cluster_json(enumerate_energy_confining(samples, tol, seed + 3));
    return j.dump(2) + "\n";
}

}  // namespace kfgm
