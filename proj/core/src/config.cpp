#include "kfgm/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "kfgm/errors.hpp"

namespace kfgm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

int integer(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) fail(std::string("'") + key + "' must be an integer");
    return j.at(key).get<int>();
}

std::vector<double> numbers(const json& j, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) fail(std::string("'") + key + "' must be an array");
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) fail(std::string("'") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

SpatialProfile parse_profile(const json& j) {
    SpatialProfile p;
    std::string k = j.value("kind", "constant");
    if (k == "constant") p.kind = SpatialProfile::Kind::constant;
    else if (k == "step") p.kind = SpatialProfile::Kind::step;
    else if (k == "quadratic") p.kind = SpatialProfile::Kind::quadratic;
    else if (k == "tabulated") p.kind = SpatialProfile::Kind::tabulated;
    else fail("unknown potential profile '" + k + "'");
    p.s0 = num(j, "s0", 0.0);
    p.s1 = num(j, "s1", 0.0);
    p.s2 = num(j, "s2", 0.0);
    p.x0 = num(j, "x0", 0.0);
    p.xs = numbers(j, "xs");
    p.values = numbers(j, "values");
    if (p.kind == SpatialProfile::Kind::tabulated &&
        (p.xs.size() < 2 || p.xs.size() != p.values.size()))
        fail("tabulated profile needs matching 'xs' and 'values' with at least two points");
    return p;
}

TimeFactor parse_time(const json& j) {
    TimeFactor t;
    std::string k = j.value("kind", "constant");
    if (k == "constant") t.kind = TimeFactor::Kind::constant;
    else if (k == "sinusoidal") t.kind = TimeFactor::Kind::sinusoidal;
    else if (k == "linear") t.kind = TimeFactor::Kind::linear;
    else fail("unknown time factor '" + k + "'");
    t.offset = num(j, "offset", 0.0);
    t.amplitude = num(j, "amplitude", 1.0);
    t.omega = num(j, "omega", 0.0);
    t.phase = num(j, "phase", 0.0);
    t.rate = num(j, "rate", 0.0);
    return t;
}

CVec complex_array(const json& j, const char* re, const char* im, int n) {
    std::vector<double> r = numbers(j, re), i = numbers(j, im);
    if (i.empty()) i.assign(r.size(), 0.0);
    if (static_cast<int>(r.size()) != n || static_cast<int>(i.size()) != n)
        fail(std::string("tabulated '") + re + "' must have one entry per grid point");
    CVec v(n);
    for (int k = 0; k < n; ++k) v[k] = cd(r[k], i[k]);
    return v;
}

}  // namespace

const char* kind_name(MajoranaKind k) {
    switch (k) {
        case MajoranaKind::plus: return "plus";
        case MajoranaKind::minus: return "minus";
        default: return "none";
    }
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("config must be a JSON object");

    ExperimentConfig c;
    try {
        if (j.contains("units")) {
            const json& u = j.at("units");
            c.units.hbar = num(u, "hbar", 1.0);
            c.units.c = num(u, "c", 1.0);
            c.units.mass = num(u, "mass", 1.0);
            c.units.lambda = num(u, "lambda", 1.0);
        }
        c.units.validate();

        if (j.contains("grid")) {
            const json& g = j.at("grid");
            c.a = num(g, "a", c.a);
            c.b = num(g, "b", c.b);
            c.n = integer(g, "n", c.n);
        }
        (void)c.grid();

        if (j.contains("potential")) {
            const json& p = j.at("potential");
            if (p.contains("profile")) c.potential.profile = parse_profile(p.at("profile"));
            if (p.contains("time")) c.potential.time = parse_time(p.at("time"));
            c.potential.nonneg = p.value("nonneg", false);
        }
        c.potential.validate(c.grid(), 0.0);

        if (!j.contains("bc")) fail("missing 'bc'");
        const json& bc = j.at("bc");
        if (bc.is_string()) {
            c.bc_tag = bc.get<std::string>();
            c.bc = params_from_tag(c.bc_tag, c.units.lambda);
        } else if (bc.is_object()) {
            c.bc.m0 = num(bc, "m0", 0.0);
            c.bc.m1 = num(bc, "m1", 0.0);
            c.bc.m2 = num(bc, "m2", 0.0);
            c.bc.m3 = num(bc, "m3", 0.0);
            c.bc.mu = num(bc, "mu", 0.0);
            c.bc.lambda = num(bc, "lambda", c.units.lambda);
        } else {
            fail("'bc' must be a catalog tag or an object of parameters");
        }
        c.bc.validate();

        std::string kind = j.value("majorana", "plus");
        if (kind == "plus") c.kind = MajoranaKind::plus;
        else if (kind == "minus") c.kind = MajoranaKind::minus;
        else if (kind == "none") c.kind = MajoranaKind::none;
        else fail("'majorana' must be plus, minus or none");

        if (j.contains("state")) {
            const json& s = j.at("state");
            c.state.t0 = num(s, "t0", 0.0);
            if (s.contains("modes")) {
                c.state.kind = StateSpec::Kind::modes;
                c.state.modes.clear();
                for (const auto& m : s.at("modes")) {
                    ModeCoefficient mc;
                    mc.index = integer(m, "index", 0);
                    mc.amplitude = num(m, "amplitude", 1.0);
                    mc.phase = num(m, "phase", 0.0);
                    c.state.modes.push_back(mc);
                }
            } else if (s.contains("random_modes")) {
                c.state.kind = StateSpec::Kind::random_modes;
                c.state.random_count = integer(s, "random_modes", 2);
                if (c.state.random_count < 1) fail("'random_modes' must be at least 1");
            } else if (s.contains("tabulated")) {
                c.state.kind = StateSpec::Kind::tabulated;
                const json& t = s.at("tabulated");
                c.state.psi = complex_array(t, "psi_re", "psi_im", c.n);
                c.state.psi_t = complex_array(t, "psi_t_re", "psi_t_im", c.n);
            }
        }

        if (j.contains("evolution")) {
            const json& e = j.at("evolution");
            c.evolution.dt = num(e, "dt", c.evolution.dt);
            c.evolution.steps = integer(e, "steps", c.evolution.steps);
            c.evolution.record_every = integer(e, "record_every", c.evolution.record_every);
        }
        c.evolution.validate();

        if (j.contains("output")) {
            const json& o = j.at("output");
            c.out_dir = o.value("dir", c.out_dir);
            c.prefix = o.value("prefix", c.prefix);
        }
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
                fail("'seed' must be a non-negative integer");
            c.seed = j.at("seed").get<std::uint64_t>();
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        fail(e.what());
    } catch (const json::exception& e) {
        fail(std::string("bad config value: ") + e.what());
    }
    // output location does not change results
    json h = j;
    h.erase("output");
    c.canonical = h.dump();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(cfg.canonical); }

KfgState initial_state(const ExperimentConfig& cfg, const ModeSet& modes) {
    switch (cfg.state.kind) {
        case StateSpec::Kind::modes:
            return synthesize_state(modes, cfg.state.modes, cfg.state.t0, cfg.kind);
        case StateSpec::Kind::random_modes: {
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> amp(0.2, 1.0), ph(0.0, 2.0 * 3.141592653589793);
            std::vector<ModeCoefficient> cs;
            int count = std::min<int>(cfg.state.random_count, static_cast<int>(modes.modes.size()));
            for (int i = 0; i < count; ++i) {
                double a = amp(rng);
                double p = ph(rng);
                cs.push_back({i, a, p});
            }
            return synthesize_state(modes, cs, cfg.state.t0, cfg.kind);
        }
        case StateSpec::Kind::tabulated: {
            KfgState s{cfg.state.psi, cfg.state.psi_t, cfg.state.t0};
            if (cfg.kind != MajoranaKind::none && majorana_tag_defect(s, cfg.kind) > 1e-12)
                fail(std::string("tabulated state is not Majorana-") + kind_name(cfg.kind));
            return s;
        }
    }
    return {};
}

}  // namespace kfgm
