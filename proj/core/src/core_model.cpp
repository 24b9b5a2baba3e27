#include "kfgm/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kfgm/errors.hpp"

namespace kfgm {

namespace {

bool all_finite(const CVec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    return true;
}

}  // namespace

void PhysicalUnits::validate() const {
    for (double v : {hbar, c, mass, lambda})
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorCode::InvalidParams, "physical units must be positive and finite");
}

Grid Grid::make(double a, double b, int n) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
        throw Error(ErrorCode::InvalidParams, "grid needs b > a");
    if (n < 8) throw Error(ErrorCode::InvalidParams, "grid needs at least 8 points");
    Grid g;
    g.a = a;
    g.b = b;
    g.n = n;
    g.dx = (b - a) / (n - 1);
    return g;
}

double SpatialProfile::value(double x) const {
    switch (kind) {
        case Kind::constant: return s0;
        case Kind::step: return x < x0 ? s0 : s1;
        case Kind::quadratic: return s0 + s2 * (x - x0) * (x - x0);
        case Kind::tabulated: {
            if (xs.empty()) return 0.0;
            if (x <= xs.front()) return values.front();
            if (x >= xs.back()) return values.back();
            auto it = std::upper_bound(xs.begin(), xs.end(), x);
            size_t k = static_cast<size_t>(it - xs.begin());
            double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            return (1.0 - w) * values[k - 1] + w * values[k];
        }
    }
    return 0.0;
}

double SpatialProfile::derivative(double x) const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::step: return 0.0;  // distributional part ignored
        case Kind::quadratic: return 2.0 * s2 * (x - x0);
        case Kind::tabulated: {
            if (xs.size() < 2 || x <= xs.front() || x >= xs.back()) return 0.0;
            auto it = std::upper_bound(xs.begin(), xs.end(), x);
            size_t k = static_cast<size_t>(it - xs.begin());
            return (values[k] - values[k - 1]) / (xs[k] - xs[k - 1]);
        }
    }
    return 0.0;
}

double TimeFactor::value(double t) const {
    switch (kind) {
        case Kind::constant: return 1.0;
        case Kind::sinusoidal: return offset + amplitude * std::sin(omega * t + phase);
        case Kind::linear: return 1.0 + rate * t;
    }
    return 1.0;
}

double TimeFactor::derivative(double t) const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::sinusoidal: return amplitude * omega * std::cos(omega * t + phase);
        case Kind::linear: return rate;
    }
    return 0.0;
}

RVec ScalarPotential::sample(const Grid& g, double t) const {
    RVec s(g.n);
    double f = time.value(t);
    for (int i = 0; i < g.n; ++i) s[i] = profile.value(g.x(i)) * f;
    return s;
}

RVec ScalarPotential::sample_dt(const Grid& g, double t) const {
    RVec s(g.n);
    double f = time.derivative(t);
    for (int i = 0; i < g.n; ++i) s[i] = profile.value(g.x(i)) * f;
    return s;
}

RVec ScalarPotential::sample_dx(const Grid& g, double t) const {
    RVec s(g.n);
    double f = time.value(t);
    for (int i = 0; i < g.n; ++i) s[i] = profile.derivative(g.x(i)) * f;
    return s;
}

void ScalarPotential::validate(const Grid& g, double t) const {
    if (profile.kind == SpatialProfile::Kind::tabulated) {
        if (profile.xs.size() < 2 || profile.xs.size() != profile.values.size())
            throw Error(ErrorCode::InvalidParams, "tabulated potential needs matching x/value arrays");
        if (!std::is_sorted(profile.xs.begin(), profile.xs.end()))
            throw Error(ErrorCode::InvalidParams, "tabulated potential x must be increasing");
    }
    RVec s = sample(g, t);
    for (int i = 0; i < g.n; ++i) {
        if (!std::isfinite(s[i])) throw Error(ErrorCode::InvalidParams, "potential not finite");
        if (nonneg && s[i] < 0.0) {
            std::ostringstream os;
            os << "potential negative at x=" << g.x(i) << " t=" << t;
            throw Error(ErrorCode::InvalidParams, os.str());
        }
    }
}

FvState kfg_to_fv(const KfgState& s, const PhysicalUnits& u) {
    if (s.psi.size() != s.psi_t.size())
        throw Error(ErrorCode::InvalidState, "psi and psi_t sizes differ");
    if (!all_finite(s.psi) || !all_finite(s.psi_t))
        throw Error(ErrorCode::InvalidState, "non-finite state");
    // E psi = i hbar psi_t
    CVec e_over = (cd(0.0, u.hbar / u.mc2())) * s.psi_t;
    FvState f;
    f.psi1 = 0.5 * (s.psi + e_over);
    f.psi2 = 0.5 * (s.psi - e_over);
    f.t = s.t;
    return f;
}

KfgState fv_to_kfg(const FvState& s, const PhysicalUnits& u) {
    if (s.psi1.size() != s.psi2.size())
        throw Error(ErrorCode::InvalidState, "component sizes differ");
    if (!all_finite(s.psi1) || !all_finite(s.psi2))
        throw Error(ErrorCode::InvalidState, "non-finite state");
    KfgState k;
    k.psi = s.psi1 + s.psi2;
    k.psi_t = (u.mc2() / cd(0.0, u.hbar)) * (s.psi1 - s.psi2);
    k.t = s.t;
    return k;
}

KfgState majorana_project(const KfgState& s, MajoranaKind kind) {
    if (kind == MajoranaKind::none) return s;
    KfgState r;
    r.t = s.t;
    if (kind == MajoranaKind::plus) {
        r.psi = s.psi.real().cast<cd>();
        r.psi_t = s.psi_t.real().cast<cd>();
    } else {
        r.psi = cd(0.0, 1.0) * s.psi.imag().cast<cd>();
        r.psi_t = cd(0.0, 1.0) * s.psi_t.imag().cast<cd>();
    }
    return r;
}

double majorana_tag_defect(const KfgState& s, MajoranaKind kind) {
    if (kind == MajoranaKind::none) return 0.0;
    double size = std::max(s.psi.cwiseAbs().maxCoeff(), s.psi_t.cwiseAbs().maxCoeff());
    if (size == 0.0) return 0.0;
    double bad = 0.0;
    if (kind == MajoranaKind::plus)
        bad = std::max(s.psi.imag().cwiseAbs().maxCoeff(), s.psi_t.imag().cwiseAbs().maxCoeff());
    else
        bad = std::max(s.psi.real().cwiseAbs().maxCoeff(), s.psi_t.real().cwiseAbs().maxCoeff());
    return bad / size;
}

double majorana_fv_defect(const FvState& s, MajoranaKind kind) {
    if (kind == MajoranaKind::none) return 0.0;
    double sign = kind == MajoranaKind::plus ? 1.0 : -1.0;
    double num = (s.psi1 - sign * s.psi2.conjugate()).squaredNorm() +
                 (s.psi2 - sign * s.psi1.conjugate()).squaredNorm();
    double den = s.psi1.squaredNorm() + s.psi2.squaredNorm();
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

}  // namespace kfgm
