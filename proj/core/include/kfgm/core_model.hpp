#pragma once
#include <complex>
#include <vector>

#include <Eigen/Core>

namespace kfgm {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// hbar, c, m and the boundary length scale lambda. Natural units by default.
struct PhysicalUnits {
    double hbar = 1.0;
    double c = 1.0;
    double mass = 1.0;
    double lambda = 1.0;

    void validate() const;
    double mc2() const { return mass * c * c; }
};

/// Uniform grid on [a,b] including both endpoints.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    int n = 8;
    double dx = 1.0 / 7.0;

    static Grid make(double a, double b, int n);
    double x(int i) const { return a + dx * i; }
    double length() const { return b - a; }
};

struct SpatialProfile {
    enum class Kind { constant, step, quadratic, tabulated };
    Kind kind = Kind::constant;
    double s0 = 0.0;  // constant value, step left value, quadratic offset
    double s1 = 0.0;  // step right value
    double s2 = 0.0;  // quadratic curvature
    double x0 = 0.0;  // step position, quadratic centre
    std::vector<double> xs, values;  // tabulated, linear interpolation

    double value(double x) const;
    double derivative(double x) const;
};

struct TimeFactor {
    enum class Kind { constant, sinusoidal, linear };
    Kind kind = Kind::constant;
    double offset = 0.0;     // sinusoidal: offset + amplitude*sin(omega t + phase)
    double amplitude = 1.0;
    double omega = 0.0;
    double phase = 0.0;
    double rate = 0.0;       // linear: 1 + rate*t

    double value(double t) const;
    double derivative(double t) const;
};

/// Lorentz scalar S(x,t) = profile(x) * time_factor(t).
struct ScalarPotential {
    SpatialProfile profile;
    TimeFactor time;
    bool nonneg = false;

    bool is_static() const { return time.kind == TimeFactor::Kind::constant; }
    double value(double x, double t) const { return profile.value(x) * time.value(t); }
    RVec sample(const Grid& g, double t) const;
    RVec sample_dt(const Grid& g, double t) const;
    RVec sample_dx(const Grid& g, double t) const;
    /// throws InvalidParams if non-finite, or negative while nonneg is set
    void validate(const Grid& g, double t) const;
};

enum class MajoranaKind { none, plus, minus };

struct KfgState {
    CVec psi;
    CVec psi_t;
    double t = 0.0;
};

struct FvState {
    CVec psi1;
    CVec psi2;
    double t = 0.0;
};

FvState kfg_to_fv(const KfgState& s, const PhysicalUnits& u);
KfgState fv_to_kfg(const FvState& s, const PhysicalUnits& u);

/// plus keeps real parts, minus keeps i*Im; none returns the input.
KfgState majorana_project(const KfgState& s, MajoranaKind kind);

/// max(|Im psi|,|Im psi_t|) for plus, real parts for minus, relative to the state size
double majorana_tag_defect(const KfgState& s, MajoranaKind kind);

/// ||Psi -/+ tau1 Psi*|| / ||Psi||
double majorana_fv_defect(const FvState& s, MajoranaKind kind);

}  // namespace kfgm
