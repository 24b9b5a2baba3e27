#include "kfgm/observables.hpp"

#include <algorithm>
#include <cmath>

#include "kfgm/errors.hpp"

namespace kfgm {

namespace {

const cd I(0.0, 1.0);

double max_abs(const CVec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// max |v_i| over i in [lo, hi)
double max_abs_range(const CVec& v, int lo, int hi) {
    double m = 0.0;
    for (int i = lo; i < hi; ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

CVec central_dx(const CVec& f, double dx) {
    const int n = static_cast<int>(f.size());
    CVec d = CVec::Zero(n);
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    return d;
}

// Im(psi* E psi) generalised form used for both Majorana kinds: hbar Re(psi* psi_t)
CVec im_psi_Epsi(const CVec& psi, const CVec& psi_t, double hbar) {
    return (hbar * (psi.conjugate().cwiseProduct(psi_t)).real()).cast<cd>();
}

void check_window(const std::vector<KfgState>& w) {
    if (w.size() < 3) throw Error(ErrorCode::InsufficientData, "need three consecutive snapshots");
    double d1 = w[1].t - w[0].t, d2 = w[2].t - w[1].t;
    if (!(d1 > 0) || std::abs(d1 - d2) > 1e-9 * std::max(1.0, std::abs(d1)))
        throw Error(ErrorCode::InsufficientData, "snapshots must be equally spaced in time");
}

}  // namespace

ObservableFields local_fields(const KfgState& s, const KineticMatrix& k) {
    const PhysicalUnits& u = k.units;
    const int n = k.grid.n;
    if (s.psi.size() != n || s.psi_t.size() != n)
        throw Error(ErrorCode::InvalidState, "state size does not match grid");
    const double hbar = u.hbar, c = u.c, m = u.mass, mc2 = u.mc2();
    ObservableFields f;
    f.t = s.t;
    f.psi = s.psi;
    f.psi_t = s.psi_t;
    f.psi_x = derivative_field(k, s.psi);
    f.psi_tx = derivative_field(k, s.psi_t);
    f.L_psi = apply_full(k, s.psi);

    const CVec& p = f.psi;
    const CVec& pt = f.psi_t;
    const CVec& px = f.psi_x;
    const CVec& ptx = f.psi_tx;
    CVec Ep = (I * hbar) * pt;                  // E psi
    CVec Epc = (I * hbar) * pt.conjugate();     // E psi*
    CVec cpp = (-I * hbar * c) * px;            // c p psi
    CVec cppc = (-I * hbar * c) * px.conjugate();
    CVec cpEp = (-I * hbar * c) * ((I * hbar) * ptx);
    RVec V = RVec::Constant(n, mc2 * mc2) + (2.0 * mc2) * k.s_nodes;

    f.rho.resize(n);
    f.j.resize(n);
    f.rho_E.resize(n);
    f.j_E.resize(n);
    f.rho_tilde_E.resize(n);
    f.T00.resize(n);
    f.cT10.resize(n);
    f.T11.resize(n);
    f.T01_check.resize(n);
    for (int i = 0; i < n; ++i) {
        cd pc = std::conj(p[i]);
        f.rho[i] = (pc * Ep[i] - Epc[i] * p[i]) / (2.0 * mc2);
        f.j[i] = (pc * cpp[i] - cppc[i] * p[i]) / (2.0 * m * c);
        // E^2 psi on-shell
        f.rho_E[i] = (pc * f.L_psi[i] - Epc[i] * Ep[i]) / (2.0 * mc2);
        f.j_E[i] = (pc * cpEp[i] - cppc[i] * Ep[i]) / (2.0 * m * c);
        f.rho_tilde_E[i] = (pc * f.L_psi[i] + std::conj(f.L_psi[i]) * p[i]) / (2.0 * mc2);
        cd kin_t = -Epc[i] * Ep[i];      // hbar^2 |psi_t|^2
        cd kin_x = -cppc[i] * cpp[i];    // hbar^2 c^2 |psi_x|^2
        cd pot = V[i] * pc * p[i];
        f.T00[i] = (kin_t + kin_x + pot) / (2.0 * mc2);
        f.cT10[i] = -(Epc[i] * cpp[i] + cppc[i] * Ep[i]) / (2.0 * m * c);
        f.T11[i] = (-kin_t - kin_x + pot) / (2.0 * mc2);
        f.T01_check[i] = -(hbar * hbar / m) * std::real(pt[i] * std::conj(px[i]));
    }
    return f;
}

TwoComponentFields two_component_fields(const FvState& s, const KineticMatrix& k) {
    const PhysicalUnits& u = k.units;
    const double hbar = u.hbar, m = u.mass, mc2 = u.mc2();
    const int n = k.grid.n;
    CVec g = s.psi1 + s.psi2;
    CVec Lg = apply_full(k, g);
    CVec X = (Lg - (mc2 * mc2) * g) / (2.0 * mc2);
    CVec h1 = X + mc2 * s.psi1;
    CVec h2 = -X - mc2 * s.psi2;
    CVec d1 = (-I / hbar) * h1;  // time derivative of psi1
    CVec d2 = (-I / hbar) * h2;
    CVec x1 = derivative_field(k, s.psi1), x2 = derivative_field(k, s.psi2);
    CVec dx1 = derivative_field(k, d1), dx2 = derivative_field(k, d2);

    // (B a)^H (B b) with B = [[1,1],[-1,-1]]
    auto bdot = [](cd a1, cd a2, cd b1, cd b2) {
        cd ba1 = a1 + a2, ba2 = -a1 - a2, bb1 = b1 + b2, bb2 = -b1 - b2;
        return std::conj(ba1) * bb1 + std::conj(ba2) * bb2;
    };

    TwoComponentFields t;
    t.rho.resize(n);
    t.j.resize(n);
    t.rho_E.resize(n);
    t.j_E.resize(n);
    for (int i = 0; i < n; ++i) {
        cd p1 = s.psi1[i], p2 = s.psi2[i];
        t.rho[i] = std::conj(p1) * p1 - std::conj(p2) * p2;
        t.rho_E[i] = std::conj(p1) * h1[i] - std::conj(p2) * h2[i];
        t.j[i] = (I * hbar / (2.0 * m)) * 0.5 *
                 (bdot(x1[i], x2[i], p1, p2) - bdot(p1, p2, x1[i], x2[i]));
        t.j_E[i] = -(hbar * hbar / (2.0 * m)) * 0.5 *
                   (bdot(x1[i], x2[i], d1[i], d2[i]) - bdot(p1, p2, dx1[i], dx2[i]));
    }
    return t;
}

BoundaryPair boundary_j(const ObservableFields& f, const BcParams& bc, const PhysicalUnits& u) {
    const int n = static_cast<int>(f.j.size());
    BoundaryPair r;
    r.a_direct = f.j[0];
    r.b = f.j[n - 1];
    r.a = r.a_direct;
    double s, c;
    mu_trig(bc.mu, s, c);
    double den = bc.m0 + c;
    if (std::abs(den) > 1e-8) {
        cd coef = cd(bc.m1, bc.m2) / den;
        r.a = -(u.hbar / (u.mass * bc.lambda)) * std::imag(coef * std::conj(f.psi[0]) * f.psi[n - 1]);
        r.formula_used = true;
    }
    return r;
}

BoundaryPair boundary_j_E(const ObservableFields& f, const BcParams& bc, const PhysicalUnits& u) {
    const int n = static_cast<int>(f.j_E.size());
    BoundaryPair r;
    r.a_direct = f.j_E[0];
    r.b = f.j_E[n - 1];
    r.a = r.a_direct;
    double s, c;
    mu_trig(bc.mu, s, c);
    double den = bc.m0 + c;
    if (std::abs(bc.m2) <= kConditionTol && std::abs(den) > 1e-8) {
        cd Ea = I * u.hbar * f.psi_t[0], Eb = I * u.hbar * f.psi_t[n - 1];
        r.a = (I * u.hbar / (2.0 * u.mass * bc.lambda)) * (bc.m1 / den) *
              (std::conj(f.psi[0]) * Eb - std::conj(f.psi[n - 1]) * Ea);
        r.formula_used = true;
    }
    return r;
}

BoundaryTilde boundary_jtilde_E(const ObservableFields& f) {
    const int n = static_cast<int>(f.cT10.size());
    BoundaryTilde r;
    r.a = f.cT10[0].real();
    r.b = f.cT10[n - 1].real();
    r.difference = r.b - r.a;
    return r;
}

BoundaryEj boundary_Ej(const ObservableFields& f, const BcParams& bc, const PhysicalUnits& u) {
    const int n = static_cast<int>(f.psi.size());
    const double hbar = u.hbar, m = u.mass;
    auto direct = [&](int i) {
        cd v = std::conj(f.psi_t[i]) * f.psi_x[i] + std::conj(f.psi[i]) * f.psi_tx[i];
        return (I * hbar * hbar / (2.0 * m)) * std::imag(v);
    };
    BoundaryEj r;
    r.direct_a = direct(0);
    r.direct_b = direct(n - 1);
    r.value = r.direct_a;
    double s, c;
    mu_trig(bc.mu, s, c);
    double den = bc.m0 + c;
    if (std::abs(bc.m2) <= kConditionTol && std::abs(den) > 1e-8) {
        cd Epa_c = I * hbar * std::conj(f.psi_t[0]);  // (E psi*)(a)
        cd Epb = I * hbar * f.psi_t[n - 1];
        cd bracket = Epa_c * f.psi[n - 1] + std::conj(f.psi[0]) * Epb;
        r.value = (I * hbar / (2.0 * m * bc.lambda)) * (bc.m1 / den) * std::real(bracket);
        r.formula_used = true;
    }
    return r;
}

cd trapezoid(const CVec& f, double dx) {
    const int n = static_cast<int>(f.size());
    cd s = 0.5 * (f[0] + f[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += f[i];
    return s * dx;
}

cd edge_gradient_product(const CVec& f, const CVec& g, double dx) {
    cd s = 0.0;
    for (Eigen::Index e = 0; e + 1 < f.size(); ++e)
        s += std::conj(f[e + 1] - f[e]) * (g[e + 1] - g[e]);
    return s / dx;
}

cd edge_average_derivative(const CVec& f, const CVec& g) {
    cd s = 0.0;
    for (Eigen::Index e = 0; e + 1 < f.size(); ++e) s += 0.5 * (f[e] + f[e + 1]) * (g[e + 1] - g[e]);
    return s;
}

GlobalSummary global_summary(const ObservableFields& f, const KineticMatrix& k) {
    const PhysicalUnits& u = k.units;
    const double hbar = u.hbar, c = u.c, m = u.mass, mc2 = u.mc2();
    const double dx = k.grid.dx;
    const int n = k.grid.n;
    const CVec& p = f.psi;
    const CVec& pt = f.psi_t;
    CVec pc = p.conjugate(), ptc = pt.conjugate();

    GlobalSummary g;
    g.t = f.t;
    g.norm = trapezoid(f.rho, dx).real();
    g.energy_integral = trapezoid(f.rho_E, dx);
    g.energy_mean = g.energy_integral.real();

    CVec phi = (I * hbar / mc2) * pt;
    g.momentum_mean = 0.5 * (-I * hbar * c) *
                      (edge_average_derivative(pc, phi) + edge_average_derivative(phi.conjugate(), p));
    g.J_E = (hbar * hbar / (2.0 * m)) * (edge_average_derivative(pc, pt) - edge_average_derivative(pt, pc));
    g.J_tilde_E = -(hbar * hbar / m) * edge_average_derivative(ptc, p).real();

    g.j_a = f.j[0];
    g.j_b = f.j[n - 1];
    g.jE_a = f.j_E[0];
    g.jE_b = f.j_E[n - 1];
    g.jtildeE_a = f.cT10[0].real();
    g.jtildeE_b = f.cT10[n - 1].real();

    // (hbar/2mc) [Im(psi* c p psi)]_a^b
    auto im_term = [&](int i) { return -(hbar * hbar / (2.0 * m)) * std::real(pc[i] * f.psi_x[i]); };
    g.surface_term = im_term(n - 1) - im_term(0);

    CVec abs_p = p.cwiseAbs2().cast<cd>();
    CVec abs_pt = pt.cwiseAbs2().cast<cd>();
    double grad = edge_gradient_product(p, p, dx).real();
    double grad_term = hbar * hbar * c * c * grad / (2.0 * mc2);
    double mass_term = 0.5 * mc2 * trapezoid(abs_p, dx).real();
    double time_term = hbar * hbar * trapezoid(abs_pt, dx).real() / (2.0 * mc2);
    double pot_term = trapezoid(k.s_nodes.cast<cd>().cwiseProduct(abs_p), dx).real();
    g.positivity = {g.surface_term, grad_term, mass_term, time_term, pot_term};
    g.T00_integral = grad_term + mass_term + time_term + pot_term;
    g.surface_identity_residual = g.energy_mean - g.surface_term - g.T00_integral;

    auto split = [&](int i) { return (hbar * hbar / (2.0 * m)) * std::real(pc[i] * pt[i]); };
    g.boundary_split_term = split(n - 1) - split(0);
    g.current_split_residual = std::abs(g.J_E - g.boundary_split_term - g.J_tilde_E);
    g.momentum_relation_residual = std::abs(g.momentum_mean - g.J_E / c);
    return g;
}

double density_scale(const ObservableFields& f, const PhysicalUnits& u) {
    return max_abs(f.psi) * u.hbar * max_abs(f.psi_t) / u.mc2();
}

double current_scale(const ObservableFields& f, const PhysicalUnits& u) {
    return u.c * max_abs(f.T00);
}

ContinuityResiduals continuity_residuals(const std::vector<KfgState>& w, const KineticMatrix& k,
                                         const ScalarPotential& potential) {
    check_window(w);
    const PhysicalUnits& u = k.units;
    const double hbar = u.hbar, c = u.c;
    const double dt = w[1].t - w[0].t, dx = k.grid.dx;
    const int n = k.grid.n;
    std::vector<ObservableFields> F;
    for (int s = 0; s < 3; ++s) F.push_back(local_fields(w[s], resample_potential(k, potential, w[s].t)));
    const double t1 = w[1].t;
    RVec Sdot = potential.sample_dt(k.grid, t1);
    RVec Sx = potential.sample_dx(k.grid, t1);
    CVec a2 = F[1].psi.cwiseAbs2().cast<cd>();

    auto ddt = [&](CVec ObservableFields::*fld) { return ((F[2].*fld) - (F[0].*fld)) / (2.0 * dt); };
    auto ddx = [&](CVec ObservableFields::*fld) { return central_dx(F[1].*fld, dx); };

    CVec src_t = Sdot.cast<cd>().cwiseProduct(a2);
    CVec src_x = Sx.cast<cd>().cwiseProduct(a2);
    CVec ra = ddt(&ObservableFields::rho) + ddx(&ObservableFields::j);
    CVec rb0 = ddt(&ObservableFields::rho_E) + ddx(&ObservableFields::j_E);
    CVec rc0 = ddt(&ObservableFields::T00) + ddx(&ObservableFields::cT10);
    CVec rd0 = -ddt(&ObservableFields::cT10) / (c * c) + ddx(&ObservableFields::T11);

    // keep clear of the ghost values at the two ends
    const int lo = 2, hi = n - 2;
    ContinuityResiduals r;
    r.charge = hbar * max_abs_range(ra, lo, hi);
    r.energy = hbar * max_abs_range(rb0 - src_t, lo, hi);
    r.tensor_time = hbar * max_abs_range(rc0 - src_t, lo, hi);
    r.tensor_space = max_abs_range(rd0 - src_x, lo, hi);
    r.energy_no_source = hbar * max_abs_range(rb0, lo, hi);
    r.tensor_time_no_source = hbar * max_abs_range(rc0, lo, hi);
    r.tensor_space_no_source = max_abs_range(rd0, lo, hi);
    return r;
}

DecompositionResiduals decomposition_checks(const std::vector<KfgState>& w, const KineticMatrix& k,
                                            const ScalarPotential& potential) {
    check_window(w);
    const PhysicalUnits& u = k.units;
    const double hbar = u.hbar, c = u.c, m = u.mass, mc2 = u.mc2();
    const double dt = w[1].t - w[0].t, dx = k.grid.dx;
    const int n = k.grid.n;
    std::vector<ObservableFields> F;
    for (int s = 0; s < 3; ++s) F.push_back(local_fields(w[s], resample_potential(k, potential, w[s].t)));
    const ObservableFields& f = F[1];
    const CVec& p = f.psi;
    const CVec& pt = f.psi_t;
    const CVec& px = f.psi_x;
    const CVec& ptx = f.psi_tx;
    CVec pc = p.conjugate(), ptc = pt.conjugate();
    CVec ptt = -f.L_psi / (hbar * hbar);  // on-shell

    // a = Im(psi* E psi), b = Im(psi* c p psi)
    auto a_of = [&](const ObservableFields& g) { return im_psi_Epsi(g.psi, g.psi_t, hbar); };
    auto b_of = [&](const ObservableFields& g) {
        return (-hbar * c * (g.psi.conjugate().cwiseProduct(g.psi_x)).real()).cast<cd>();
    };

    CVec at_exact = (hbar * (ptc.cwiseProduct(pt) + pc.cwiseProduct(ptt)).real()).cast<cd>();
    CVec rhot_exact = (-(hbar / mc2) * (pc.cwiseProduct(ptt)).imag()).cast<cd>();
    CVec bt_exact =
        (-hbar * c * (ptc.cwiseProduct(px) + pc.cwiseProduct(ptx)).real()).cast<cd>();
    CVec jt_exact = ((hbar / m) * (ptc.cwiseProduct(px) + pc.cwiseProduct(ptx)).imag()).cast<cd>();

    CVec at_fd = (a_of(F[2]) - a_of(F[0])) / (2.0 * dt);
    CVec rhot_fd = (F[2].rho - F[0].rho) / (2.0 * dt);
    CVec bt_fd = (b_of(F[2]) - b_of(F[0])) / (2.0 * dt);
    CVec jt_fd = (F[2].j - F[0].j) / (2.0 * dt);

    auto rhoE_energy_form = [&](const CVec& at, const CVec& rhot) {
        CVec E_a = (I * hbar) * at;
        CVec E_rho = (I * hbar) * rhot;
        return CVec((-I / (2.0 * mc2)) * E_a + 0.5 * E_rho + f.rho_tilde_E);
    };
    auto jE_form = [&](const CVec& bt, const CVec& jt) {
        CVec E_b = (I * hbar) * bt;
        CVec E_j = (I * hbar) * jt;
        return CVec((I / (2.0 * m * c)) * E_b + 0.5 * E_j + f.cT10);
    };

    DecompositionResiduals r;
    r.scale_rho_E = max_abs(f.rho_E);
    r.scale_j_E = current_scale(f, u);
    r.rho_E_energy_form_exact = max_abs(f.rho_E - rhoE_energy_form(at_exact, rhot_exact));
    r.j_E_form_exact = max_abs(f.j_E - jE_form(bt_exact, jt_exact));
    r.rho_E_energy_form_fd = max_abs(f.rho_E - rhoE_energy_form(at_fd, rhot_fd));
    r.j_E_form_fd = max_abs(f.j_E - jE_form(bt_fd, jt_fd));

    // (i/2mc^2) c p [b] = (hbar c / 2mc^2) d_x b
    CVec E_rho_exact = (I * hbar) * rhot_exact;
    CVec t00_form = (hbar * c / (2.0 * mc2)) * central_dx(b_of(f), dx) + 0.5 * E_rho_exact + f.T00;
    r.rho_E_T00_form = max_abs_range(f.rho_E - t00_form, 2, n - 2);

    CVec grad_form = (hbar / (2.0 * m)) * central_dx(a_of(f), dx) + f.cT10;
    r.majorana_gradient_form = max_abs_range(f.j_E - grad_form, 2, n - 2);

    r.tensor_symmetry = max_abs(f.T01_check - f.cT10);
    r.rho_tilde_real = f.rho_tilde_E.imag().cwiseAbs().maxCoeff();
    return r;
}

}  // namespace kfgm
