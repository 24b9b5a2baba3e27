#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kfgm/operator_assembly.hpp"

namespace kfgm {

struct ObservableFields {
    double t = 0.0;
    CVec rho, j, rho_E, j_E, rho_tilde_E, T00, cT10, T11, T01_check;
    // ingredients, kept for boundary and residual work
    CVec psi, psi_t, psi_x, psi_tx, L_psi;
};

/// kinetic must be sampled at state.t
ObservableFields local_fields(const KfgState& state, const KineticMatrix& kinetic);

struct TwoComponentFields {
    CVec rho, j, rho_E, j_E;
};

/// rho = Psi^H t3 Psi, rho_E = Psi^H t3 E Psi and the B-pattern current forms;
/// time derivative on-shell from the grid Hamiltonian
TwoComponentFields two_component_fields(const FvState& state, const KineticMatrix& kinetic);

struct BoundaryPair {
    cd a = 0.0;                  // formula value when available, direct otherwise
    cd b = 0.0;                  // direct value at b
    cd a_direct = 0.0;
    bool formula_used = false;
};

BoundaryPair boundary_j(const ObservableFields& f, const BcParams& bc, const PhysicalUnits& u);
BoundaryPair boundary_j_E(const ObservableFields& f, const BcParams& bc, const PhysicalUnits& u);

struct BoundaryTilde {
    double a = 0.0, b = 0.0, difference = 0.0;
};
BoundaryTilde boundary_jtilde_E(const ObservableFields& f);

struct BoundaryEj {
    cd value = 0.0;   // formula at a, direct when the formula is singular or m2 != 0
    cd direct_a = 0.0;
    cd direct_b = 0.0;
    bool formula_used = false;
};
BoundaryEj boundary_Ej(const ObservableFields& f, const BcParams& bc, const PhysicalUnits& u);

struct GlobalSummary {
    double t = 0.0;
    double norm = 0.0;
    cd energy_integral = 0.0;  // full complex integral of rho_E
    double energy_mean = 0.0;
    cd momentum_mean = 0.0;
    cd J_E = 0.0;
    double J_tilde_E = 0.0;
    cd j_a = 0.0, j_b = 0.0;
    cd jE_a = 0.0, jE_b = 0.0;
    double jtildeE_a = 0.0, jtildeE_b = 0.0;
    double surface_term = 0.0;
    double T00_integral = 0.0;
    std::array<double, 5> positivity{};  // surface, gradient, mass, time-derivative, potential
    double surface_identity_residual = 0.0;  // energy_mean - surface - int T00
    double current_split_residual = 0.0;     // J_E - boundary term - J_tilde_E
    cd boundary_split_term = 0.0;            // hbar/2m [Im(psi* E psi)]_a^b
    double momentum_relation_residual = 0.0; // |<<Psi,cp Psi>> - J_E/c|
};

GlobalSummary global_summary(const ObservableFields& f, const KineticMatrix& kinetic);

/// staggered edge quadratures: sum conj(df) dg / dx and sum avg(f) dg
cd edge_gradient_product(const CVec& f, const CVec& g, double dx);
cd edge_average_derivative(const CVec& f, const CVec& g);
cd trapezoid(const CVec& f, double dx);

struct ContinuityResiduals {
    double charge = 0.0;           // E rho - p j
    double energy = 0.0;           // E rho_E - p j_E - (E S)|psi|^2
    double tensor_time = 0.0;      // E T00 - cp T10 - (E S)|psi|^2
    double tensor_space = 0.0;     // d_mu T^mu_1 - (d_x S)|psi|^2
    double energy_no_source = 0.0;
    double tensor_time_no_source = 0.0;
    double tensor_space_no_source = 0.0;
};

/// window of at least 3 equally spaced states; residual at the middle one, interior nodes
ContinuityResiduals continuity_residuals(const std::vector<KfgState>& window,
                                         const KineticMatrix& kinetic,
                                         const ScalarPotential& potential);

struct DecompositionResiduals {
    // time derivatives of densities from on-shell product rule (algebraic)
    double rho_E_energy_form_exact = 0.0;
    double j_E_form_exact = 0.0;
    // time derivatives of densities by centred differences over the window
    double rho_E_energy_form_fd = 0.0;
    double j_E_form_fd = 0.0;
    // forms that carry a spatial derivative of a density
    double rho_E_T00_form = 0.0;
    double majorana_gradient_form = 0.0;
    // derivative-free
    double tensor_symmetry = 0.0;  // T01_check - cT10
    double rho_tilde_real = 0.0;   // |Im rho_tilde_E|
    double scale_rho_E = 0.0;
    double scale_j_E = 0.0;
};

/// window of 3 states, residuals evaluated at the middle one
DecompositionResiduals decomposition_checks(const std::vector<KfgState>& window,
                                            const KineticMatrix& kinetic,
                                            const ScalarPotential& potential);

/// max |psi| max |E psi| / mc^2
double density_scale(const ObservableFields& f, const PhysicalUnits& u);
/// c max |T00|
double current_scale(const ObservableFields& f, const PhysicalUnits& u);

}  // namespace kfgm
