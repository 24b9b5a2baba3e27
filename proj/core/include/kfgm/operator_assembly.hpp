#pragma once
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kfgm/bc_family.hpp"
#include "kfgm/core_model.hpp"

namespace kfgm {

using SpMat = Eigen::SparseMatrix<cd>;

/// Boundary closure in [a,b] order. q = (psi(a), psi(b)), p = (-l psi_x(a), l psi_x(b)).
/// Free directions (columns of Q) obey p = -tan(theta/2) q; the remaining
/// directions (columns of C) are forced to zero.
struct Closure {
    Eigen::MatrixXcd Q;        // 2 x k
    Eigen::VectorXd tan_half;  // k
    Eigen::MatrixXcd C;        // 2 x (2-k)
    bool real = true;

    int free_count() const { return static_cast<int>(Q.cols()); }
};

Closure build_closure(const BcParams& bc);

/// Discrete c^2 p^2 with the closure built in, in symmetric coordinates y = M^{1/2} x.
/// Unknowns x = (r_1..r_k, u_1..u_{n-2}); boundary node values are Q r.
struct KineticMatrix {
    Grid grid;
    PhysicalUnits units;
    BcParams bc;
    Closure closure;
    double t = 0.0;  // sample time of S

    SpMat A;      // hermitian form, x^H A x = hbar^2 c^2 (sum |du|^2/dx + sum tan|r|^2/lambda)
    RVec mass;    // trapezoid weights of the unknowns
    SpMat kin;    // M^{-1/2} A M^{-1/2}
    SpMat S;      // potential in unknown coordinates
    RVec s_nodes; // S on the grid

    int dim() const { return static_cast<int>(mass.size()); }
    bool is_real() const { return closure.real; }
    /// kin + (mc^2)^2 + 2 mc^2 S, dense
    Eigen::MatrixXcd full_dense() const;
    /// relative asymmetry of the full operator
    double asymmetry() const;

    CVec to_unknowns(const CVec& nodes) const;
    CVec to_nodes(const CVec& x) const;
    CVec to_y(const CVec& nodes) const;
    CVec from_y(const CVec& y) const;
};

KineticMatrix assemble_kinetic(const Grid& grid, const ScalarPotential& potential, double t,
                               const BcParams& bc, const PhysicalUnits& units);

/// same grid, closure and A; only S resampled at t
KineticMatrix resample_potential(const KineticMatrix& k, const ScalarPotential& potential,
                                 double t);

struct DiscreteHamiltonian {
    KineticMatrix kinetic;
    SpMat h;  // 2d x 2d in symmetric coordinates
    double t = 0.0;

    int dim() const { return static_cast<int>(h.rows()); }
    CVec to_y(const FvState& s) const;
    FvState from_y(const CVec& y, double t) const;
};

/// [[X + mc^2, X], [-X, -X - mc^2]] with X = kin/(2mc^2) + S
SpMat fv_matrix(const SpMat& kin, const SpMat& S, double mc2);
/// ||T3 h^H T3 - h|| / ||h||, Frobenius
double pseudo_hermiticity_defect(const SpMat& h);

/// throws ClosureNotSelfAdjoint when the defect exceeds 1e-10
DiscreteHamiltonian assemble_fv_hamiltonian(const KineticMatrix& kinetic);

struct Mode {
    double E = 0.0;
    double E2 = 0.0;
    CVec u;  // node values, trapezoid-orthonormal
};

struct SpectrumEntry {
    double E2 = 0.0;
    bool diagnostic = false;
};

struct ModeSet {
    Grid grid;
    PhysicalUnits units;
    bool real = true;
    std::vector<Mode> modes;             // E^2 > 0, ascending
    std::vector<double> diagnostics;     // E^2 <= 0
    std::vector<SpectrumEntry> spectrum; // everything, ascending
    double max_residual = 0.0;           // max ||K u - E^2 u|| / ||K||
};

ModeSet eigenmodes(const KineticMatrix& kinetic);

struct ModeCoefficient {
    int index = 0;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// plus: sum A cos(E t/hbar + phi) u; minus: i times that;
/// none: sum A exp(-i(E t/hbar + phi)) u
KfgState synthesize_state(const ModeSet& modes, const std::vector<ModeCoefficient>& coeffs,
                          double t, MajoranaKind kind);

/// full on-shell operator c^2 p^2 + (mc^2)^2 + 2 mc^2 S on node values
CVec apply_full(const KineticMatrix& k, const CVec& nodes);
/// c^2 p^2 part only
CVec apply_kinetic(const KineticMatrix& k, const CVec& nodes);

struct BoundaryDerivatives {
    cd a;  // psi_x(a)
    cd b;  // psi_x(b)
};

/// psi_x at the ends, consistent with the closure and the discrete operator
BoundaryDerivatives ghost_derivatives(const KineticMatrix& k, const CVec& nodes);
/// central differences inside, ghost values at the ends
CVec derivative_field(const KineticMatrix& k, const CVec& nodes);

/// trapezoid weights on the grid
RVec trapezoid_weights(const Grid& g);

}  // namespace kfgm
