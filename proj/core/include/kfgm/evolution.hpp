#pragma once
#include <memory>
#include <vector>

#include <Eigen/SparseLU>

#include "kfgm/observables.hpp"
#include "kfgm/operator_assembly.hpp"

namespace kfgm {

struct EvolutionConfig {
    double dt = 1e-3;
    int steps = 1;
    int record_every = 1;

    void validate() const;
};

/// (1 + i k h) y' = (1 - i k h) y with k = dt/(2 hbar); factored once
class CayleyPropagator {
public:
    CayleyPropagator(const DiscreteHamiltonian& h, double dt);
    CVec apply(const CVec& y) const;
    double dt() const { return dt_; }

private:
    double dt_;
    SpMat rhs_;
    std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;
};

FvState step_cayley(const FvState& state, const DiscreteHamiltonian& h, double dt);

/// hands out h(t); static potentials are assembled once
class HamiltonianProvider {
public:
    HamiltonianProvider(KineticMatrix base, ScalarPotential potential);
    DiscreteHamiltonian at(double t) const;
    KineticMatrix kinetic_at(double t) const;
    bool is_static() const { return potential_.is_static(); }
    const KineticMatrix& base() const { return base_; }
    const ScalarPotential& potential() const { return potential_; }

private:
    KineticMatrix base_;
    ScalarPotential potential_;
};

struct Snapshot {
    double t = 0.0;
    KfgState state;
    GlobalSummary summary;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    double dt = 0.0;
    int record_every = 1;
};

/// time-dependent S is sampled at the step midpoint
Trajectory evolve(const FvState& initial, const HamiltonianProvider& provider,
                  const EvolutionConfig& config);

/// the raw states at every step, no summaries; used for residual windows
std::vector<KfgState> evolve_states(const FvState& initial, const HamiltonianProvider& provider,
                                    double dt, int steps);

struct MajoranaPreservation {
    MajoranaKind kind = MajoranaKind::none;
    double max_deviation = 0.0;  // max over steps of ||Psi -+ t1 Psi*|| / ||Psi||
};

/// kind inferred from the initial state; kind none (and an O(1) deviation) if it is neither
MajoranaPreservation check_majorana_preservation(const FvState& state,
                                                 const DiscreteHamiltonian& h, double dt,
                                                 int steps);

}  // namespace kfgm
