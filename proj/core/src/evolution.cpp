#include "kfgm/evolution.hpp"

#include <cmath>

#include "kfgm/errors.hpp"

namespace kfgm {

void EvolutionConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidParams, "dt must be positive");
    if (steps < 1) throw Error(ErrorCode::InvalidParams, "steps must be at least 1");
    if (record_every < 1) throw Error(ErrorCode::InvalidParams, "record_every must be at least 1");
}

// The step is taken in z = (y1 + y2, i(y1 - y2)), i.e. (psi, -hbar psi_t/mc^2) up to
// mass weights. There iħ dz/dt = i A z with A = [[0, -mc^2], [2X + mc^2, 0]], so the
// Cayley matrices are real whenever K and S are and real or imaginary data stays so
// bit for bit. Same map as (1 + i k h)^-1 (1 - i k h) on y.
CayleyPropagator::CayleyPropagator(const DiscreteHamiltonian& h, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "dt must be positive");
    const KineticMatrix& k = h.kinetic;
    const double mc2 = k.units.mc2();
    const double kap = dt / (2.0 * k.units.hbar);
    const int d = k.dim();
    SpMat X = k.kin * cd(1.0 / (2.0 * mc2)) + k.S;
    std::vector<Eigen::Triplet<cd>> tl, tr;
    for (int i = 0; i < 2 * d; ++i) {
        tl.emplace_back(i, i, 1.0);
        tr.emplace_back(i, i, 1.0);
    }
    for (int i = 0; i < d; ++i) {
        // top-right block -mc^2
        tl.emplace_back(i, d + i, kap * mc2);
        tr.emplace_back(i, d + i, -kap * mc2);
        // bottom-left diagonal part of 2X + mc^2
        tl.emplace_back(d + i, i, -kap * mc2);
        tr.emplace_back(d + i, i, kap * mc2);
    }
    for (int o = 0; o < X.outerSize(); ++o)
        for (SpMat::InnerIterator it(X, o); it; ++it) {
            tl.emplace_back(d + it.row(), it.col(), -2.0 * kap * it.value());
            tr.emplace_back(d + it.row(), it.col(), 2.0 * kap * it.value());
        }
    SpMat lhs(2 * d, 2 * d);
    lhs.setFromTriplets(tl.begin(), tl.end());
    rhs_.resize(2 * d, 2 * d);
    rhs_.setFromTriplets(tr.begin(), tr.end());
    lhs.makeCompressed();
    lu_ = std::make_shared<Eigen::SparseLU<SpMat>>();
    lu_->compute(lhs);
    if (lu_->info() != Eigen::Success) throw Error(ErrorCode::SingularPropagator, "factorization failed");
}

CVec CayleyPropagator::apply(const CVec& y) const {
    const Eigen::Index d = y.size() / 2;
    const cd I(0.0, 1.0);
    CVec z(2 * d);
    z.head(d) = y.head(d) + y.tail(d);
    z.tail(d) = I * (y.head(d) - y.tail(d));
    CVec zn = lu_->solve(rhs_ * z);
    if (lu_->info() != Eigen::Success || !zn.allFinite())
        throw Error(ErrorCode::SingularPropagator, "solve failed");
    CVec out(2 * d);
    out.head(d) = 0.5 * (zn.head(d) - I * zn.tail(d));
    out.tail(d) = 0.5 * (zn.head(d) + I * zn.tail(d));
    return out;
}

FvState step_cayley(const FvState& state, const DiscreteHamiltonian& h, double dt) {
    CayleyPropagator p(h, dt);
    return h.from_y(p.apply(h.to_y(state)), state.t + dt);
}

HamiltonianProvider::HamiltonianProvider(KineticMatrix base, ScalarPotential potential)
    : base_(std::move(base)), potential_(std::move(potential)) {}

KineticMatrix HamiltonianProvider::kinetic_at(double t) const {
    if (potential_.is_static()) return base_;
    return resample_potential(base_, potential_, t);
}

DiscreteHamiltonian HamiltonianProvider::at(double t) const {
    return assemble_fv_hamiltonian(kinetic_at(t));
}

namespace {

// drives the stepping; visit(step_index, y, t)
template <class Visit>
void run_steps(const FvState& initial, const HamiltonianProvider& provider, double dt, int steps,
               Visit&& visit) {
    DiscreteHamiltonian h0 = provider.at(initial.t);
    CVec y = h0.to_y(initial);
    double t = initial.t;
    visit(0, y, t, h0);
    std::unique_ptr<CayleyPropagator> fixed;
    if (provider.is_static()) fixed = std::make_unique<CayleyPropagator>(h0, dt);
    for (int s = 1; s <= steps; ++s) {
        if (fixed) {
            y = fixed->apply(y);
        } else {
            CayleyPropagator p(provider.at(t + 0.5 * dt), dt);
            y = p.apply(y);
        }
        // accumulate from the start time to avoid drift in t
        t = initial.t + s * dt;
        visit(s, y, t, h0);
    }
}

}  // namespace

Trajectory evolve(const FvState& initial, const HamiltonianProvider& provider,
                  const EvolutionConfig& config) {
    config.validate();
    Trajectory tr;
    tr.dt = config.dt;
    tr.record_every = config.record_every;
    const PhysicalUnits& u = provider.base().units;
    run_steps(initial, provider, config.dt, config.steps,
              [&](int s, const CVec& y, double t, const DiscreteHamiltonian& h0) {
                  if (s % config.record_every != 0 && s != config.steps) return;
                  Snapshot snap;
                  snap.t = t;
                  snap.state = fv_to_kfg(h0.from_y(y, t), u);
                  KineticMatrix k = provider.kinetic_at(t);
                  snap.summary = global_summary(local_fields(snap.state, k), k);
                  tr.snapshots.push_back(std::move(snap));
              });
    return tr;
}

std::vector<KfgState> evolve_states(const FvState& initial, const HamiltonianProvider& provider,
                                    double dt, int steps) {
    if (!(dt > 0.0) || steps < 0) throw Error(ErrorCode::InvalidParams, "bad dt or steps");
    std::vector<KfgState> out;
    const PhysicalUnits& u = provider.base().units;
    run_steps(initial, provider, dt, steps,
              [&](int, const CVec& y, double t, const DiscreteHamiltonian& h0) {
                  out.push_back(fv_to_kfg(h0.from_y(y, t), u));
              });
    return out;
}

MajoranaPreservation check_majorana_preservation(const FvState& state,
                                                 const DiscreteHamiltonian& h, double dt,
                                                 int steps) {
    MajoranaPreservation r;
    double dp = majorana_fv_defect(state, MajoranaKind::plus);
    double dm = majorana_fv_defect(state, MajoranaKind::minus);
    // a state that is neither is measured against the closer kind and reported as none
    MajoranaKind ref = dp <= dm ? MajoranaKind::plus : MajoranaKind::minus;
    r.kind = std::min(dp, dm) <= 1e-10 ? ref : MajoranaKind::none;
    CayleyPropagator p(h, dt);
    CVec y = h.to_y(state);
    r.max_deviation = majorana_fv_defect(h.from_y(y, state.t), ref);
    for (int s = 1; s <= steps; ++s) {
        y = p.apply(y);
        r.max_deviation =
            std::max(r.max_deviation, majorana_fv_defect(h.from_y(y, state.t + s * dt), ref));
    }
    return r;
}

}  // namespace kfgm
