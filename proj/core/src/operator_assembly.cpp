#include "kfgm/operator_assembly.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kfgm/errors.hpp"

namespace kfgm {

namespace {

using Trip = Eigen::Triplet<cd>;

double spread(const Eigen::Matrix2d& m) {
    return std::abs(m(0, 1)) + std::abs(m(1, 0)) + std::abs(m(0, 0) - m(1, 1));
}

// x -> value at node i, as (column, coefficient) pairs
void node_row(const KineticMatrix& k, int i, std::vector<std::pair<int, cd>>& out) {
    out.clear();
    const int N = k.grid.n;
    const int nf = k.closure.free_count();
    if (i == 0 || i == N - 1) {
        int r = i == 0 ? 0 : 1;
        for (int j = 0; j < nf; ++j)
            if (k.closure.Q(r, j) != cd(0.0)) out.emplace_back(j, k.closure.Q(r, j));
    } else {
        out.emplace_back(nf + i - 1, cd(1.0));
    }
}

double canon_weight(double xi) { return std::exp(xi) + xi * xi; }

void canonicalize(CVec& u, const Grid& g, const RVec& w) {
    cd o = 0.0;
    for (int i = 0; i < g.n; ++i) o += w[i] * u[i] * canon_weight((g.x(i) - g.a) / g.length());
    cd phase;
    if (std::abs(o) > 1e-10) {
        phase = std::conj(o) / std::abs(o);
    } else {
        Eigen::Index imax = 0;
        u.cwiseAbs().maxCoeff(&imax);
        phase = std::conj(u[imax]) / std::abs(u[imax]);
    }
    u *= phase;
}

}  // namespace

Closure build_closure(const BcParams& bc) {
    Eigen::Matrix2cd U = u2_matrix(bc);
    Eigen::Matrix2cd P;
    P << 0, 1, 1, 0;
    Eigen::Matrix2cd Up = P * U * P;  // [a,b] ordering

    Eigen::Matrix2cd V;
    Eigen::Vector2cd ev;
    Closure cl;
    cl.real = (Up - Up.transpose()).norm() < 1e-14;
    if (cl.real) {
        // symmetric unitary: real and imaginary parts commute, so a real eigenbasis exists
        Eigen::Matrix2d R = Up.real(), J = Up.imag();
        Eigen::Matrix2d basis = Eigen::Matrix2d::Identity();
        if (spread(R) > 1e-12)
            basis = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(R).eigenvectors();
        else if (spread(J) > 1e-12)
            basis = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(J).eigenvectors();
        V = basis.cast<cd>();
    } else {
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(Up);
        if (es.info() != Eigen::Success)
            throw Error(ErrorCode::SingularClosure, "eigendecomposition of U failed");
        V = es.eigenvectors();
        V.col(0).normalize();
        V.col(1) -= V.col(0) * V.col(0).dot(V.col(1));
        if (V.col(1).norm() < 1e-8) {
            // degenerate: U is a multiple of identity
            V.setIdentity();
        } else {
            V.col(1).normalize();
        }
    }
    for (int j = 0; j < 2; ++j) ev[j] = V.col(j).dot(Up * V.col(j));

    std::vector<int> free_cols, fixed_cols;
    std::vector<double> tans;
    for (int j = 0; j < 2; ++j) {
        cd z = ev[j];
        if (std::abs(1.0 + z) < 1e-9) {
            fixed_cols.push_back(j);
        } else {
            free_cols.push_back(j);
            tans.push_back(z.imag() / (1.0 + z.real()));
        }
    }
    cl.Q.resize(2, static_cast<Eigen::Index>(free_cols.size()));
    cl.C.resize(2, static_cast<Eigen::Index>(fixed_cols.size()));
    cl.tan_half.resize(static_cast<Eigen::Index>(tans.size()));
    for (size_t j = 0; j < free_cols.size(); ++j) {
        cl.Q.col(static_cast<Eigen::Index>(j)) = V.col(free_cols[j]);
        cl.tan_half[static_cast<Eigen::Index>(j)] = tans[j];
    }
    for (size_t j = 0; j < fixed_cols.size(); ++j)
        cl.C.col(static_cast<Eigen::Index>(j)) = V.col(fixed_cols[j]);
    if (cl.real) {
        // drop round-off imaginary parts so the whole operator stays real
        cl.Q = cl.Q.real().cast<cd>();
        cl.C = cl.C.real().cast<cd>();
    }
    return cl;
}

KineticMatrix assemble_kinetic(const Grid& grid, const ScalarPotential& potential, double t,
                               const BcParams& bc, const PhysicalUnits& units) {
    units.validate();
    bc.validate();
    if (grid.n < 8 || !(grid.b > grid.a)) throw Error(ErrorCode::InvalidParams, "bad grid");
    potential.validate(grid, t);

    KineticMatrix K;
    K.grid = grid;
    K.units = units;
    K.bc = bc;
    K.t = t;
    K.closure = build_closure(bc);

    const int N = grid.n;
    const int nf = K.closure.free_count();
    const int d = nf + N - 2;
    const double dx = grid.dx;
    const double hc2 = units.hbar * units.hbar * units.c * units.c;

    std::vector<Trip> tr;
    std::vector<std::pair<int, cd>> lo, hi;
    for (int e = 0; e < N - 1; ++e) {
        node_row(K, e, lo);
        node_row(K, e + 1, hi);
        for (auto& [c, v] : hi) tr.emplace_back(e, c, v);
        for (auto& [c, v] : lo) tr.emplace_back(e, c, -v);
    }
    SpMat D(N - 1, d);
    D.setFromTriplets(tr.begin(), tr.end());
    SpMat A = SpMat(D.adjoint()) * D;
    A *= hc2 / dx;
    if (nf > 0) {
        SpMat B(d, d);
        std::vector<Trip> bt;
        for (int j = 0; j < nf; ++j) bt.emplace_back(j, j, hc2 * K.closure.tan_half[j] / bc.lambda);
        B.setFromTriplets(bt.begin(), bt.end());
        A += B;
    }
    A.makeCompressed();
    K.A = A;

    K.mass.resize(d);
    for (int j = 0; j < d; ++j) K.mass[j] = j < nf ? 0.5 * dx : dx;
    Eigen::VectorXcd mih = K.mass.cwiseSqrt().cwiseInverse().cast<cd>();
    K.kin = mih.asDiagonal() * A * mih.asDiagonal();
    K.kin.makeCompressed();

    K = resample_potential(K, potential, t);
    return K;
}

KineticMatrix resample_potential(const KineticMatrix& k, const ScalarPotential& potential,
                                 double t) {
    KineticMatrix K = k;
    K.t = t;
    K.s_nodes = potential.sample(K.grid, t);
    const int N = K.grid.n;
    const int nf = K.closure.free_count();
    const int d = K.dim();
    std::vector<Trip> tr;
    if (nf > 0) {
        Eigen::Matrix2cd Sd = Eigen::Matrix2cd::Zero();
        Sd(0, 0) = K.s_nodes[0];
        Sd(1, 1) = K.s_nodes[N - 1];
        Eigen::MatrixXcd Sr = K.closure.Q.adjoint() * Sd * K.closure.Q;
        for (int i = 0; i < nf; ++i)
            for (int j = 0; j < nf; ++j)
                if (Sr(i, j) != cd(0.0)) tr.emplace_back(i, j, Sr(i, j));
    }
    for (int i = 1; i < N - 1; ++i) tr.emplace_back(nf + i - 1, nf + i - 1, K.s_nodes[i]);
    K.S = SpMat(d, d);
    K.S.setFromTriplets(tr.begin(), tr.end());
    return K;
}

Eigen::MatrixXcd KineticMatrix::full_dense() const {
    const double mc2 = units.mc2();
    Eigen::MatrixXcd F = Eigen::MatrixXcd(kin) + 2.0 * mc2 * Eigen::MatrixXcd(S);
    F.diagonal().array() += mc2 * mc2;
    return F;
}

double KineticMatrix::asymmetry() const {
    Eigen::MatrixXcd F = full_dense();
    return (F - F.adjoint()).norm() / F.norm();
}

CVec KineticMatrix::to_unknowns(const CVec& nodes) const {
    const int N = grid.n;
    const int nf = closure.free_count();
    if (nodes.size() != N) throw Error(ErrorCode::InvalidState, "field size does not match grid");
    CVec x(dim());
    if (nf > 0) {
        Eigen::Vector2cd q(nodes[0], nodes[N - 1]);
        x.head(nf) = closure.Q.adjoint() * q;
    }
    x.tail(N - 2) = nodes.segment(1, N - 2);
    return x;
}

CVec KineticMatrix::to_nodes(const CVec& x) const {
    const int N = grid.n;
    const int nf = closure.free_count();
    CVec nodes(N);
    Eigen::Vector2cd q = Eigen::Vector2cd::Zero();
    if (nf > 0) q = closure.Q * x.head(nf);
    nodes[0] = q[0];
    nodes[N - 1] = q[1];
    nodes.segment(1, N - 2) = x.tail(N - 2);
    return nodes;
}

CVec KineticMatrix::to_y(const CVec& nodes) const {
    return to_unknowns(nodes).cwiseProduct(mass.cwiseSqrt().cast<cd>());
}

CVec KineticMatrix::from_y(const CVec& y) const {
    return to_nodes(y.cwiseQuotient(mass.cwiseSqrt().cast<cd>()));
}

SpMat fv_matrix(const SpMat& kin, const SpMat& S, double mc2) {
    const int d = static_cast<int>(kin.rows());
    SpMat X = kin * (1.0 / (2.0 * mc2)) + S;
    std::vector<Trip> tr;
    tr.reserve(static_cast<size_t>(4 * X.nonZeros() + 2 * d));
    for (int col = 0; col < X.outerSize(); ++col)
        for (SpMat::InnerIterator it(X, col); it; ++it) {
            int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
            cd v = it.value();
            tr.emplace_back(i, j, v);
            tr.emplace_back(i, d + j, v);
            tr.emplace_back(d + i, j, -v);
            tr.emplace_back(d + i, d + j, -v);
        }
    for (int i = 0; i < d; ++i) {
        tr.emplace_back(i, i, mc2);
        tr.emplace_back(d + i, d + i, -mc2);
    }
    SpMat h(2 * d, 2 * d);
    h.setFromTriplets(tr.begin(), tr.end());
    h.makeCompressed();
    return h;
}

double pseudo_hermiticity_defect(const SpMat& h) {
    const int n2 = static_cast<int>(h.rows());
    Eigen::VectorXcd s(n2);
    for (int i = 0; i < n2; ++i) s[i] = i < n2 / 2 ? 1.0 : -1.0;
    SpMat adj = h.adjoint();
    SpMat conj = s.asDiagonal() * adj * s.asDiagonal();
    SpMat diff = conj - h;
    double nh = h.norm();
    return nh == 0.0 ? diff.norm() : diff.norm() / nh;
}

DiscreteHamiltonian assemble_fv_hamiltonian(const KineticMatrix& kinetic) {
    DiscreteHamiltonian H;
    H.kinetic = kinetic;
    H.t = kinetic.t;
    H.h = fv_matrix(kinetic.kin, kinetic.S, kinetic.units.mc2());
    double defect = pseudo_hermiticity_defect(H.h);
    if (!(defect <= 1e-10))
        throw Error(ErrorCode::ClosureNotSelfAdjoint,
                    "pseudo-hermiticity defect " + std::to_string(defect));
    return H;
}

CVec DiscreteHamiltonian::to_y(const FvState& s) const {
    const int d = kinetic.dim();
    CVec y(2 * d);
    y.head(d) = kinetic.to_y(s.psi1);
    y.tail(d) = kinetic.to_y(s.psi2);
    return y;
}

FvState DiscreteHamiltonian::from_y(const CVec& y, double t) const {
    const int d = kinetic.dim();
    FvState s;
    s.psi1 = kinetic.from_y(y.head(d));
    s.psi2 = kinetic.from_y(y.tail(d));
    s.t = t;
    return s;
}

RVec trapezoid_weights(const Grid& g) {
    RVec w = RVec::Constant(g.n, g.dx);
    w[0] = w[g.n - 1] = 0.5 * g.dx;
    return w;
}

ModeSet eigenmodes(const KineticMatrix& kinetic) {
    ModeSet ms;
    ms.grid = kinetic.grid;
    ms.units = kinetic.units;
    ms.real = kinetic.is_real();
    Eigen::MatrixXcd F = kinetic.full_dense();
    const double fn = F.norm();
    const int d = kinetic.dim();
    RVec vals;
    Eigen::MatrixXcd vecs;
    if (ms.real) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F.real());
        if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigensolver failed");
        vals = es.eigenvalues();
        vecs = es.eigenvectors().cast<cd>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(F);
        if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigensolver failed");
        vals = es.eigenvalues();
        vecs = es.eigenvectors();
    }
    RVec w = trapezoid_weights(kinetic.grid);
    for (int j = 0; j < d; ++j) {
        double e2 = vals[j];
        double res = (F * vecs.col(j) - e2 * vecs.col(j)).norm() / fn;
        ms.max_residual = std::max(ms.max_residual, res);
        ms.spectrum.push_back({e2, !(e2 > 0.0)});
        if (!(e2 > 0.0)) {
            ms.diagnostics.push_back(e2);
            continue;
        }
        Mode m;
        m.E2 = e2;
        m.E = std::sqrt(e2);
        m.u = kinetic.from_y(vecs.col(j));
        canonicalize(m.u, kinetic.grid, w);
        if (ms.real) m.u = m.u.real().cast<cd>();
        ms.modes.push_back(std::move(m));
    }
    return ms;
}

KfgState synthesize_state(const ModeSet& modes, const std::vector<ModeCoefficient>& coeffs,
                          double t, MajoranaKind kind) {
    if (kind != MajoranaKind::none && !modes.real)
        throw Error(ErrorCode::NotMajoranaCompatible, "complex modes cannot build a Majorana state");
    const int n = modes.grid.n;
    KfgState s;
    s.t = t;
    s.psi = CVec::Zero(n);
    s.psi_t = CVec::Zero(n);
    const double hbar = modes.units.hbar;
    for (const auto& c : coeffs) {
        if (c.index < 0 || c.index >= static_cast<int>(modes.modes.size()))
            throw Error(ErrorCode::InvalidMode, "mode index " + std::to_string(c.index) + " out of range");
        const Mode& m = modes.modes[static_cast<size_t>(c.index)];
        double w = m.E / hbar;
        double arg = w * t + c.phase;
        if (kind == MajoranaKind::none) {
            cd f = c.amplitude * std::exp(cd(0.0, -arg));
            s.psi += f * m.u;
            s.psi_t += cd(0.0, -w) * f * m.u;
        } else {
            s.psi += (c.amplitude * std::cos(arg)) * m.u;
            s.psi_t += (-c.amplitude * w * std::sin(arg)) * m.u;
        }
    }
    if (kind == MajoranaKind::minus) {
        s.psi *= cd(0.0, 1.0);
        s.psi_t *= cd(0.0, 1.0);
    }
    return s;
}

CVec apply_kinetic(const KineticMatrix& k, const CVec& nodes) {
    CVec x = k.to_unknowns(nodes);
    CVec ax = k.A * x;
    return k.to_nodes(ax.cwiseQuotient(k.mass.cast<cd>()));
}

CVec apply_full(const KineticMatrix& k, const CVec& nodes) {
    const double mc2 = k.units.mc2();
    CVec x = k.to_unknowns(nodes);
    CVec lx = (k.A * x).cwiseQuotient(k.mass.cast<cd>());
    lx += (mc2 * mc2) * x + (2.0 * mc2) * (k.S * x);
    return k.to_nodes(lx);
}

BoundaryDerivatives ghost_derivatives(const KineticMatrix& k, const CVec& nodes) {
    const int N = k.grid.n;
    const double dx = k.grid.dx;
    const double hc2 = k.units.hbar * k.units.hbar * k.units.c * k.units.c;
    CVec u = k.to_nodes(k.to_unknowns(nodes));
    CVec ku = apply_kinetic(k, u);
    BoundaryDerivatives bd;
    bd.a = (u[1] - u[0]) / dx + 0.5 * dx * ku[0] / hc2;
    bd.b = (u[N - 1] - u[N - 2]) / dx - 0.5 * dx * ku[N - 1] / hc2;
    return bd;
}

CVec derivative_field(const KineticMatrix& k, const CVec& nodes) {
    const int N = k.grid.n;
    const double dx = k.grid.dx;
    CVec d(N);
    for (int i = 1; i < N - 1; ++i) d[i] = (nodes[i + 1] - nodes[i - 1]) / (2.0 * dx);
    BoundaryDerivatives bd = ghost_derivatives(k, nodes);
    d[0] = bd.a;
    d[N - 1] = bd.b;
    return d;
}

}  // namespace kfgm
