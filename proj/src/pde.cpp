#include "qcmdo/pde.hpp"

#include <cmath>

namespace qcmdo {

struct LinearOperator::State {
    CMatrix dense;
    Eigen::PartialPivLU<CMatrix> lu;
    Eigen::PartialPivLU<CMatrix> lu_adjoint;
    CVector eigenvalues;
    CMatrix modes;
    Map apply;
    Map apply_adjoint;
    Map preconditioner;
};

LinearOperator LinearOperator::dense(CMatrix e) {
    if (e.rows() != e.cols()) throw Error(ErrorCode::DimensionMismatch, "operator must be square");
    auto st = std::make_shared<State>();
    st->lu.compute(e);
    st->lu_adjoint.compute(e.adjoint());
    st->dense = std::move(e);
    LinearOperator op;
    op.kind_ = Kind::DenseMatrix;
    op.n_ = st->dense.rows();
    op.state_ = std::move(st);
    return op;
}

LinearOperator LinearOperator::spectral(CVector eigenvalues, CMatrix modes) {
    const Index n = eigenvalues.size();
    if (modes.size() != 0 && (modes.rows() != n || modes.cols() != n)) {
        throw Error(ErrorCode::DimensionMismatch, "modes must be n x n");
    }
    for (Index i = 0; i < n; ++i) {
        if (eigenvalues(i) == Complex{}) throw Error(ErrorCode::InvalidArgument, "operator is singular");
    }
    auto st = std::make_shared<State>();
    st->eigenvalues = std::move(eigenvalues);
    st->modes = std::move(modes);
    LinearOperator op;
    op.kind_ = Kind::SpectralDiagonal;
    op.n_ = n;
    op.state_ = std::move(st);
    return op;
}

LinearOperator LinearOperator::callback(Index n, Map apply, Map apply_adjoint, Map preconditioner) {
    if (!apply) throw Error(ErrorCode::InvalidArgument, "callback operator needs an apply function");
    auto st = std::make_shared<State>();
    st->apply = std::move(apply);
    st->apply_adjoint = std::move(apply_adjoint);
    st->preconditioner = std::move(preconditioner);
    LinearOperator op;
    op.kind_ = Kind::Callback;
    op.n_ = n;
    op.state_ = std::move(st);
    return op;
}

bool LinearOperator::has_adjoint() const noexcept {
    return kind_ != Kind::Callback || static_cast<bool>(state_->apply_adjoint);
}

namespace {

void check_length(const CVector& v, Index n) {
    if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "operator: vector length mismatch");
}

}  // namespace

CVector LinearOperator::apply(const CVector& v) const {
    check_length(v, n_);
    switch (kind_) {
        case Kind::DenseMatrix: return state_->dense * v;
        case Kind::SpectralDiagonal:
            if (state_->modes.size() == 0) return state_->eigenvalues.cwiseProduct(v);
            return state_->modes * state_->eigenvalues.cwiseProduct(state_->modes.adjoint() * v);
        case Kind::Callback: return state_->apply(v);
    }
    return {};
}

CVector LinearOperator::apply_adjoint(const CVector& v) const {
    check_length(v, n_);
    switch (kind_) {
        case Kind::DenseMatrix: return state_->dense.adjoint() * v;
        case Kind::SpectralDiagonal: {
            const CVector mu = state_->eigenvalues.conjugate();
            if (state_->modes.size() == 0) return mu.cwiseProduct(v);
            return state_->modes * mu.cwiseProduct(state_->modes.adjoint() * v);
        }
        case Kind::Callback:
            if (!state_->apply_adjoint) {
                throw Error(ErrorCode::InvalidArgument, "callback operator has no adjoint");
            }
            return state_->apply_adjoint(v);
    }
    return {};
}

CVector LinearOperator::solve(const CVector& rhs) const {
    check_length(rhs, n_);
    switch (kind_) {
        case Kind::DenseMatrix: return state_->lu.solve(rhs);
        case Kind::SpectralDiagonal:
            if (state_->modes.size() == 0) return rhs.cwiseQuotient(state_->eigenvalues);
            return state_->modes * (state_->modes.adjoint() * rhs).cwiseQuotient(state_->eigenvalues);
        case Kind::Callback:
            return bicgstab(state_->apply, state_->preconditioner, rhs, kIterativeTolerance,
                            static_cast<int>(10 * n_));
    }
    return {};
}

CVector LinearOperator::solve_adjoint(const CVector& rhs) const {
    check_length(rhs, n_);
    switch (kind_) {
        case Kind::DenseMatrix: return state_->lu_adjoint.solve(rhs);
        case Kind::SpectralDiagonal: {
            const CVector mu = state_->eigenvalues.conjugate();
            if (state_->modes.size() == 0) return rhs.cwiseQuotient(mu);
            return state_->modes * (state_->modes.adjoint() * rhs).cwiseQuotient(mu);
        }
        case Kind::Callback: {
            if (!state_->apply_adjoint) {
                throw Error(ErrorCode::InvalidArgument, "callback operator has no adjoint");
            }
            // The adjoint of a preconditioner for E is not generally available.
            return bicgstab(state_->apply_adjoint, {}, rhs, kIterativeTolerance, static_cast<int>(10 * n_));
        }
    }
    return {};
}

std::optional<CMatrix> LinearOperator::materialize() const {
    switch (kind_) {
        case Kind::DenseMatrix: return state_->dense;
        case Kind::SpectralDiagonal: {
            if (state_->modes.size() == 0) return CMatrix(state_->eigenvalues.asDiagonal());
            return CMatrix(state_->modes * state_->eigenvalues.asDiagonal() * state_->modes.adjoint());
        }
        case Kind::Callback: return std::nullopt;
    }
    return std::nullopt;
}

CVector bicgstab(const LinearOperator::Map& apply, const LinearOperator::Map& preconditioner,
                 const CVector& rhs, double rel_tol, int max_iterations) {
    const Index n = rhs.size();
    const double bnorm = rhs.norm();
    CVector x = CVector::Zero(n);
    if (bnorm == 0.0) return x;
    auto precond = [&](const CVector& v) { return preconditioner ? preconditioner(v) : v; };
    const double target = rel_tol * bnorm;

    int used = 0;
    // Restart from the current iterate when the recursive residual has
    // drifted away from the true one.
    while (used < max_iterations) {
        CVector r = rhs - apply(x);
        if (r.norm() <= target) return x;
        const CVector r_hat = r;
        Complex rho(1.0), alpha(1.0), omega(1.0);
        CVector v = CVector::Zero(n);
        CVector p = CVector::Zero(n);
        bool converged = false;
        for (; used < max_iterations; ++used) {
            const Complex rho_next = r_hat.dot(r);
            if (std::abs(rho_next) == 0.0) break;
            const Complex beta = (rho_next / rho) * (alpha / omega);
            rho = rho_next;
            p = r + beta * (p - omega * v);
            const CVector p_hat = precond(p);
            v = apply(p_hat);
            const Complex denom = r_hat.dot(v);
            if (std::abs(denom) == 0.0) break;
            alpha = rho / denom;
            const CVector s = r - alpha * v;
            if (s.norm() <= target) {
                x += alpha * p_hat;
                converged = true;
                ++used;
                break;
            }
            const CVector s_hat = precond(s);
            const CVector t = apply(s_hat);
            const double tt = t.squaredNorm();
            if (tt == 0.0) break;
            omega = t.dot(s) / tt;
            x += alpha * p_hat + omega * s_hat;
            r = s - omega * t;
            if (r.norm() <= target) {
                converged = true;
                ++used;
                break;
            }
            if (std::abs(omega) == 0.0) break;
        }
        if (converged && (rhs - apply(x)).norm() <= 10.0 * target) return x;
        if (!converged && used >= max_iterations) break;
        if (!converged) ++used;
    }
    throw Error(ErrorCode::SolverFailure, "iterative solve did not reach the residual tolerance");
}

void check_instance(const PdeInstance& inst) {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidProblem, why); };
    const Index n1 = inst.n1(), n2a = inst.n2a(), n2b = inst.n2b();
    if (static_cast<Index>(inst.domains.size()) != n1) fail("one discrete domain per column of J");
    for (const auto& d : inst.domains) {
        if (!d.is_discrete() || d.values().empty()) fail("PDE controls must have nonempty discrete domains");
    }
    if (inst.f.size() != n2b) fail("f must have one entry per field point");
    if (inst.G.rows() != n2a || inst.G.cols() != n2a) fail("G must be n2a x n2a");
    if (inst.R) {
        if (inst.R->rows() != n2a || inst.R->cols() != n2b) fail("R = K^H E^-1 must be n2a x n2b");
    } else {
        if (!inst.K || !inst.E) fail("either R or both K and E are required");
    }
    if (inst.K && (inst.K->rows() != n2b || inst.K->cols() != n2a)) fail("K must be n2b x n2a");
    if (inst.E && inst.E->dimension() != n2b) fail("E must act on the field dimension n2b");

    const double scale = linalg::max_abs(inst.G);
    if (linalg::max_abs(inst.G - inst.G.adjoint()) > kPsdTolerance * std::max(scale, 1e-300)) {
        fail("G must be Hermitian");
    }
    if (n2a > 0) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(inst.G), Eigen::EigenvaluesOnly);
        const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues()(0) < -kPsdTolerance * norm) fail("G must be positive semidefinite");
    }
}

std::pair<CMatrix, CVector> measured_response(const PdeInstance& inst) {
    check_instance(inst);
    const Index n1 = inst.n1(), n2a = inst.n2a();
    if (inst.R) return {(*inst.R) * inst.J, (*inst.R) * inst.f};

    const auto& E = *inst.E;
    const auto& K = *inst.K;
    if (n1 + 1 <= n2a || !E.has_adjoint()) {
        CVector ef = E.solve(inst.f);
        CMatrix ej(inst.n2b(), n1);
        for (Index j = 0; j < n1; ++j) ej.col(j) = E.solve(inst.J.col(j));
        return {K.adjoint() * ej, K.adjoint() * ef};
    }
    // R^H = E^-H K, one adjoint solve per observation.
    CMatrix rh(inst.n2b(), n2a);
    for (Index k = 0; k < n2a; ++k) rh.col(k) = E.solve_adjoint(K.col(k));
    return {rh.adjoint() * inst.J, rh.adjoint() * inst.f};
}

QudoProblem reduce_pde(const PdeInstance& inst) {
    const auto [rj, rf] = measured_response(inst);
    const CVector residual = rf - inst.y;
    const CMatrix g_rj = inst.G * rj;

    QudoProblem out;
    out.H = linalg::hermitian_part(rj.adjoint() * g_rj);
    out.g = 2.0 * (g_rj.adjoint() * residual);
    out.f = residual.dot(inst.G * residual).real();
    out.domains = inst.domains;
    out.recovery = std::make_shared<const PdeRecovery>(PdeRecovery{inst.E, inst.K, inst.R, inst.J, inst.f});
    return out;
}

PdeSolution recover_pde(const PdeRecovery& rec, const CVector& x1) {
    if (x1.size() != rec.J.cols()) throw Error(ErrorCode::DimensionMismatch, "recover_pde: x1 length != n1");
    const CVector rhs = rec.f + rec.J * x1;
    PdeSolution out;
    if (rec.E) out.x2b = rec.E->solve(rhs);
    if (rec.K && out.x2b) {
        out.x2a = rec.K->adjoint() * (*out.x2b);
    } else if (rec.R) {
        out.x2a = (*rec.R) * rhs;
    } else {
        throw Error(ErrorCode::InvalidArgument, "recovery data has no measurement operator");
    }
    return out;
}

PdeSolution recover_pde(const QudoProblem& qudo, const CVector& x1) {
    if (const auto* rec = std::get_if<std::shared_ptr<const PdeRecovery>>(&qudo.recovery)) {
        return recover_pde(**rec, x1);
    }
    throw Error(ErrorCode::InvalidArgument, "this QUDO carries no PDE recovery data");
}

QcmdoProblem build_qcmdo_from_pde(const PdeInstance& inst) {
    check_instance(inst);
    if (!inst.E) throw Error(ErrorCode::OperatorNotMaterializable, "no PDE operator to materialize");
    const auto e = inst.E->materialize();
    if (!e) throw Error(ErrorCode::OperatorNotMaterializable, "callback operators have no dense form");

    const Index n1 = inst.n1(), n2a = inst.n2a(), n2b = inst.n2b();
    // K^H is recovered from R when only the composed measurement is known.
    const CMatrix kh = inst.K ? CMatrix(inst.K->adjoint()) : CMatrix((*inst.R) * (*e));

    const Index n = n1 + n2a + n2b;
    CMatrix a = CMatrix::Zero(n, n);
    a.block(n1, n1, n2a, n2a) = inst.G;
    CVector b = CVector::Zero(n);
    b.segment(n1, n2a) = -2.0 * (inst.G * inst.y);
    CMatrix f = CMatrix::Zero(n2a + n2b, n);
    f.block(0, n1, n2a, n2a).setIdentity();
    f.block(0, n1 + n2a, n2a, n2b) = -kh;
    f.block(n2a, 0, n2b, n1) = -inst.J;
    f.block(n2a, n1 + n2a, n2b, n2b) = *e;
    CVector d = CVector::Zero(n2a + n2b);
    d.tail(n2b) = inst.f;
    const double c = inst.y.dot(inst.G * inst.y).real();

    std::vector<VariableDomain> domains = inst.domains;
    domains.resize(static_cast<std::size_t>(n), VariableDomain::continuous());
    return QcmdoProblem(std::move(a), std::move(b), Complex(c, 0.0), std::move(f), std::move(d),
                        std::move(domains));
}

CMatrix design_metric_for_diagonal_H(const PdeInstance& inst, const RVector& dbar) {
    if (inst.n1() > inst.n2a()) {
        throw Error(ErrorCode::TooManyDiscrete, "a diagonalizing metric needs n1 <= n2a");
    }
    if (dbar.size() != inst.n1() || (dbar.array() <= 0.0).any()) {
        throw Error(ErrorCode::InvalidArgument, "dbar must hold n1 positive entries");
    }
    const auto [rj, rf] = measured_response(inst);
    if (linalg::rank(rj) < inst.n1()) {
        throw Error(ErrorCode::RankDeficientRJ, "K^H E^-1 J does not have full column rank");
    }
    const CMatrix p = linalg::pinv(rj);
    return linalg::hermitian_part(p.adjoint() * dbar.cast<Complex>().asDiagonal() * p);
}

QudoSolution solve_separable(const QudoProblem& qudo) {
    const Index n1 = qudo.n1();
    QudoSolution out{CVector(n1), qudo.f};
    for (Index i = 0; i < n1; ++i) {
        const double h = qudo.H(i, i).real();
        double best = 0.0;
        bool first = true;
        for (const auto& v : qudo.domains[static_cast<std::size_t>(i)].values()) {
            const double term = h * std::norm(v) + (std::conj(v) * qudo.g(i)).real();
            if (first || term < best) {
                best = term;
                out.x1(i) = v;
                first = false;
            }
        }
        out.value += best;
    }
    return out;
}

}  // namespace qcmdo
