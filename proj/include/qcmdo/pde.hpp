#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qcmdo/reduction.hpp"

namespace qcmdo {

/// An invertible operator E on C^n with forward and inverse actions.
///
/// DenseMatrix solves by a cached LU factorization.  SpectralDiagonal is
/// E = Phi diag(mu) Phi^H with unitary Phi (identity when no modes are given)
/// and solves exactly.  Callback solves with preconditioned BiCGSTAB to a
/// relative residual of 1e-10 within 10 n iterations.
class LinearOperator {
public:
    enum class Kind { DenseMatrix, SpectralDiagonal, Callback };
    using Map = std::function<CVector(const CVector&)>;

    static LinearOperator dense(CMatrix e);
    static LinearOperator spectral(CVector eigenvalues, CMatrix modes = CMatrix());
    /// `apply_adjoint` enables adjoint solves; `preconditioner` should
    /// approximate E^-1.  Callbacks must tolerate concurrent calls.
    static LinearOperator callback(Index n, Map apply, Map apply_adjoint = {}, Map preconditioner = {});

    Kind kind() const noexcept { return kind_; }
    Index dimension() const noexcept { return n_; }
    bool has_adjoint() const noexcept;

    CVector apply(const CVector& v) const;
    CVector apply_adjoint(const CVector& v) const;
    /// E^-1 rhs.  Throws SolverFailure when the iteration does not converge.
    CVector solve(const CVector& rhs) const;
    /// E^-H rhs.
    CVector solve_adjoint(const CVector& rhs) const;

    /// Dense E for the dense and spectral kinds.
    std::optional<CMatrix> materialize() const;

private:
    struct State;
    Kind kind_ = Kind::DenseMatrix;
    Index n_ = 0;
    std::shared_ptr<const State> state_;
};

inline constexpr double kIterativeTolerance = 1e-10;

/// Preconditioned BiCGSTAB for E x = rhs.  Exposed for testing.
CVector bicgstab(const LinearOperator::Map& apply, const LinearOperator::Map& preconditioner,
                 const CVector& rhs, double rel_tol, int max_iterations);

/// Observation x2a = K^H x2b of a field with E x2b = f + J x1, fitted to y
/// in the metric G.
///
/// The measurement is given either as K (with E) or directly as the
/// composed R = K^H E^-1 (n2a x n2b).  E may be absent when R is given.
struct PdeInstance {
    std::optional<LinearOperator> E;
    std::optional<CMatrix> K;
    std::optional<CMatrix> R;
    CMatrix J;
    CVector f;
    CVector y;
    CMatrix G;
    std::vector<VariableDomain> domains;

    Index n1() const noexcept { return J.cols(); }
    Index n2a() const noexcept { return y.size(); }
    Index n2b() const noexcept { return J.rows(); }
};

/// Throws InvalidProblem on inconsistent shapes, a non-Hermitian or
/// indefinite G, or missing operators.
void check_instance(const PdeInstance& inst);

struct PdeRecovery {
    std::optional<LinearOperator> E;
    std::optional<CMatrix> K;
    std::optional<CMatrix> R;
    CMatrix J;
    CVector f;
};

struct PdeSolution {
    CVector x2a;
    /// Present whenever E is known.
    std::optional<CVector> x2b;
};

/// (R J, R f) with R = K^H E^-1, choosing forward solves on [f J] or
/// adjoint solves on the columns of K, whichever needs fewer.
std::pair<CMatrix, CVector> measured_response(const PdeInstance& inst);

/// Direct QUDO of the PDE-constrained problem without the dense reduction.
QudoProblem reduce_pde(const PdeInstance& inst);

/// Field and observation for the discrete assignment x1.
PdeSolution recover_pde(const PdeRecovery& rec, const CVector& x1);
PdeSolution recover_pde(const QudoProblem& qudo, const CVector& x1);

/// The equivalent general problem over x = [x1; x2a; x2b].  Needs a
/// materializable E; throws OperatorNotMaterializable otherwise.
QcmdoProblem build_qcmdo_from_pde(const PdeInstance& inst);

/// G = (RJ)^{P H} diag(dbar) (RJ)^P, which makes H = diag(dbar).
/// Throws TooManyDiscrete when n1 > n2a and RankDeficientRJ when RJ lacks
/// full column rank.
CMatrix design_metric_for_diagonal_H(const PdeInstance& inst, const RVector& dbar);

/// Minimizes a QUDO with diagonal H one variable at a time.
QudoSolution solve_separable(const QudoProblem& qudo);

}  // namespace qcmdo
