#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "qcmdo/problem_model.hpp"

namespace qcmdo {

/// Affine parametrization of the constraint set F x = d.
///
/// In the partitioned order [x1; x2] every feasible point is
///     x = W xbar + [0; x2_particular_const],   xbar = [x1; x2bar],
/// with W = [[I, 0], [-F2^P F1, Vbar]].  The reduced objective is
///     xbar^H Abar xbar + Re(xbar^H bbar) + cbar.
struct ConstraintElimination {
    BlockPartition blocks;
    CMatrix U;
    RVector D;
    CMatrix V;
    CMatrix Vbar;
    CMatrix F2_pinv;
    CMatrix W;
    CMatrix Abar;
    CVector bbar;
    double cbar = 0.0;
    CVector x2_particular_const;
    CMatrix x2_particular_lin;

    Index n1() const noexcept { return blocks.n1(); }
    /// Dimension of the free continuous remainder, n2 - m.
    Index n2bar() const noexcept { return Vbar.cols(); }

    /// Full x in the problem's original variable order.
    CVector assemble(const CVector& x1, const CVector& x2bar) const;
    double reduced_objective(const CVector& x1, const CVector& x2bar) const;
};

/// Data needed to map a discrete assignment back to the optimal x2.
struct ContinuousRecovery {
    BlockPartition blocks;
    CMatrix A22bar_pinv;
    CVector bbar2;
    CMatrix Abar21;
    CMatrix Vbar;
    CVector x2_particular_const;
    CMatrix x2_particular_lin;
};

/// Recovery for the PDE fast path, defined in pde.hpp.
struct PdeRecovery;

/// min  x1^H H x1 + Re(x1^H g) + f  over the discrete domains.
struct QudoProblem {
    CMatrix H;
    CVector g;
    double f = 0.0;
    std::vector<VariableDomain> domains;
    std::variant<std::monostate, ContinuousRecovery, std::shared_ptr<const PdeRecovery>> recovery;

    Index n1() const noexcept { return H.rows(); }
};

inline constexpr double kPsdTolerance = 1e-10;

/// SVD-based elimination of the linear constraints.  m = 0 yields the
/// identity parametrization.  Throws RankDeficientF2.
ConstraintElimination eliminate_constraints(const QcmdoProblem& problem);

/// Minimizes out the free continuous remainder.  Throws UnboundedBelow when
/// the remaining quadratic block is indefinite and UnboundedLinear when its
/// nullspace sees a linear term.
QudoProblem to_qudo(const ConstraintElimination& elim, const QcmdoProblem& problem);

/// Convenience: validate, eliminate, and minimize in one call.
QudoProblem reduce(const QcmdoProblem& problem);

/// Optimal x2 (continuous order) for the discrete assignment x1.
CVector recover_continuous(const ContinuousRecovery& recovery, const CVector& x1);

/// Same, using the recovery stored by to_qudo().  Throws InvalidArgument
/// for QUDOs that came from elsewhere.
CVector recover_continuous(const QudoProblem& qudo, const CVector& x1);

/// x1^H H x1 + Re(x1^H g) + f.
double qudo_value(const QudoProblem& qudo, const CVector& x1);

struct QudoSolution {
    CVector x1;
    double value = 0.0;
};

/// Enumerates the full product of the discrete domains.
QudoSolution solve_qudo_exhaustive(const QudoProblem& qudo);

}  // namespace qcmdo
