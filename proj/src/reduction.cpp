#include "qcmdo/reduction.hpp"

#include <cmath>
#include <limits>

namespace qcmdo {

CVector ConstraintElimination::assemble(const CVector& x1, const CVector& x2bar) const {
    if (x1.size() != n1() || x2bar.size() != n2bar()) {
        throw Error(ErrorCode::DimensionMismatch, "assemble: expected x1 of length n1 and x2bar of length n2 - m");
    }
    const CVector x2 = x2_particular_const + x2_particular_lin * x1 + Vbar * x2bar;
    return blocks.assemble(x1, x2);
}

double ConstraintElimination::reduced_objective(const CVector& x1, const CVector& x2bar) const {
    CVector xbar(n1() + n2bar());
    xbar << x1, x2bar;
    return xbar.dot(Abar * xbar).real() + xbar.dot(bbar).real() + cbar;
}

ConstraintElimination eliminate_constraints(const QcmdoProblem& problem) {
    const auto report = validate(problem);
    if (report.has("rank(F2) = m")) {
        throw Error(ErrorCode::RankDeficientF2,
                    "F2 does not have linearly independent rows; the constraints are not "
                    "satisfiable for every discrete assignment");
    }
    if (!report.ok()) throw Error(ErrorCode::InvalidProblem, report.summary());

    ConstraintElimination out;
    out.blocks = partition(problem);
    const auto& blk = out.blocks;
    const Index n1 = blk.n1();
    const Index n2 = blk.n2();
    const Index m = problem.m();

    if (m == 0) {
        out.U = CMatrix(0, 0);
        out.D = RVector(0);
        out.V = CMatrix(n2, 0);
        out.Vbar = CMatrix::Identity(n2, n2);
        out.F2_pinv = CMatrix(n2, 0);
        out.x2_particular_const = CVector::Zero(n2);
    } else {
        Eigen::BDCSVD<CMatrix> svd(blk.F2, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const RVector& sv = svd.singularValues();
        const double cutoff = static_cast<double>(std::max(m, n2)) *
                              std::numeric_limits<double>::epsilon() * sv(0);
        if (sv(m - 1) <= cutoff) {
            throw Error(ErrorCode::RankDeficientF2,
                        "smallest singular value of F2 is below the numerical rank cutoff");
        }
        out.U = svd.matrixU();
        out.D = sv.head(m);
        out.V = svd.matrixV().leftCols(m);
        out.Vbar = svd.matrixV().rightCols(n2 - m);
        out.F2_pinv = out.V * out.D.cwiseInverse().asDiagonal() * out.U.adjoint();
        out.x2_particular_const = out.F2_pinv * problem.d();
    }
    out.x2_particular_lin = -out.F2_pinv * blk.F1;
    if (m == 0) out.x2_particular_lin = CMatrix::Zero(n2, n1);

    const Index r = out.Vbar.cols();
    out.W = CMatrix::Zero(n1 + n2, n1 + r);
    out.W.topLeftCorner(n1, n1).setIdentity();
    out.W.bottomLeftCorner(n2, n1) = out.x2_particular_lin;
    out.W.bottomRightCorner(n2, r) = out.Vbar;

    CMatrix a_part(n1 + n2, n1 + n2);
    a_part << blk.A11, blk.A12, blk.A21, blk.A22;
    CVector b_part(n1 + n2);
    b_part << blk.b1, blk.b2;
    CVector z = CVector::Zero(n1 + n2);
    z.tail(n2) = out.x2_particular_const;

    out.Abar = linalg::hermitian_part(out.W.adjoint() * a_part * out.W);
    out.bbar = out.W.adjoint() * b_part + 2.0 * (out.W.adjoint() * (a_part * z));
    const CVector& z2 = out.x2_particular_const;
    out.cbar = problem.c() + z2.dot(blk.A22 * z2).real() + z2.dot(blk.b2).real();
    return out;
}

QudoProblem to_qudo(const ConstraintElimination& elim, const QcmdoProblem& problem) {
    const Index n1 = elim.n1();
    const Index r = elim.n2bar();
    const CMatrix a11 = elim.Abar.topLeftCorner(n1, n1);
    const CMatrix a12 = elim.Abar.topRightCorner(n1, r);
    const CMatrix a21 = elim.Abar.bottomLeftCorner(r, n1);
    const CMatrix a22 = elim.Abar.bottomRightCorner(r, r);
    const CVector b1 = elim.bbar.head(n1);
    const CVector b2 = elim.bbar.tail(r);

    CMatrix pinv = CMatrix::Zero(r, r);
    if (r > 0) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(a22);
        const RVector& lam = es.eigenvalues();
        const CMatrix& q = es.eigenvectors();
        const double scale = lam.cwiseAbs().maxCoeff();
        const double band = kPsdTolerance * scale;
        if (lam(0) < -band) {
            throw Error(ErrorCode::UnboundedBelow,
                        "the reduced continuous block is not positive semidefinite (eigenvalue " +
                                std::to_string(lam(0)) + ")");
        }
        const double tol = 1e-8 * std::max({1.0, b2.norm(), a21.norm()});
        for (Index k = 0; k < r; ++k) {
            if (std::abs(lam(k)) <= band) {
                const auto nu = q.col(k);
                if (std::abs(nu.dot(b2)) > tol || (nu.adjoint() * a21).norm() > tol) {
                    throw Error(ErrorCode::UnboundedLinear,
                                "a nullspace direction of the reduced continuous block is not "
                                "orthogonal to its linear term");
                }
                continue;
            }
            pinv.noalias() += (1.0 / lam(k)) * q.col(k) * q.col(k).adjoint();
        }
        pinv = linalg::hermitian_part(pinv);
    }

    QudoProblem out;
    out.H = linalg::hermitian_part(a11 - a12 * pinv * a21);
    out.g = b1 - a12 * (pinv * b2);
    out.f = elim.cbar - 0.25 * b2.dot(pinv * b2).real();
    for (const auto& d : problem.domains()) {
        if (d.is_discrete()) out.domains.push_back(d);
    }
    out.recovery = ContinuousRecovery{elim.blocks, pinv, b2, a21, elim.Vbar,
                                      elim.x2_particular_const, elim.x2_particular_lin};
    return out;
}

QudoProblem reduce(const QcmdoProblem& problem) {
    return to_qudo(eliminate_constraints(problem), problem);
}

CVector recover_continuous(const ContinuousRecovery& rec, const CVector& x1) {
    if (x1.size() != rec.x2_particular_lin.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "recover_continuous: x1 must have length n1");
    }
    const CVector x2bar = -(rec.A22bar_pinv * (0.5 * rec.bbar2 + rec.Abar21 * x1));
    return rec.x2_particular_const + rec.x2_particular_lin * x1 + rec.Vbar * x2bar;
}

CVector recover_continuous(const QudoProblem& qudo, const CVector& x1) {
    if (const auto* rec = std::get_if<ContinuousRecovery>(&qudo.recovery)) {
        return recover_continuous(*rec, x1);
    }
    throw Error(ErrorCode::InvalidArgument, "this QUDO carries no dense continuous recovery data");
}

double qudo_value(const QudoProblem& qudo, const CVector& x1) {
    if (x1.size() != qudo.n1()) {
        throw Error(ErrorCode::DimensionMismatch, "qudo_value: x1 must have length n1");
    }
    return x1.dot(qudo.H * x1).real() + x1.dot(qudo.g).real() + qudo.f;
}

QudoSolution solve_qudo_exhaustive(const QudoProblem& qudo) {
    const Index n1 = qudo.n1();
    std::vector<std::size_t> digit(static_cast<std::size_t>(n1), 0);
    CVector x(n1);
    for (Index i = 0; i < n1; ++i) x(i) = qudo.domains[static_cast<std::size_t>(i)].values().front();

    QudoSolution best{x, qudo_value(qudo, x)};
    while (true) {
        Index i = 0;
        for (; i < n1; ++i) {
            const auto& vals = qudo.domains[static_cast<std::size_t>(i)].values();
            auto& dgt = digit[static_cast<std::size_t>(i)];
            if (++dgt < vals.size()) {
                x(i) = vals[dgt];
                break;
            }
            dgt = 0;
            x(i) = vals.front();
        }
        if (i == n1) break;
        const double v = qudo_value(qudo, x);
        if (v < best.value) best = {x, v};
    }
    return best;
}

}  // namespace qcmdo
