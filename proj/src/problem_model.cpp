#include "qcmdo/problem_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcmdo {

bool canonical_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

VariableDomain VariableDomain::continuous() { return VariableDomain{}; }

VariableDomain VariableDomain::discrete(std::vector<Complex> values) {
    std::sort(values.begin(), values.end(), canonical_less);
    VariableDomain out;
    out.values_ = std::move(values);
    return out;
}

const std::vector<Complex>& VariableDomain::values() const {
    static const std::vector<Complex> empty;
    return values_ ? *values_ : empty;
}

QcmdoProblem::QcmdoProblem(CMatrix a, CVector b, Complex c, CMatrix f, CVector d,
                           std::vector<VariableDomain> domains)
        : b_(std::move(b)),
          c_(c.real()),
          c_imag_(c.imag()),
          f_(std::move(f)),
          d_(std::move(d)),
          domains_(std::move(domains)) {
    if (a.rows() == a.cols() && a.size() > 0) {
        const double scale = linalg::max_abs(a);
        const double defect = linalg::max_abs(a - a.adjoint());
        hermiticity_defect_ = scale > 0.0 ? defect / scale : 0.0;
        a_ = linalg::hermitian_part(a);
    } else {
        a_ = std::move(a);
    }
}

Index QcmdoProblem::n_discrete() const {
    return static_cast<Index>(
            std::count_if(domains_.begin(), domains_.end(), [](const auto& d) { return d.is_discrete(); }));
}

Index QcmdoProblem::n_continuous() const { return n() - n_discrete(); }

bool ValidationReport::has(const std::string& code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i].code << ": " << violations[i].message;
    }
    return out.str();
}

namespace {

bool all_finite(const CMatrix& a) {
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
        }
    }
    return true;
}

std::vector<Index> indices_where(const QcmdoProblem& p, bool discrete) {
    std::vector<Index> out;
    for (Index i = 0; i < p.n(); ++i) {
        if (p.domains()[static_cast<std::size_t>(i)].is_discrete() == discrete) out.push_back(i);
    }
    return out;
}

std::vector<Index> all_rows(Index m) {
    std::vector<Index> out(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
}

}  // namespace

ValidationReport validate(const QcmdoProblem& problem) {
    ValidationReport report;
    auto add = [&](std::string code, std::string message) {
        report.violations.push_back({std::move(code), std::move(message)});
    };

    const Index n = problem.n();
    const Index m = problem.F().rows();
    bool shapes_ok = true;
    if (problem.A().rows() != n || problem.A().cols() != n) {
        add("dimension", "A must be n x n with n = number of domains");
        shapes_ok = false;
    }
    if (problem.b().size() != n) {
        add("dimension", "b must have length n");
        shapes_ok = false;
    }
    if (m > 0 && problem.F().cols() != n) {
        add("dimension", "F must have n columns");
        shapes_ok = false;
    }
    if (problem.d().size() != m) {
        add("dimension", "d must have length m (rows of F)");
        shapes_ok = false;
    }

    if (!all_finite(problem.A()) || !all_finite(problem.b()) || !all_finite(problem.F()) ||
        !all_finite(problem.d()) || !std::isfinite(problem.c()) || !std::isfinite(problem.c_imag())) {
        add("non-finite", "all coefficients must be finite");
    }
    if (problem.hermiticity_defect() > kHermiticityTolerance) {
        add("hermiticity", "A is not Hermitian within relative tolerance 1e-10");
    }
    if (std::abs(problem.c_imag()) > kComplexConstantTolerance) {
        add("complex-c", "the constant c must be real");
    }

    for (std::size_t i = 0; i < problem.domains().size(); ++i) {
        const auto& dom = problem.domains()[i];
        if (!dom.is_discrete()) continue;
        const auto& vals = dom.values();
        if (vals.empty()) {
            add("empty-domain", "discrete domain of variable " + std::to_string(i) + " is empty");
            continue;
        }
        bool finite = std::all_of(vals.begin(), vals.end(), [](const Complex& z) {
            return std::isfinite(z.real()) && std::isfinite(z.imag());
        });
        if (!finite) add("non-finite", "discrete domain of variable " + std::to_string(i));
        for (std::size_t k = 1; k < vals.size(); ++k) {
            if (vals[k] == vals[k - 1]) {
                add("duplicate-value",
                    "discrete domain of variable " + std::to_string(i) + " repeats a value");
                break;
            }
        }
    }

    const Index n2 = problem.n_continuous();
    if (n2 < m) {
        add("n2 >= m", "need at least as many continuous variables as constraints (n2=" +
                               std::to_string(n2) + ", m=" + std::to_string(m) + ")");
    } else if (shapes_ok && m > 0 && report.ok()) {
        const CMatrix f2 = linalg::take(problem.F(), all_rows(m), indices_where(problem, false));
        if (linalg::rank(f2) < m) {
            add("rank(F2) = m",
                "the continuous block of F must have linearly independent rows");
        }
    }
    return report;
}

CVector BlockPartition::assemble(const CVector& x1, const CVector& x2) const {
    if (x1.size() != n1() || x2.size() != n2()) {
        throw Error(ErrorCode::DimensionMismatch, "assemble: block length mismatch");
    }
    CVector x(n1() + n2());
    for (Index i = 0; i < n1(); ++i) x(discrete_indices[static_cast<std::size_t>(i)]) = x1(i);
    for (Index i = 0; i < n2(); ++i) x(continuous_indices[static_cast<std::size_t>(i)]) = x2(i);
    return x;
}

BlockPartition partition(const QcmdoProblem& problem) {
    auto report = validate(problem);
    if (!report.ok()) throw Error(ErrorCode::InvalidProblem, report.summary());

    BlockPartition out;
    out.discrete_indices = indices_where(problem, true);
    out.continuous_indices = indices_where(problem, false);
    const auto& di = out.discrete_indices;
    const auto& ci = out.continuous_indices;
    const auto rows = all_rows(problem.m());
    out.A11 = linalg::take(problem.A(), di, di);
    out.A12 = linalg::take(problem.A(), di, ci);
    out.A21 = linalg::take(problem.A(), ci, di);
    out.A22 = linalg::take(problem.A(), ci, ci);
    out.b1 = linalg::take(problem.b(), di);
    out.b2 = linalg::take(problem.b(), ci);
    if (problem.m() > 0) {
        out.F1 = linalg::take(problem.F(), rows, di);
        out.F2 = linalg::take(problem.F(), rows, ci);
    } else {
        out.F1 = CMatrix(0, out.n1());
        out.F2 = CMatrix(0, out.n2());
    }
    return out;
}

Reassembled reassemble(const BlockPartition& blocks) {
    const Index n = blocks.n1() + blocks.n2();
    const Index m = blocks.F1.rows();
    Reassembled out{CMatrix(n, n), CVector(n), CMatrix(m, n)};
    const auto& di = blocks.discrete_indices;
    const auto& ci = blocks.continuous_indices;
    auto put = [](CMatrix& dst, const CMatrix& src, const std::vector<Index>& r,
                  const std::vector<Index>& c) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (std::size_t j = 0; j < c.size(); ++j) {
                dst(r[i], c[j]) = src(static_cast<Index>(i), static_cast<Index>(j));
            }
        }
    };
    put(out.A, blocks.A11, di, di);
    put(out.A, blocks.A12, di, ci);
    put(out.A, blocks.A21, ci, di);
    put(out.A, blocks.A22, ci, ci);
    for (std::size_t i = 0; i < di.size(); ++i) out.b(di[i]) = blocks.b1(static_cast<Index>(i));
    for (std::size_t i = 0; i < ci.size(); ++i) out.b(ci[i]) = blocks.b2(static_cast<Index>(i));
    const auto rows = all_rows(m);
    put(out.F, blocks.F1, rows, di);
    put(out.F, blocks.F2, rows, ci);
    return out;
}

double evaluate_objective(const QcmdoProblem& problem, const CVector& x) {
    if (x.size() != problem.n() || problem.A().rows() != problem.n()) {
        throw Error(ErrorCode::DimensionMismatch, "evaluate_objective: x must have length n");
    }
    const Complex quad = x.dot(problem.A() * x);
    if (std::abs(quad.imag()) > 1e-10 * (1.0 + std::abs(quad))) {
        throw Error(ErrorCode::InvalidProblem, "x^H A x has a non-negligible imaginary part");
    }
    return quad.real() + x.dot(problem.b()).real() + problem.c();
}

bool check_constraints(const QcmdoProblem& problem, const CVector& x, double tol) {
    if (x.size() != problem.n()) {
        throw Error(ErrorCode::DimensionMismatch, "check_constraints: x must have length n");
    }
    if (problem.m() > 0) {
        const double residual = (problem.F() * x - problem.d()).norm();
        if (residual > tol * std::max(1.0, problem.d().norm())) return false;
    }
    for (Index i = 0; i < problem.n(); ++i) {
        const auto& dom = problem.domains()[static_cast<std::size_t>(i)];
        if (!dom.is_discrete()) continue;
        const auto& vals = dom.values();
        const bool member = std::any_of(vals.begin(), vals.end(),
                                        [&](const Complex& v) { return std::abs(v - x(i)) <= tol; });
        if (!member) return false;
    }
    return true;
}

}  // namespace qcmdo
