#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcmdo/core.hpp"

namespace qcmdo {

/// Either the whole complex plane or a finite set of values.
///
/// Discrete value lists are canonicalized on construction: sorted by
/// (re, im).  Duplicates are kept so that validate() can report them.
class VariableDomain {
public:
    static VariableDomain continuous();
    static VariableDomain discrete(std::vector<Complex> values);

    bool is_continuous() const noexcept { return !values_.has_value(); }
    bool is_discrete() const noexcept { return values_.has_value(); }

    /// Canonically ordered values; empty for a continuous domain.
    const std::vector<Complex>& values() const;

    bool operator==(const VariableDomain&) const = default;

private:
    std::optional<std::vector<Complex>> values_;
};

/// Canonical (re, im) lexicographic order used everywhere a set of
/// complex values needs a deterministic enumeration.
bool canonical_less(const Complex& a, const Complex& b);

/// min  x^H A x + Re(x^H b) + c   s.t.  F x = d,  x_i in S_i.
///
/// A is replaced by its Hermitian part on construction; the size of the
/// removed anti-Hermitian part is kept for validate().  Construction never
/// throws on malformed shapes, so that validate() can describe them.
class QcmdoProblem {
public:
    QcmdoProblem() = default;
    QcmdoProblem(CMatrix a, CVector b, Complex c, CMatrix f, CVector d,
                 std::vector<VariableDomain> domains);

    const CMatrix& A() const noexcept { return a_; }
    const CVector& b() const noexcept { return b_; }
    double c() const noexcept { return c_; }
    /// Imaginary part of c as loaded; nonzero values are a violation.
    double c_imag() const noexcept { return c_imag_; }
    const CMatrix& F() const noexcept { return f_; }
    const CVector& d() const noexcept { return d_; }
    const std::vector<VariableDomain>& domains() const noexcept { return domains_; }

    Index n() const noexcept { return static_cast<Index>(domains_.size()); }
    Index m() const noexcept { return f_.rows(); }
    Index n_discrete() const;
    Index n_continuous() const;

    /// max|A - A^H| relative to max|A| before symmetrization.
    double hermiticity_defect() const noexcept { return hermiticity_defect_; }

private:
    CMatrix a_;
    CVector b_;
    double c_ = 0.0;
    double c_imag_ = 0.0;
    CMatrix f_;
    CVector d_;
    std::vector<VariableDomain> domains_;
    double hermiticity_defect_ = 0.0;
};

struct Violation {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool has(const std::string& code) const;
    std::string summary() const;
};

inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kComplexConstantTolerance = 1e-12;

/// Checks every structural assumption; never throws.
ValidationReport validate(const QcmdoProblem& problem);

/// Discrete/continuous split with the induced blocks of A, b and F.
struct BlockPartition {
    std::vector<Index> discrete_indices;
    std::vector<Index> continuous_indices;
    CMatrix A11, A12, A21, A22;
    CVector b1, b2;
    CMatrix F1, F2;

    Index n1() const noexcept { return static_cast<Index>(discrete_indices.size()); }
    Index n2() const noexcept { return static_cast<Index>(continuous_indices.size()); }

    /// Scatters (x1, x2) back into the original variable order.
    CVector assemble(const CVector& x1, const CVector& x2) const;
};

/// Throws InvalidProblem when validate() reports anything.
BlockPartition partition(const QcmdoProblem& problem);

struct Reassembled {
    CMatrix A;
    CVector b;
    CMatrix F;
};

/// Inverse of partition() on (A, b, F).
Reassembled reassemble(const BlockPartition& blocks);

/// x^H A x + Re(x^H b) + c.
double evaluate_objective(const QcmdoProblem& problem, const CVector& x);

/// Linear constraints within tol * max(1, |d|) and every discrete coordinate
/// within tol of an element of its domain.
bool check_constraints(const QcmdoProblem& problem, const CVector& x, double tol);

}  // namespace qcmdo
