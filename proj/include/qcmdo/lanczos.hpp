#pragma once

#include <functional>
#include <vector>

#include "qcmdo/core.hpp"

namespace qcmdo {

/// y = A x for a real symmetric A.
using SymmetricOperator = std::function<void(const RVector& x, RVector& y)>;

struct LanczosOptions {
    /// Basis size before a thick restart.
    int max_basis = 48;
    /// Converged when every wanted Ritz pair has |A y - theta y| <= tol.
    double tol = 1e-9;
    int max_matvecs = 20000;
    std::uint64_t seed = 0x5eed5eedULL;
};

struct LowestEigs {
    std::vector<double> values;
    std::vector<RVector> vectors;
    int matvecs = 0;
};

/// Lowest `count` eigenpairs of a symmetric operator on R^n by thick-restart
/// Lanczos with full reorthogonalization.  `initial` vectors seed the
/// Krylov space (warm start); a seeded random vector is used otherwise.
/// Throws EigensolverFailure when max_matvecs is exhausted.
LowestEigs lowest_eigenpairs(const SymmetricOperator& op, Index n, int count,
                             const std::vector<RVector>& initial, const LanczosOptions& opts = {});

/// t ~ (theta - A)^-1 r for the Davidson correction equation.
using DavidsonPreconditioner = std::function<void(RVector& r, double theta)>;

/// Same problem by block Davidson.  `guess_diagonal` ranks basis states for
/// the starting vectors when no warm start is given.
LowestEigs lowest_eigenpairs_davidson(const SymmetricOperator& op, const DavidsonPreconditioner& precondition,
                                      const RVector& guess_diagonal, int count,
                                      const std::vector<RVector>& initial, const LanczosOptions& opts = {});

/// Davidson with the preconditioner (theta - D)^-1, D the operator's
/// diagonal.
LowestEigs lowest_eigenpairs_davidson(const SymmetricOperator& op, const RVector& diagonal, int count,
                                      const std::vector<RVector>& initial, const LanczosOptions& opts = {});

}  // namespace qcmdo
