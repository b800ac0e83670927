#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcmdo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A bitstring stored one bit per entry; entries are 0 or 1.
using Bits = std::vector<std::uint8_t>;

enum class ErrorCode {
    InvalidProblem,
    DimensionMismatch,
    RankDeficientF2,
    UnboundedBelow,
    UnboundedLinear,
    NotPowerOfTwo,
    NotEvenlySpaced,
    SolverFailure,
    OperatorNotMaterializable,
    RankDeficientRJ,
    TooManyDiscrete,
    QubitCapExceeded,
    EigensolverFailure,
    ParseError,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Every fallible operation in the library throws this.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
            : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace linalg {

/// (A + A^H) / 2.  Exactly Hermitian entrywise.
CMatrix hermitian_part(const CMatrix& a);

/// Largest |a_ij|, 0 for an empty matrix.
double max_abs(const CMatrix& a);

/// Spectral norm of a Hermitian matrix via its eigenvalues.
double hermitian_norm2(const CMatrix& a);

/// Moore-Penrose pseudoinverse of a Hermitian matrix through its
/// eigendecomposition.  Eigenvalues with |lambda| <= cutoff are dropped.
CMatrix hermitian_pinv(const CMatrix& a, double cutoff);

/// Pseudoinverse of a general matrix through SVD with the usual numerical
/// rank cutoff max(rows, cols) * eps * sigma_max.
CMatrix pinv(const CMatrix& a);

/// Numerical rank with the same cutoff as pinv().
Index rank(const CMatrix& a);

/// Symmetric principal square root, eigenvalues clamped at zero.
RMatrix psd_sqrt(const RMatrix& a);

/// Gather rows/cols of a matrix by index lists.
CMatrix take(const CMatrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols);
CVector take(const CVector& v, const std::vector<Index>& idx);

}  // namespace linalg

/// Number of differing positions; the strings must have equal length.
int hamming_distance(const Bits& a, const Bits& b);

std::string bits_to_string(const Bits& s);

Bits bits_from_string(const std::string& text);

/// Bit i of the mask becomes s_i.
Bits bits_from_mask(std::uint64_t mask, std::size_t p);

/// printf("%.17g") text, locale independent.  parse_double() of the result
/// gives back the same double.
std::string format_double(double v);
double parse_double(const std::string& text);

}  // namespace qcmdo
