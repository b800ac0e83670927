#include "qcmdo/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace qcmdo {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidProblem: return "invalid-problem";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::RankDeficientF2: return "rank-deficient-F2";
        case ErrorCode::UnboundedBelow: return "unbounded-below";
        case ErrorCode::UnboundedLinear: return "unbounded-linear";
        case ErrorCode::NotPowerOfTwo: return "not-a-power-of-two";
        case ErrorCode::NotEvenlySpaced: return "not-evenly-spaced";
        case ErrorCode::SolverFailure: return "solver-failure";
        case ErrorCode::OperatorNotMaterializable: return "operator-not-materializable";
        case ErrorCode::RankDeficientRJ: return "rank-deficient-RJ";
        case ErrorCode::TooManyDiscrete: return "n1-exceeds-n2a";
        case ErrorCode::QubitCapExceeded: return "qubit-cap-exceeded";
        case ErrorCode::EigensolverFailure: return "eigensolver-failure";
        case ErrorCode::ParseError: return "parse-error";
        case ErrorCode::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

namespace linalg {

CMatrix hermitian_part(const CMatrix& a) {
    CMatrix h = a;
    const Index n = a.rows();
    for (Index i = 0; i < n; ++i) {
        h(i, i) = Complex(a(i, i).real(), 0.0);
        for (Index j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

double max_abs(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermitian_norm2(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

CMatrix hermitian_pinv(const CMatrix& a, double cutoff) {
    const Index n = a.rows();
    if (n == 0) return CMatrix(0, 0);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    const RVector& lam = es.eigenvalues();
    const CMatrix& q = es.eigenvectors();
    CMatrix out = CMatrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
        if (std::abs(lam(k)) <= cutoff) continue;
        out.noalias() += (1.0 / lam(k)) * q.col(k) * q.col(k).adjoint();
    }
    return hermitian_part(out);
}

namespace {

double svd_cutoff(const Eigen::JacobiSVD<CMatrix>& svd, Index rows, Index cols) {
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0.0;
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
           sv(0);
}

}  // namespace

CMatrix pinv(const CMatrix& a) {
    if (a.size() == 0) return CMatrix::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cut = svd_cutoff(svd, a.rows(), a.cols());
    const auto& sv = svd.singularValues();
    RVector inv = RVector::Zero(sv.size());
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cut) inv(k) = 1.0 / sv(k);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Index rank(const CMatrix& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    const double cut = svd_cutoff(svd, a.rows(), a.cols());
    const auto& sv = svd.singularValues();
    Index r = 0;
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cut) ++r;
    }
    return r;
}

RMatrix psd_sqrt(const RMatrix& a) {
    if (a.size() == 0) return RMatrix(0, 0);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(a);
    RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    RMatrix out = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

CMatrix take(const CMatrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
    CMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Index>(i), static_cast<Index>(j)) = a(rows[i], cols[j]);
        }
    }
    return out;
}

CVector take(const CVector& v, const std::vector<Index>& idx) {
    CVector out(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
    return out;
}

}  // namespace linalg

int hamming_distance(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "hamming_distance: length mismatch");
    }
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

std::string bits_to_string(const Bits& s) {
    std::string out;
    out.reserve(s.size());
    for (auto b : s) out.push_back(b ? '1' : '0');
    return out;
}

Bits bits_from_mask(std::uint64_t mask, std::size_t p) {
    Bits s(p);
    for (std::size_t i = 0; i < p; ++i) s[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
    return s;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
    }
    return v;
}

Bits bits_from_string(const std::string& text) {
    Bits out;
    out.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1') {
            throw Error(ErrorCode::ParseError, "bitstring may contain only '0' and '1': " + text);
        }
        out.push_back(ch == '1' ? 1 : 0);
    }
    return out;
}

}  // namespace qcmdo
