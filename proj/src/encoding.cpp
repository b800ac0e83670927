#include "qcmdo/encoding.hpp"

#include <bit>
#include <cmath>

namespace qcmdo {

namespace {

constexpr double kSpacingTolerance = 1e-9;

struct LineFit {
    Complex start;
    Complex step;
    std::vector<Complex> ordered;
};

std::optional<LineFit> fit_even_spacing(const std::vector<Complex>& vals) {
    const std::size_t n = vals.size();
    if (n == 1) return LineFit{vals[0], Complex{}, vals};

    std::size_t ia = 0, ib = 1;
    double diameter = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = std::abs(vals[i] - vals[j]);
            if (dist > diameter) {
                diameter = dist;
                ia = i;
                ib = j;
            }
        }
    }
    if (canonical_less(vals[ib], vals[ia])) std::swap(ia, ib);

    LineFit fit{vals[ia], (vals[ib] - vals[ia]) / static_cast<double>(n - 1), {}};
    const double tol = kSpacingTolerance * diameter;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex target = fit.start + static_cast<double>(k) * fit.step;
        const Complex* match = nullptr;
        for (const auto& v : vals) {
            if (std::abs(v - target) <= tol) {
                match = &v;
                break;
            }
        }
        if (!match) return std::nullopt;
        fit.ordered.push_back(*match);
    }
    return fit;
}

}  // namespace

bool qualifies_for_binary_expansion(const VariableDomain& domain) {
    const auto& vals = domain.values();
    return domain.is_discrete() && !vals.empty() && std::has_single_bit(vals.size()) &&
           fit_even_spacing(vals).has_value();
}

VariableEncoding encode_binary_expansion(const VariableDomain& domain) {
    const auto& vals = domain.values();
    if (!domain.is_discrete() || vals.empty()) {
        throw Error(ErrorCode::InvalidArgument, "binary expansion needs a nonempty discrete domain");
    }
    if (!std::has_single_bit(vals.size())) {
        throw Error(ErrorCode::NotPowerOfTwo,
                    "binary expansion needs 2^p values, got " + std::to_string(vals.size()));
    }
    auto fit = fit_even_spacing(vals);
    if (!fit) throw Error(ErrorCode::NotEvenlySpaced, "values are not evenly spaced along a line");

    VariableEncoding enc;
    enc.scheme = EncodingScheme::BinaryExpansion;
    enc.offset = fit->start;
    const int p = std::countr_zero(vals.size());
    for (int j = 0; j < p; ++j) enc.coeffs.push_back(std::ldexp(1.0, j) * fit->step);
    enc.value_table = std::move(fit->ordered);
    return enc;
}

VariableEncoding encode_one_hot(const VariableDomain& domain) {
    if (!domain.is_discrete() || domain.values().empty()) {
        throw Error(ErrorCode::InvalidArgument, "one-hot encoding needs a nonempty discrete domain");
    }
    VariableEncoding enc;
    enc.scheme = EncodingScheme::OneHot;
    enc.offset = Complex{};
    enc.coeffs = domain.values();
    enc.value_table = domain.values();
    return enc;
}

std::vector<VariableEncoding> choose_encodings(const std::vector<VariableDomain>& domains,
                                               EncodingPolicy policy) {
    std::vector<VariableEncoding> out;
    out.reserve(domains.size());
    for (const auto& d : domains) {
        if (policy == EncodingPolicy::PreferBinaryExpansionElseOneHot &&
            qualifies_for_binary_expansion(d)) {
            out.push_back(encode_binary_expansion(d));
        } else {
            out.push_back(encode_one_hot(d));
        }
    }
    return out;
}

RMatrix symmetrize(const RMatrix& m) {
    if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "QUBO matrix has non-finite entries");
    return 0.5 * (m + m.transpose());
}

double spectral_norm(const RMatrix& m) {
    const Index p = m.rows();
    if (p == 0) return 0.0;
    if (p <= 64) {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    RVector v = RVector::Ones(p) / std::sqrt(static_cast<double>(p));
    double est = 0.0;
    for (int it = 0; it < 200; ++it) {
        // Powers of M^2 converge to the dominant |eigenvalue| even when the
        // extreme eigenvalues have opposite signs.
        RVector w = m * (m * v);
        const double nrm = w.norm();
        if (nrm == 0.0) return 0.0;
        const double next = std::sqrt(nrm);
        v = w / nrm;
        if (std::abs(next - est) <= 1e-6 * next) return next;
        est = next;
    }
    return est;
}

QuboProblem assemble_qubo(const QudoProblem& qudo, const std::vector<VariableEncoding>& encodings) {
    const Index n1 = qudo.n1();
    if (static_cast<Index>(encodings.size()) != n1) {
        throw Error(ErrorCode::DimensionMismatch, "one encoding per discrete variable is required");
    }
    std::size_t p = 0;
    for (const auto& e : encodings) p += e.bits();

    CMatrix t = CMatrix::Zero(n1, static_cast<Index>(p));
    CVector xstar(n1);
    std::size_t col = 0;
    OneHotPenalty penalty;
    for (Index i = 0; i < n1; ++i) {
        const auto& e = encodings[static_cast<std::size_t>(i)];
        xstar(i) = e.offset;
        for (std::size_t j = 0; j < e.bits(); ++j) t(i, static_cast<Index>(col + j)) = e.coeffs[j];
        if (e.scheme == EncodingScheme::OneHot) penalty.blocks.emplace_back(col, col + e.bits());
        col += e.bits();
    }

    const CMatrix quad = t.adjoint() * qudo.H * t;
    const CVector lin = t.adjoint() * (qudo.g + 2.0 * (qudo.H * xstar));
    RMatrix m = quad.real();
    m.diagonal() += lin.real();

    QuboProblem out;
    out.M = symmetrize(m);
    out.k = qudo.f + xstar.dot(qudo.H * xstar).real() + xstar.dot(qudo.g).real();
    out.encodings = encodings;

    if (!penalty.blocks.empty()) {
        const double norm = spectral_norm(out.M);
        // A zero matrix would give lambda = 0 and let invalid states tie.
        penalty.lambda = norm > 0.0 ? 2.0 * static_cast<double>(p) * norm : 1.0;
        for (const auto& [lo, hi] : penalty.blocks) {
            for (auto i = lo; i < hi; ++i) {
                for (auto j = lo; j < hi; ++j) {
                    out.M(static_cast<Index>(i), static_cast<Index>(j)) +=
                            (i == j) ? -penalty.lambda : penalty.lambda;
                }
            }
            out.k += penalty.lambda;
        }
        out.penalty = std::move(penalty);
    }
    return out;
}

QuboProblem assemble_qubo(const QudoProblem& qudo, EncodingPolicy policy) {
    return assemble_qubo(qudo, choose_encodings(qudo.domains, policy));
}

Decoded decode(const QuboProblem& qubo, const Bits& s) {
    if (s.size() != qubo.p()) throw Error(ErrorCode::DimensionMismatch, "decode: bitstring length != p");
    Decoded out{CVector(static_cast<Index>(qubo.encodings.size())), true};
    std::size_t col = 0;
    for (std::size_t i = 0; i < qubo.encodings.size(); ++i) {
        const auto& e = qubo.encodings[i];
        Complex value;
        if (e.scheme == EncodingScheme::BinaryExpansion) {
            std::size_t idx = 0;
            for (std::size_t j = 0; j < e.bits(); ++j) idx |= static_cast<std::size_t>(s[col + j] & 1) << j;
            value = e.value_table[idx];
        } else {
            std::size_t set = 0, where = 0;
            value = e.offset;
            for (std::size_t j = 0; j < e.bits(); ++j) {
                if (s[col + j]) {
                    ++set;
                    where = j;
                    value += e.coeffs[j];
                }
            }
            if (set == 1) {
                value = e.value_table[where];
            } else {
                out.valid = false;
            }
        }
        out.x1(static_cast<Index>(i)) = value;
        col += e.bits();
    }
    return out;
}

Bits encode_value(const VariableEncoding& enc, const Complex& value) {
    for (std::size_t k = 0; k < enc.value_table.size(); ++k) {
        if (enc.value_table[k] != value) continue;
        Bits out(enc.bits(), 0);
        if (enc.scheme == EncodingScheme::BinaryExpansion) {
            for (std::size_t j = 0; j < enc.bits(); ++j) out[j] = static_cast<std::uint8_t>((k >> j) & 1U);
        } else {
            out[k] = 1;
        }
        return out;
    }
    throw Error(ErrorCode::InvalidArgument, "value is not a member of the encoded domain");
}

double qubo_value(const QuboProblem& qubo, const Bits& s) {
    if (s.size() != qubo.p()) throw Error(ErrorCode::DimensionMismatch, "qubo_value: bitstring length != p");
    const Index p = qubo.M.rows();
    double acc = 0.0;
    for (Index i = 0; i < p; ++i) {
        if (!s[static_cast<std::size_t>(i)]) continue;
        double row = qubo.M(i, i);
        for (Index j = i + 1; j < p; ++j) {
            if (s[static_cast<std::size_t>(j)]) row += 2.0 * qubo.M(i, j);
        }
        acc += row;
    }
    return acc + qubo.k;
}

}  // namespace qcmdo
