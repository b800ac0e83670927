#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qcmdo/reduction.hpp"

namespace qcmdo {

enum class EncodingScheme { BinaryExpansion, OneHot };

/// Affine map x_i = offset + sum_j coeffs[j] * s_j from a bit block to one
/// discrete variable.
///
/// value_table[k] is the domain element the block decodes to: for binary
/// expansion k is the block read as a little-endian integer, for one-hot it
/// is the position of the set bit.  Decoding reads the table so decoded
/// values are exact domain members.
struct VariableEncoding {
    EncodingScheme scheme = EncodingScheme::BinaryExpansion;
    Complex offset{};
    std::vector<Complex> coeffs;
    std::vector<Complex> value_table;

    std::size_t bits() const noexcept { return coeffs.size(); }
};

/// Requires |S| = 2^p and S evenly spaced along a line (relative tolerance
/// 1e-9 of the set diameter).  Throws NotPowerOfTwo / NotEvenlySpaced.
VariableEncoding encode_binary_expansion(const VariableDomain& domain);

/// One bit per value; valid states have exactly one bit set.
VariableEncoding encode_one_hot(const VariableDomain& domain);

/// True when encode_binary_expansion() would succeed.
bool qualifies_for_binary_expansion(const VariableDomain& domain);

enum class EncodingPolicy { PreferBinaryExpansionElseOneHot, ForceOneHot };

std::vector<VariableEncoding> choose_encodings(const std::vector<VariableDomain>& domains,
                                               EncodingPolicy policy);

struct OneHotPenalty {
    double lambda = 0.0;
    /// Half-open bit ranges [first, second) of the one-hot blocks.
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
};

/// min s^T M s + k over bitstrings.  M is exactly symmetric.
struct QuboProblem {
    RMatrix M;
    double k = 0.0;
    std::vector<VariableEncoding> encodings;
    std::optional<OneHotPenalty> penalty;

    std::size_t p() const noexcept { return static_cast<std::size_t>(M.rows()); }
};

/// (M + M^T) / 2; throws on non-finite entries.
RMatrix symmetrize(const RMatrix& m);

/// Spectral norm of a symmetric matrix: eigensolve up to 64 rows, power
/// iteration beyond.
double spectral_norm(const RMatrix& m);

/// Builds the QUBO of a QUDO from per-variable encodings.  One-hot blocks
/// receive the penalty lambda * (|s_i|_1 - 1)^2 with lambda = 2 p |M|_2 of the
/// unpenalized matrix.
QuboProblem assemble_qubo(const QudoProblem& qudo, const std::vector<VariableEncoding>& encodings);

/// Same, picking encodings by policy.
QuboProblem assemble_qubo(const QudoProblem& qudo, EncodingPolicy policy);

struct Decoded {
    CVector x1;
    bool valid = true;
};

/// Applies every block's map.  Invalid one-hot blocks decode through the
/// affine map and clear `valid`.
Decoded decode(const QuboProblem& qubo, const Bits& s);

/// Bit block that decodes to `value`; throws InvalidArgument when the value
/// is not in the encoded set.
Bits encode_value(const VariableEncoding& enc, const Complex& value);

/// s^T M s + k.
double qubo_value(const QuboProblem& qubo, const Bits& s);

}  // namespace qcmdo
