#pragma once

#include <bit>
#include <cstdint>

#include "qcmdo/core.hpp"

namespace qcmdo::detail {

/// Visits all 2^p bitstrings in Gray-code order with s^T M s + k kept up to
/// date by single-flip updates.  visit(x, lex_key, value) receives the state
/// as a bitmask (bit i = s_i) and the key that orders states
/// lexicographically with s_0 most significant.  Local fields are rebuilt
/// from scratch every 4096 steps to bound round-off drift.
template <class Visit>
void for_each_state(const RMatrix& m, double k, Visit&& visit) {
    const int p = static_cast<int>(m.rows());
    std::uint64_t x = 0, key = 0;
    RVector field = RVector::Zero(p);  // sum_{j != i} M_ij s_j
    double value = k;
    visit(x, key, value);
    const std::uint64_t total = std::uint64_t{1} << p;
    for (std::uint64_t t = 1; t < total; ++t) {
        const int i = std::countr_zero(t);
        const bool was = (x >> i) & 1U;
        value += (was ? -1.0 : 1.0) * (m(i, i) + 2.0 * field(i));
        x ^= std::uint64_t{1} << i;
        key ^= std::uint64_t{1} << (p - 1 - i);
        const double sign = was ? -1.0 : 1.0;
        for (int j = 0; j < p; ++j) {
            if (j != i) field(j) += sign * m(j, i);
        }
        if ((t & 4095U) == 0) {
            value = k;
            for (int a = 0; a < p; ++a) {
                double f = 0.0;
                for (int b = 0; b < p; ++b) {
                    if (b != a && ((x >> b) & 1U)) f += m(a, b);
                }
                field(a) = f;
                if ((x >> a) & 1U) value += m(a, a) + f;
            }
        }
        visit(x, key, value);
    }
}

}  // namespace qcmdo::detail
