#pragma once

#include <cstddef>
#include <vector>

#include "qcmdo/encoding.hpp"
#include "qcmdo/lanczos.hpp"

namespace qcmdo {

/// Coefficients of the annealing Hamiltonian
///     H(w) = (w - 1) sum_i X_i + (w / Lambda) [sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j]
/// with h = M 1, J_ij = M_ij.  Bit i of a basis state maps to the Z
/// eigenvalue z_i = 2 s_i - 1, so the diagonal at w = 1 is an increasing
/// affine function of s^T M s.
struct IsingProgram {
    std::size_t p = 0;
    RVector linear;
    /// Strictly upper triangle holds J_ij; the rest is zero.
    RMatrix quadratic;
    double lambda = 1.0;
};

IsingProgram build_ising(const QuboProblem& qubo);

inline constexpr std::size_t kDefaultSpectralCap = 20;

/// Problem part (w = 1) of the Hamiltonian for every basis state, indexed
/// with bit i of the index equal to s_i.
RVector problem_diagonal(const IsingProgram& prog);

/// H(w) as a sparse operator: a diagonal plus p bit-flip bands.
class IsingHamiltonian {
public:
    IsingHamiltonian(const IsingProgram& prog, double w, std::size_t qubit_cap = kDefaultSpectralCap);
    IsingHamiltonian(std::size_t p, RVector scaled_diagonal, double transverse);

    std::size_t qubits() const noexcept { return p_; }
    Index dimension() const noexcept { return diag_.size(); }
    const RVector& diagonal() const noexcept { return diag_; }
    /// Coefficient of sum_i X_i, i.e. w - 1.
    double transverse() const noexcept { return transverse_; }

    void apply(const RVector& x, RVector& y) const;
    RVector apply(const RVector& x) const;
    RMatrix to_dense() const;

private:
    std::size_t p_;
    RVector diag_;
    double transverse_;
};

/// Throws QubitCapExceeded.
IsingHamiltonian hamiltonian_at(const IsingProgram& prog, double w,
                                std::size_t qubit_cap = kDefaultSpectralCap);

struct GapSample {
    double w = 0.0;
    double e0 = 0.0;
    double e1 = 0.0;

    double gap() const noexcept { return e1 - e0; }
};

struct GapSweep {
    std::vector<GapSample> samples;
    double min_gap = 0.0;
    double argmin_w = 0.0;
    double final_gap = 0.0;
};

struct SweepOptions {
    int grid = 101;
    bool refine = true;
    double refine_width = 1e-4;
    std::size_t qubit_cap = kDefaultSpectralCap;
    /// Dense diagonalization up to this many qubits, Lanczos above.
    std::size_t dense_cap = 8;
    LanczosOptions lanczos{};
};

/// Lowest two eigenvalues of H(w), counting multiplicity.
std::pair<double, double> lowest_two(const IsingHamiltonian& h, const SweepOptions& opts = {});

/// E0 and E1 on the uniform w grid, optionally refined around the smallest
/// gap by golden-section search.  Samples are sorted by w; the last one is
/// w = 1.
GapSweep sweep_gaps(const IsingProgram& prog, const SweepOptions& opts = {});

struct ScoredState {
    Bits s;
    double value = 0.0;
};

inline constexpr std::size_t kDefaultExhaustiveCap = 30;
inline constexpr double kTieTolerance = 1e-12;

/// The `count` lowest bitstrings by s^T M s + k, ascending; values within
/// 1e-12 count as ties and are ordered lexicographically (s_0 first).
std::vector<ScoredState> classical_bottom_states(const QuboProblem& qubo, std::size_t count,
                                                 std::size_t qubit_cap = kDefaultExhaustiveCap);

}  // namespace qcmdo
