#pragma once

#include <cstdint>

#include "qcmdo/annealer.hpp"

namespace qcmdo {

struct ExhaustiveResult {
    Bits s;
    double value = 0.0;
    /// False when another bitstring is within 1e-12 of the minimum.
    bool is_unique = true;
};

/// Gray-code enumeration of all 2^p states.  Ties resolve to the
/// lexicographically smallest bitstring.  Throws QubitCapExceeded.
ExhaustiveResult solve_exhaustive(const QuboProblem& qubo, std::size_t qubit_cap = kDefaultExhaustiveCap);

/// Single-bit-flip Metropolis annealing with a geometric temperature ramp.
///
/// Randomness: each restart r runs its own std::mt19937_64 seeded with
/// splitmix64(seed + r); uniforms are the top 53 bits scaled to [0, 1).
/// The result is a pure function of the schedule and the QUBO.
struct SaSchedule {
    int sweeps = 200;
    double T_initial = 1.0;
    double T_final = 1e-3;
    int restarts = 10;
    std::uint64_t seed = 0;

    /// Temperatures scaled to the QUBO: T_initial is the largest single-flip
    /// energy change, T_final a thousandth of it.
    static SaSchedule automatic(const QuboProblem& qubo, int sweeps = 200, int restarts = 10,
                                std::uint64_t seed = 0);
};

struct SaResult {
    Bits s;
    double value = 0.0;
};

/// Throws InvalidArgument for an inconsistent schedule.
SaResult solve_sa(const QuboProblem& qubo, const SaSchedule& schedule);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qcmdo
