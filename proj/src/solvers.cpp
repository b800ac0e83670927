#include "qcmdo/solvers.hpp"

#include <cmath>
#include <random>

namespace qcmdo {

ExhaustiveResult solve_exhaustive(const QuboProblem& qubo, std::size_t qubit_cap) {
    if (qubo.p() == 0) return {Bits{}, qubo.k, true};
    auto bottom = classical_bottom_states(qubo, 2, qubit_cap);
    ExhaustiveResult out{std::move(bottom[0].s), bottom[0].value, true};
    if (bottom.size() > 1) out.is_unique = bottom[1].value - out.value > kTieTolerance;
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SaSchedule SaSchedule::automatic(const QuboProblem& qubo, int sweeps, int restarts, std::uint64_t seed) {
    double largest = 0.0;
    for (Index i = 0; i < qubo.M.rows(); ++i) {
        double d = std::abs(qubo.M(i, i));
        for (Index j = 0; j < qubo.M.cols(); ++j) {
            if (j != i) d += 2.0 * std::abs(qubo.M(i, j));
        }
        largest = std::max(largest, d);
    }
    if (largest == 0.0) largest = 1.0;
    return SaSchedule{sweeps, largest, largest * 1e-3, restarts, seed};
}

namespace {

bool lex_less(const Bits& a, const Bits& b) { return a < b; }

}  // namespace

SaResult solve_sa(const QuboProblem& qubo, const SaSchedule& sched) {
    if (sched.sweeps < 1 || sched.restarts < 1) {
        throw Error(ErrorCode::InvalidArgument, "simulated annealing needs sweeps >= 1 and restarts >= 1");
    }
    if (!(sched.T_final > 0.0) || !(sched.T_initial >= sched.T_final)) {
        throw Error(ErrorCode::InvalidArgument, "temperatures must satisfy T_initial >= T_final > 0");
    }
    const Index p = qubo.M.rows();
    if (p == 0) return {Bits{}, qubo.k};
    const RMatrix& m = qubo.M;

    SaResult best;
    bool have_best = false;
    for (int r = 0; r < sched.restarts; ++r) {
        std::mt19937_64 rng(splitmix64(sched.seed + static_cast<std::uint64_t>(r)));
        auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

        Bits s(static_cast<std::size_t>(p));
        for (auto& b : s) b = static_cast<std::uint8_t>(rng() >> 63);
        RVector field = RVector::Zero(p);  // sum_{j != i} M_ij s_j
        for (Index i = 0; i < p; ++i) {
            for (Index j = 0; j < p; ++j) {
                if (j != i && s[static_cast<std::size_t>(j)]) field(i) += m(i, j);
            }
        }
        double energy = qubo_value(qubo, s);
        Bits run_best = s;
        double run_best_value = energy;

        const double ratio = sched.T_final / sched.T_initial;
        for (int sweep = 0; sweep < sched.sweeps; ++sweep) {
            const double frac = sched.sweeps > 1 ? static_cast<double>(sweep) / (sched.sweeps - 1) : 1.0;
            const double temp = sched.T_initial * std::pow(ratio, frac);
            for (Index i = 0; i < p; ++i) {
                auto& bit = s[static_cast<std::size_t>(i)];
                const double delta = (bit ? -1.0 : 1.0) * (m(i, i) + 2.0 * field(i));
                if (delta > 0.0 && uniform() >= std::exp(-delta / temp)) continue;
                const double sign = bit ? -1.0 : 1.0;
                bit ^= 1U;
                energy += delta;
                for (Index j = 0; j < p; ++j) {
                    if (j != i) field(j) += sign * m(j, i);
                }
                if (energy < run_best_value) {
                    run_best_value = energy;
                    run_best = s;
                }
            }
        }
        run_best_value = qubo_value(qubo, run_best);
        if (!have_best || run_best_value < best.value ||
            (run_best_value == best.value && lex_less(run_best, best.s))) {
            best = {run_best, run_best_value};
            have_best = true;
        }
    }
    return best;
}

}  // namespace qcmdo
