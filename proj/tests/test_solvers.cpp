#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcmdo/electrostatics.hpp"
#include "qcmdo/maxcut.hpp"
#include "qcmdo/solvers.hpp"
#include "support.hpp"

using namespace qcmdo;

namespace {

QuboProblem random_qubo(std::mt19937_64& rng, std::size_t p) {
    RMatrix b(static_cast<Index>(p), static_cast<Index>(p));
    for (auto& v : b.reshaped()) v = std::normal_distribution<double>()(rng);
    QuboProblem q;
    q.M = 0.5 * (b + b.transpose());
    q.k = std::normal_distribution<double>()(rng);
    return q;
}

}  // namespace

TEST_CASE("exhaustive on a zero matrix") {
    QuboProblem q;
    q.M = RMatrix::Zero(4, 4);
    q.k = 2.5;
    const auto r = solve_exhaustive(q);
    CHECK(r.value == 2.5);
    CHECK(r.s == Bits{0, 0, 0, 0});
    CHECK_FALSE(r.is_unique);
}

TEST_CASE("exhaustive on the triangle") {
    const Graph g(3, {{0, 1}, {1, 2}, {0, 2}});
    const auto r = solve_exhaustive(maxcut_to_qubo(g).first);
    CHECK(r.value == -2.0);
    CHECK_FALSE(r.is_unique);
    CHECK(cut_value(g, r.s) == 2);
    CHECK(r.s == Bits{0, 0, 1});
}

TEST_CASE("exhaustive matches the enumeration oracle") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const std::size_t p = 1 + rng() % 10;
        const auto q = random_qubo(rng, p);
        const auto r = solve_exhaustive(q);
        const auto [best, arg] = oracle::qubo_minimum(q.M, q.k);
        CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
        CHECK(std::vector<int>(r.s.begin(), r.s.end()) == arg);
        CHECK(r.is_unique);
        const auto bottom = classical_bottom_states(q, 1);
        CHECK(bottom[0].s == r.s);
    }
}

TEST_CASE("exhaustive value is invariant under relabeling") {
    std::mt19937_64 rng(5);
    const auto q = random_qubo(rng, 8);
    std::vector<Index> perm(8);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    QuboProblem pq = q;
    for (Index i = 0; i < 8; ++i) {
        for (Index j = 0; j < 8; ++j) pq.M(i, j) = q.M(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    const auto a = solve_exhaustive(q);
    const auto b = solve_exhaustive(pq);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    for (Index i = 0; i < 8; ++i) CHECK(b.s[static_cast<std::size_t>(i)] == a.s[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
}

TEST_CASE("exhaustive respects the qubit cap") {
    QuboProblem q;
    q.M = RMatrix::Zero(6, 6);
    try {
        solve_exhaustive(q, 5);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::QubitCapExceeded);
    }
}

TEST_CASE("annealing is deterministic and never beats the optimum") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        const std::size_t p = 1 + rng() % 14;
        const auto q = random_qubo(rng, p);
        const auto sched = SaSchedule::automatic(q, 100, 4, rng());
        const auto a = solve_sa(q, sched);
        const auto b = solve_sa(q, sched);
        CHECK(a.s == b.s);
        CHECK(a.value == b.value);
        CHECK(a.value == doctest::Approx(qubo_value(q, a.s)).epsilon(1e-12));
        CHECK(a.value >= solve_exhaustive(q).value - 1e-12);
        if (p == 1) CHECK(a.value == doctest::Approx(solve_exhaustive(q).value));
    }
}

TEST_CASE("annealing schedule validation") {
    QuboProblem q;
    q.M = RMatrix::Identity(2, 2);
    SaSchedule bad;
    bad.sweeps = 0;
    CHECK_THROWS_AS(solve_sa(q, bad), Error);
    bad = SaSchedule{};
    bad.T_final = 2.0;
    CHECK_THROWS_AS(solve_sa(q, bad), Error);
    bad = SaSchedule{};
    bad.T_final = 0.0;
    CHECK_THROWS_AS(solve_sa(q, bad), Error);
}

TEST_CASE("annealing finds the Poisson N=2 optimum") {
    int matched = 0;
    for (std::uint64_t i = 0; i < 32; ++i) {
        PoissonSpec spec;
        spec.N = 2;
        spec.true_s = sample_configuration(spec.p(), 2024, i);
        const auto q = poisson_qubo(gen_poisson(spec));
        const auto exact = solve_exhaustive(q);
        const auto sa = solve_sa(q, SaSchedule::automatic(q, 200, 10, i));
        CHECK(sa.value >= exact.value - 1e-12);
        if (std::abs(sa.value - exact.value) <= 1e-9 * std::max(1.0, std::abs(exact.value))) ++matched;
    }
    CHECK(matched >= 31);
}

TEST_CASE("splitmix64 reference values") {
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(1) == 0x910a2dec89025cc1ULL);
}
