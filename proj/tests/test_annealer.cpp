#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcmdo/annealer.hpp"
#include "support.hpp"

using namespace qcmdo;

namespace {

QuboProblem random_qubo(std::mt19937_64& rng, std::size_t p) {
    RMatrix b(static_cast<Index>(p), static_cast<Index>(p));
    for (auto& v : b.reshaped()) v = std::normal_distribution<double>()(rng);
    QuboProblem q;
    q.M = 0.5 * (b + b.transpose());
    q.k = 0.5;
    return q;
}

RVector dense_spectrum(const RMatrix& h) {
    return Eigen::SelfAdjointEigenSolver<RMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("Ising coefficients from the QUBO") {
    std::mt19937_64 rng(3);
    const auto q = random_qubo(rng, 4);
    const auto prog = build_ising(q);
    CHECK(prog.p == 4);
    const RVector ones = RVector::Ones(4);
    CHECK((prog.linear - q.M * ones).norm() < 1e-12);
    for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) CHECK(prog.quadratic(i, j) == (j > i ? q.M(i, j) : 0.0));
    }
    const double scale = std::max(prog.linear.cwiseAbs().maxCoeff(), prog.quadratic.cwiseAbs().maxCoeff());
    CHECK(prog.lambda == scale);
}

TEST_CASE("sparse Hamiltonian equals the Kronecker product construction") {
    std::mt19937_64 rng(5);
    for (std::size_t p = 1; p <= 5; ++p) {
        const auto q = random_qubo(rng, p);
        const auto prog = build_ising(q);
        for (double w : {0.0, 0.3, 0.77, 1.0}) {
            const RMatrix want = oracle::pauli_hamiltonian(prog.linear, prog.quadratic, prog.lambda, w);
            const RMatrix got = hamiltonian_at(prog, w).to_dense();
            CHECK((got - want).norm() < 1e-12);
        }
    }
}

TEST_CASE("problem diagonal orders states like the QUBO") {
    std::mt19937_64 rng(7);
    const auto q = random_qubo(rng, 6);
    const RVector d = problem_diagonal(build_ising(q));
    // Affine in s^T M s with a positive slope.
    const double v0 = qubo_value(q, bits_from_mask(0, 6)), v1 = qubo_value(q, bits_from_mask(1, 6));
    const double slope = (d(1) - d(0)) / (v1 - v0);
    CHECK(slope > 0.0);
    for (std::uint64_t x = 0; x < 64; ++x) {
        const double v = qubo_value(q, bits_from_mask(x, 6));
        CHECK(d(static_cast<Index>(x)) == doctest::Approx(d(0) + slope * (v - v0)).epsilon(1e-10));
    }
}

TEST_CASE("initial gap is two") {
    std::mt19937_64 rng(11);
    for (std::size_t p : {1U, 3U, 6U, 10U}) {
        const auto prog = build_ising(random_qubo(rng, p));
        const auto [e0, e1] = lowest_two(hamiltonian_at(prog, 0.0));
        CHECK(e0 == doctest::Approx(-static_cast<double>(p)).epsilon(1e-9));
        CHECK(e1 - e0 == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("single qubit closed form") {
    for (double m : {1.0, -2.5}) {
        QuboProblem q;
        q.M = RMatrix::Constant(1, 1, m);
        const auto prog = build_ising(q);
        for (double w : {0.0, 0.25, 0.5, 0.9, 1.0}) {
            const auto [e0, e1] = lowest_two(hamiltonian_at(prog, w));
            CHECK(e1 - e0 == doctest::Approx(oracle::one_qubit_gap(w)).epsilon(1e-12));
        }
        const auto sweep = sweep_gaps(prog);
        CHECK(sweep.min_gap == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
        CHECK(sweep.argmin_w == doctest::Approx(0.5).epsilon(1e-3));
        CHECK(sweep.final_gap == doctest::Approx(2.0));
    }
}

TEST_CASE("iterative eigensolvers match dense diagonalization") {
    std::mt19937_64 rng(13);
    for (std::size_t p : {9U, 10U}) {
        const auto prog = build_ising(random_qubo(rng, p));
        for (double w : {0.1, 0.5, 0.8, 0.99}) {
            const auto h = hamiltonian_at(prog, w);
            const RVector ev = dense_spectrum(h.to_dense());
            SweepOptions opts;
            opts.dense_cap = 0;
            const auto [e0, e1] = lowest_two(h, opts);
            CHECK(e0 == doctest::Approx(ev(0)).epsilon(1e-8));
            CHECK(e1 == doctest::Approx(ev(1)).epsilon(1e-8));

            auto op = [&h](const RVector& x, RVector& y) { h.apply(x, y); };
            const auto lz = lowest_eigenpairs(op, h.dimension(), 2, {});
            CHECK(lz.values[0] == doctest::Approx(ev(0)).epsilon(1e-8));
            CHECK(lz.values[1] == doctest::Approx(ev(1)).epsilon(1e-8));
            const auto dv = lowest_eigenpairs_davidson(op, h.diagonal(), 2, {});
            CHECK(dv.values[0] == doctest::Approx(ev(0)).epsilon(1e-8));
            CHECK(dv.values[1] == doctest::Approx(ev(1)).epsilon(1e-8));
            const RVector res = h.apply(dv.vectors[0]) - dv.values[0] * dv.vectors[0];
            CHECK(res.norm() < 1e-8);
        }
    }
}

TEST_CASE("degenerate ground state gives zero gap") {
    QuboProblem q;
    q.M = RMatrix::Zero(3, 3);
    const auto prog = build_ising(q);
    const auto [e0, e1] = lowest_two(hamiltonian_at(prog, 1.0));
    CHECK(e0 == 0.0);
    CHECK(e1 == 0.0);
}

TEST_CASE("sweep shape") {
    std::mt19937_64 rng(17);
    const auto prog = build_ising(random_qubo(rng, 5));
    SweepOptions coarse;
    coarse.grid = 11;
    coarse.refine = false;
    const auto a = sweep_gaps(prog, coarse);
    REQUIRE(a.samples.size() == 11);
    CHECK(a.samples.front().w == 0.0);
    CHECK(a.samples.back().w == 1.0);
    CHECK(a.samples.front().gap() == doctest::Approx(2.0));
    const auto b = sweep_gaps(prog);
    CHECK(b.samples.size() > 101);
    CHECK(std::is_sorted(b.samples.begin(), b.samples.end(),
                         [](const GapSample& x, const GapSample& y) { return x.w < y.w; }));
    CHECK(b.min_gap <= a.min_gap + 1e-12);
    CHECK(b.final_gap == doctest::Approx(a.final_gap).epsilon(1e-12));
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& s : b.samples) smallest = std::min(smallest, s.gap());
    CHECK(b.min_gap == smallest);
}

TEST_CASE("qubit cap") {
    QuboProblem q;
    q.M = RMatrix::Identity(5, 5);
    try {
        hamiltonian_at(build_ising(q), 0.5, 4);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::QubitCapExceeded);
    }
}

TEST_CASE("bottom states") {
    QuboProblem zero;
    zero.M = RMatrix::Zero(3, 3);
    const auto ties = classical_bottom_states(zero, 2);
    REQUIRE(ties.size() == 2);
    CHECK(ties[0].s == Bits{0, 0, 0});
    CHECK(ties[1].s == Bits{0, 0, 1});

    std::mt19937_64 rng(19);
    const auto q = random_qubo(rng, 6);
    const auto bottom = classical_bottom_states(q, 5);
    std::vector<double> all;
    for (std::uint64_t x = 0; x < 64; ++x) all.push_back(oracle::qubo(q.M, q.k, oracle::bits_of(x, 6)));
    std::sort(all.begin(), all.end());
    REQUIRE(bottom.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(bottom[i].value == doctest::Approx(all[i]).epsilon(1e-12));
        CHECK(qubo_value(q, bottom[i].s) == bottom[i].value);
    }
    CHECK(classical_bottom_states(q, 100).size() == 64);
}
