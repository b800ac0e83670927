#pragma once

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles/oracles.hpp"
#include "qcmdo/problem_model.hpp"

namespace testing {

using namespace qcmdo;

/// A random finite set of 1..max_size values: half the time evenly spaced
/// along a random line with a power-of-two count, otherwise scattered.
inline VariableDomain random_domain(std::mt19937_64& rng, int max_size = 4) {
    std::uniform_int_distribution<int> size(1, max_size);
    std::vector<Complex> vals;
    if (rng() & 1U) {
        const int k = max_size >= 4 && (rng() & 1U) ? 4 : 2;
        const Complex start = oracle::random_complex(rng);
        const Complex step = oracle::random_complex(rng);
        for (int i = 0; i < k; ++i) vals.push_back(start + static_cast<double>(i) * step);
    } else {
        const int k = size(rng);
        for (int i = 0; i < k; ++i) vals.push_back(oracle::random_complex(rng));
    }
    return VariableDomain::discrete(vals);
}

struct RandomShape {
    int max_n = 8;
    int max_n1 = 3;
    int max_set = 4;
    int max_m = 3;
};

/// Random mixed problem with A = B^H B + eps I, so every reduced quadratic
/// block is positive definite, and a random full-rank F2.
inline QcmdoProblem random_problem(std::mt19937_64& rng, const RandomShape& shape = {}) {
    std::uniform_int_distribution<int> pick_n(2, shape.max_n);
    const int n = pick_n(rng);
    const int n1 = std::uniform_int_distribution<int>(1, std::min(shape.max_n1, n - 1))(rng);
    const int n2 = n - n1;
    const int m = std::uniform_int_distribution<int>(0, std::min(shape.max_m, n2))(rng);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<VariableDomain> domains(static_cast<std::size_t>(n), VariableDomain::continuous());
    for (int i = 0; i < n1; ++i) domains[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = random_domain(rng, shape.max_set);

    const CMatrix b_mat = oracle::random_matrix(n, n, rng);
    const CMatrix a = b_mat.adjoint() * b_mat + 0.1 * CMatrix::Identity(n, n);
    const CVector b = oracle::random_vector(n, rng);
    const double c = std::normal_distribution<double>(0.0, 1.0)(rng);
    const CMatrix f = oracle::random_matrix(m, n, rng);
    const CVector d = oracle::random_vector(m, rng);
    return QcmdoProblem(a, b, Complex(c), f, d, domains);
}

/// Enumerates the product of the discrete domains in mixed radix.
template <class Visit>
void for_each_assignment(const std::vector<VariableDomain>& discrete, Visit&& visit) {
    std::vector<std::size_t> digit(discrete.size(), 0);
    CVector x1(static_cast<Index>(discrete.size()));
    while (true) {
        for (std::size_t i = 0; i < discrete.size(); ++i) x1(static_cast<Index>(i)) = discrete[i].values()[digit[i]];
        visit(x1);
        std::size_t i = 0;
        for (; i < digit.size(); ++i) {
            if (++digit[i] < discrete[i].values().size()) break;
            digit[i] = 0;
        }
        if (i == digit.size()) return;
    }
}

/// Brute-force optimum of a mixed problem: every discrete assignment with
/// the continuous part from the KKT oracle, evaluated by the loop oracle.
inline double brute_force_minimum(const QcmdoProblem& problem) {
    std::vector<Index> di, ci;
    std::vector<VariableDomain> discrete;
    for (Index i = 0; i < problem.n(); ++i) {
        if (problem.domains()[static_cast<std::size_t>(i)].is_discrete()) {
            di.push_back(i);
            discrete.push_back(problem.domains()[static_cast<std::size_t>(i)]);
        } else {
            ci.push_back(i);
        }
    }
    auto take = [](const CMatrix& a, const std::vector<Index>& r, const std::vector<Index>& c) {
        CMatrix out(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (std::size_t j = 0; j < c.size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = a(r[i], c[j]);
        }
        return out;
    };
    std::vector<Index> rows(static_cast<std::size_t>(problem.m()));
    std::iota(rows.begin(), rows.end(), Index{0});
    const CMatrix a22 = take(problem.A(), ci, ci), a21 = take(problem.A(), ci, di);
    const CMatrix f1 = take(problem.F(), rows, di), f2 = take(problem.F(), rows, ci);
    CVector b2(static_cast<Index>(ci.size()));
    for (std::size_t i = 0; i < ci.size(); ++i) b2(static_cast<Index>(i)) = problem.b()(ci[i]);

    double best = std::numeric_limits<double>::infinity();
    for_each_assignment(discrete, [&](const CVector& x1) {
        const CVector x2 = oracle::kkt_continuous(a22, a21, b2, f1, f2, problem.d(), x1);
        CVector x(problem.n());
        for (std::size_t i = 0; i < di.size(); ++i) x(di[i]) = x1(static_cast<Index>(i));
        for (std::size_t i = 0; i < ci.size(); ++i) x(ci[i]) = x2(static_cast<Index>(i));
        best = std::min(best, oracle::objective(problem.A(), problem.b(), problem.c(), x));
    });
    return best;
}

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace testing
