#include "qcmdo/annealer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <tuple>

#include "gray_enum.hpp"

namespace qcmdo {

IsingProgram build_ising(const QuboProblem& qubo) {
    const Index p = qubo.M.rows();
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "an Ising program needs at least one qubit");
    IsingProgram prog;
    prog.p = static_cast<std::size_t>(p);
    prog.linear = qubo.M * RVector::Ones(p);
    prog.quadratic = qubo.M.triangularView<Eigen::StrictlyUpper>();

    double lambda = prog.linear.cwiseAbs().maxCoeff();
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) lambda = std::max(lambda, std::abs(prog.quadratic(i, j)));
    }
    prog.lambda = lambda > 0.0 ? lambda : 1.0;
    return prog;
}

namespace {

void check_cap(std::size_t p, std::size_t cap) {
    if (p > cap || p > 62) {
        throw Error(ErrorCode::QubitCapExceeded,
                    std::to_string(p) + " qubits exceeds the cap of " + std::to_string(cap));
    }
}

}  // namespace

RVector problem_diagonal(const IsingProgram& prog) {
    const std::size_t p = prog.p;
    check_cap(p, 62);
    const Index dim = Index{1} << p;
    RVector diag(dim);
    for (Index x = 0; x < dim; ++x) {
        double e = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double zi = ((x >> i) & 1) ? 1.0 : -1.0;
            e += prog.linear(static_cast<Index>(i)) * zi;
            for (std::size_t j = i + 1; j < p; ++j) {
                const double zj = ((x >> j) & 1) ? 1.0 : -1.0;
                e += prog.quadratic(static_cast<Index>(i), static_cast<Index>(j)) * zi * zj;
            }
        }
        diag(x) = e / prog.lambda;
    }
    return diag;
}

IsingHamiltonian::IsingHamiltonian(const IsingProgram& prog, double w, std::size_t qubit_cap)
        : p_(prog.p), transverse_(w - 1.0) {
    if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorCode::InvalidArgument, "w must lie in [0, 1]");
    check_cap(p_, qubit_cap);
    diag_ = w * problem_diagonal(prog);
}

IsingHamiltonian::IsingHamiltonian(std::size_t p, RVector scaled_diagonal, double transverse)
        : p_(p), diag_(std::move(scaled_diagonal)), transverse_(transverse) {
    if (diag_.size() != (Index{1} << p)) {
        throw Error(ErrorCode::DimensionMismatch, "diagonal length must be 2^p");
    }
}

void IsingHamiltonian::apply(const RVector& x, RVector& y) const {
    const Index dim = dimension();
    y.resize(dim);
    y = diag_.cwiseProduct(x);
    if (transverse_ == 0.0) return;
    for (std::size_t i = 0; i < p_; ++i) {
        const Index bit = Index{1} << i;
        for (Index s = 0; s < dim; ++s) y(s) += transverse_ * x(s ^ bit);
    }
}

RVector IsingHamiltonian::apply(const RVector& x) const {
    RVector y;
    apply(x, y);
    return y;
}

RMatrix IsingHamiltonian::to_dense() const {
    const Index dim = dimension();
    RMatrix h = RMatrix::Zero(dim, dim);
    h.diagonal() = diag_;
    for (std::size_t i = 0; i < p_; ++i) {
        const Index bit = Index{1} << i;
        for (Index s = 0; s < dim; ++s) h(s, s ^ bit) += transverse_;
    }
    return h;
}

IsingHamiltonian hamiltonian_at(const IsingProgram& prog, double w, std::size_t qubit_cap) {
    return IsingHamiltonian(prog, w, qubit_cap);
}

namespace {

std::pair<double, double> two_smallest(const RVector& v) {
    double a = v(0), b = std::numeric_limits<double>::infinity();
    for (Index i = 1; i < v.size(); ++i) {
        if (v(i) < a) {
            b = a;
            a = v(i);
        } else if (v(i) < b) {
            b = v(i);
        }
    }
    return {a, b};
}

/// Unnormalized in-place Walsh-Hadamard transform.
void walsh_hadamard(RVector& x) {
    const Index n = x.size();
    for (Index len = 1; len < n; len <<= 1) {
        for (Index i = 0; i < n; i += 2 * len) {
            for (Index j = i; j < i + len; ++j) {
                const double a = x(j), b = x(j + len);
                x(j) = a + b;
                x(j + len) = a - b;
            }
        }
    }
}

double safe_denominator(double den) {
    if (std::abs(den) < 1e-8) return den < 0 ? -1e-8 : 1e-8;
    return den;
}

std::pair<double, double> lowest_two_warm(const IsingHamiltonian& h, const SweepOptions& opts,
                                          std::vector<RVector>& warm) {
    // The diagonal is the exact spectrum once the transverse field is off.
    if (h.transverse() == 0.0) return two_smallest(h.diagonal());
    if (h.qubits() <= opts.dense_cap) {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(h.to_dense(), Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw Error(ErrorCode::EigensolverFailure, "dense eigensolver failed");
        }
        return {es.eigenvalues()(0), es.eigenvalues()(1)};
    }
    auto op = [&h](const RVector& x, RVector& y) { h.apply(x, y); };
    const RVector& d = h.diagonal();
    const double mean = d.mean();
    const double spread = std::sqrt((d.array() - mean).square().mean());
    const double t = h.transverse();
    const Index n = h.dimension();
    DavidsonPreconditioner precondition;
    if (std::abs(t) > spread) {
        // The transverse term dominates: invert it exactly in the X basis,
        // where sum_i X_i has eigenvalue p - 2 popcount(k).
        precondition = [&, t, mean, n](RVector& r, double theta) {
            walsh_hadamard(r);
            const double p = static_cast<double>(h.qubits());
            for (Index k = 0; k < n; ++k) {
                const double x = p - 2.0 * std::popcount(static_cast<std::uint64_t>(k));
                r(k) /= safe_denominator(theta - t * x - mean) * static_cast<double>(n);
            }
            walsh_hadamard(r);
        };
    } else {
        precondition = [&d](RVector& r, double theta) {
            for (Index j = 0; j < r.size(); ++j) r(j) /= safe_denominator(theta - d(j));
        };
    }
    auto eig = lowest_eigenpairs_davidson(op, precondition, d, 2, warm, opts.lanczos);
    warm = eig.vectors;
    return {eig.values[0], eig.values[1]};
}

}  // namespace

std::pair<double, double> lowest_two(const IsingHamiltonian& h, const SweepOptions& opts) {
    if (h.dimension() < 2) throw Error(ErrorCode::InvalidArgument, "need at least one qubit");
    std::vector<RVector> warm;
    return lowest_two_warm(h, opts, warm);
}

GapSweep sweep_gaps(const IsingProgram& prog, const SweepOptions& opts) {
    if (opts.grid < 2) throw Error(ErrorCode::InvalidArgument, "the w grid needs at least two points");
    check_cap(prog.p, opts.qubit_cap);
    const RVector diag = problem_diagonal(prog);

    std::vector<RVector> warm;
    auto evaluate = [&](double w, std::vector<RVector>& start) {
        IsingHamiltonian h(prog.p, w * diag, w - 1.0);
        const auto [e0, e1] = lowest_two_warm(h, opts, start);
        return GapSample{w, e0, e1};
    };

    GapSweep out;
    std::size_t best = 0;
    std::vector<RVector> best_vectors;
    for (int i = 0; i < opts.grid; ++i) {
        const double w = (i == opts.grid - 1) ? 1.0 : static_cast<double>(i) / (opts.grid - 1);
        out.samples.push_back(evaluate(w, warm));
        if (out.samples.back().gap() < out.samples[best].gap()) {
            best = out.samples.size() - 1;
            best_vectors = warm;
        }
    }

    if (opts.refine && opts.grid > 2) {
        const double step = 1.0 / (opts.grid - 1);
        double lo = std::max(0.0, out.samples[best].w - step);
        double hi = std::min(1.0, out.samples[best].w + step);
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = hi - ratio * (hi - lo);
        double d = lo + ratio * (hi - lo);
        std::vector<RVector> start = best_vectors;
        GapSample sc = evaluate(c, start);
        GapSample sd = evaluate(d, start);
        out.samples.push_back(sc);
        out.samples.push_back(sd);
        while (hi - lo > opts.refine_width) {
            if (sc.gap() <= sd.gap()) {
                hi = d;
                d = c;
                sd = sc;
                c = hi - ratio * (hi - lo);
                sc = evaluate(c, start);
                out.samples.push_back(sc);
            } else {
                lo = c;
                c = d;
                sc = sd;
                d = lo + ratio * (hi - lo);
                sd = evaluate(d, start);
                out.samples.push_back(sd);
            }
        }
        std::stable_sort(out.samples.begin(), out.samples.end(),
                         [](const GapSample& a, const GapSample& b) { return a.w < b.w; });
    }

    out.final_gap = out.samples.back().gap();
    out.min_gap = out.samples.front().gap();
    out.argmin_w = out.samples.front().w;
    for (const auto& s : out.samples) {
        if (s.gap() < out.min_gap) {
            out.min_gap = s.gap();
            out.argmin_w = s.w;
        }
    }
    return out;
}

std::vector<ScoredState> classical_bottom_states(const QuboProblem& qubo, std::size_t count,
                                                 std::size_t qubit_cap) {
    const std::size_t p = qubo.p();
    check_cap(p, qubit_cap);
    const std::uint64_t total = std::uint64_t{1} << p;
    count = static_cast<std::size_t>(std::min<std::uint64_t>(count, total));
    if (count == 0) return {};

    // Max-heap on (value, lex key); a few spare slots absorb round-off
    // between states that tie exactly.
    using Entry = std::tuple<double, std::uint64_t, std::uint64_t>;
    std::priority_queue<Entry> heap;
    const std::size_t slots = count + 16;
    detail::for_each_state(qubo.M, qubo.k, [&](std::uint64_t x, std::uint64_t key, double value) {
        if (heap.size() < slots) {
            heap.emplace(value, key, x);
        } else if (Entry(value, key, x) < heap.top()) {
            heap.pop();
            heap.emplace(value, key, x);
        }
    });

    std::vector<std::tuple<double, std::uint64_t, Bits>> kept;
    while (!heap.empty()) {
        const auto [value, key, x] = heap.top();
        heap.pop();
        Bits s = bits_from_mask(x, p);
        kept.emplace_back(qubo_value(qubo, s), key, std::move(s));
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    // Within a band of tied values the order is lexicographic.
    for (std::size_t lo = 0; lo < kept.size();) {
        std::size_t hi = lo + 1;
        while (hi < kept.size() && std::get<0>(kept[hi]) - std::get<0>(kept[lo]) <= kTieTolerance) ++hi;
        std::sort(kept.begin() + static_cast<std::ptrdiff_t>(lo), kept.begin() + static_cast<std::ptrdiff_t>(hi),
                  [](const auto& a, const auto& b) { return std::get<1>(a) < std::get<1>(b); });
        lo = hi;
    }

    std::vector<ScoredState> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back({std::move(std::get<2>(kept[i])), std::get<0>(kept[i])});
    }
    return out;
}

}  // namespace qcmdo
