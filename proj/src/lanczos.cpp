#include "qcmdo/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qcmdo {

namespace {

RVector random_unit(Index n, std::mt19937_64& rng) {
    RVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    return v / v.norm();
}

/// Two passes of classical Gram-Schmidt against the first k columns.
double orthogonalize(RVector& v, const RMatrix& basis, Index k) {
    if (k == 0) return v.norm();
    for (int pass = 0; pass < 2; ++pass) {
        const RVector coef = basis.leftCols(k).transpose() * v;
        v.noalias() -= basis.leftCols(k) * coef;
    }
    return v.norm();
}

}  // namespace

LowestEigs lowest_eigenpairs(const SymmetricOperator& op, Index n, int count,
                             const std::vector<RVector>& initial, const LanczosOptions& opts) {
    if (count < 1 || count > n) throw Error(ErrorCode::InvalidArgument, "lowest_eigenpairs: bad count");
    const Index mmax = std::min<Index>(n, std::max<Index>(opts.max_basis, 2 * count + 4));
    const Index keep = std::min<Index>(mmax - 1, count + 3);
    std::mt19937_64 rng(opts.seed);

    RMatrix V(n, mmax), AV(n, mmax), T = RMatrix::Zero(mmax, mmax);
    Index k = 0;
    int matvecs = 0;
    RVector av(n);

    // Appends a unit vector orthogonal to the basis and returns the
    // orthogonalized image, i.e. the next Lanczos direction.
    auto push = [&](const RVector& v) {
        V.col(k) = v;
        op(v, av);
        ++matvecs;
        AV.col(k) = av;
        const RVector col = V.leftCols(k + 1).transpose() * av;
        T.block(0, k, k + 1, 1) = col;
        T.block(k, 0, 1, k + 1) = col.transpose();
        ++k;
        RVector next = av;
        const double scale = std::max(av.norm(), 1.0);
        const double nrm = orthogonalize(next, V, k);
        return std::pair<RVector, bool>(next, nrm > 1e-10 * scale);
    };

    RVector next;
    bool have_next = false;
    for (const auto& v0 : initial) {
        if (k >= mmax) break;
        RVector v = v0;
        if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "lowest_eigenpairs: initial vector");
        const double nrm = orthogonalize(v, V, k);
        if (nrm < 1e-8) continue;
        auto [w, ok] = push(v / nrm);
        next = std::move(w);
        have_next = ok;
    }
    if (k == 0) {
        auto [w, ok] = push(random_unit(n, rng));
        next = std::move(w);
        have_next = ok;
    }

    while (true) {
        while (k < mmax) {
            RVector v = have_next ? RVector(next / next.norm()) : random_unit(n, rng);
            double nrm = 1.0;
            if (!have_next) nrm = orthogonalize(v, V, k);
            if (nrm < 1e-12) break;
            auto [w, ok] = push(v / v.norm());
            next = std::move(w);
            have_next = ok;
        }

        Eigen::SelfAdjointEigenSolver<RMatrix> es(T.topLeftCorner(k, k));
        const RVector& theta = es.eigenvalues();
        const RMatrix& s = es.eigenvectors();

        bool converged = true;
        LowestEigs out;
        out.matvecs = matvecs;
        for (int i = 0; i < count; ++i) {
            RVector y = V.leftCols(k) * s.col(i);
            RVector ay = AV.leftCols(k) * s.col(i);
            const double res = (ay - theta(i) * y).norm();
            if (res > opts.tol && k < n) converged = false;
            out.values.push_back(theta(i));
            out.vectors.push_back(std::move(y));
        }
        if (converged) return out;
        if (matvecs >= opts.max_matvecs) {
            throw Error(ErrorCode::EigensolverFailure, "Lanczos did not converge within the matvec budget");
        }

        // Thick restart on the lowest Ritz vectors; the pending direction is
        // orthogonal to the old basis and therefore to them.
        const Index kk = std::min(keep, k);
        RMatrix y = V.leftCols(k) * s.leftCols(kk);
        RMatrix ay = AV.leftCols(k) * s.leftCols(kk);
        V.leftCols(kk) = y;
        AV.leftCols(kk) = ay;
        T.setZero();
        for (Index i = 0; i < kk; ++i) T(i, i) = theta(i);
        k = kk;
        if (have_next) {
            // Re-orthogonalize against the compressed basis to limit drift.
            orthogonalize(next, V, k);
        }
    }
}

LowestEigs lowest_eigenpairs_davidson(const SymmetricOperator& op, const DavidsonPreconditioner& precondition,
                                      const RVector& diagonal, int count,
                                      const std::vector<RVector>& initial, const LanczosOptions& opts) {
    const Index n = diagonal.size();
    if (count < 1 || count > n) throw Error(ErrorCode::InvalidArgument, "lowest_eigenpairs: bad count");
    const Index mmax = std::min<Index>(n, std::max<Index>(opts.max_basis, 3 * count + 4));
    const Index keep = std::min<Index>(mmax - count, count + 2);
    std::mt19937_64 rng(opts.seed);

    RMatrix V(n, mmax), AV(n, mmax), T = RMatrix::Zero(mmax, mmax);
    Index k = 0;
    int matvecs = 0;
    RVector av(n);

    auto push = [&](RVector v) {
        const double nrm = orthogonalize(v, V, k);
        if (!(nrm > 1e-10)) return false;
        v /= nrm;
        V.col(k) = v;
        op(v, av);
        ++matvecs;
        AV.col(k) = av;
        const RVector col = V.leftCols(k + 1).transpose() * av;
        T.block(0, k, k + 1, 1) = col;
        T.block(k, 0, 1, k + 1) = col.transpose();
        ++k;
        return true;
    };

    for (const auto& v0 : initial) {
        if (v0.size() != n) throw Error(ErrorCode::DimensionMismatch, "lowest_eigenpairs: initial vector");
        if (k < mmax) push(v0);
    }
    // Unit vectors on the smallest diagonal entries are the natural guesses.
    if (k < count) {
        std::vector<Index> order(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::partial_sort(order.begin(), order.begin() + std::min<Index>(n, 2 * count), order.end(),
                          [&](Index a, Index b) { return diagonal(a) < diagonal(b); });
        for (Index j = 0; j < std::min<Index>(n, 2 * count) && k < count; ++j) {
            RVector e = 0.05 * random_unit(n, rng);
            e(order[static_cast<std::size_t>(j)]) += 1.0;
            push(e);
        }
    }
    while (k < count) push(random_unit(n, rng));

    while (true) {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(T.topLeftCorner(k, k));
        const RVector& theta = es.eigenvalues();
        const RMatrix& s = es.eigenvectors();

        LowestEigs out;
        out.matvecs = matvecs;
        std::vector<RVector> corrections;
        for (int i = 0; i < count; ++i) {
            RVector y = V.leftCols(k) * s.col(i);
            RVector r = AV.leftCols(k) * s.col(i) - theta(i) * y;
            if (r.norm() > opts.tol && k < n) {
                // Olsen's correction keeps t orthogonal to y even when the
                // preconditioner is nearly exact.
                RVector my = y;
                precondition(r, theta(i));
                precondition(my, theta(i));
                const double den = y.dot(my);
                if (std::abs(den) > 1e-300) r -= (y.dot(r) / den) * my;
                corrections.push_back(std::move(r));
            }
            out.values.push_back(theta(i));
            out.vectors.push_back(std::move(y));
        }
        if (corrections.empty()) return out;
        if (matvecs >= opts.max_matvecs) {
            throw Error(ErrorCode::EigensolverFailure, "Davidson did not converge within the matvec budget");
        }

        if (k + static_cast<Index>(corrections.size()) > mmax) {
            const Index kk = std::min(keep, k);
            RMatrix y = V.leftCols(k) * s.leftCols(kk);
            RMatrix ay = AV.leftCols(k) * s.leftCols(kk);
            V.leftCols(kk) = y;
            AV.leftCols(kk) = ay;
            T.setZero();
            for (Index i = 0; i < kk; ++i) T(i, i) = theta(i);
            k = kk;
        }
        bool grew = false;
        for (auto& t : corrections) grew = push(std::move(t)) || grew;
        if (!grew) grew = push(random_unit(n, rng));
        if (!grew) return out;
    }
}

LowestEigs lowest_eigenpairs_davidson(const SymmetricOperator& op, const RVector& diagonal, int count,
                                      const std::vector<RVector>& initial, const LanczosOptions& opts) {
    auto precondition = [&diagonal](RVector& r, double theta) {
        for (Index j = 0; j < r.size(); ++j) {
            double den = theta - diagonal(j);
            if (std::abs(den) < 1e-8) den = den < 0 ? -1e-8 : 1e-8;
            r(j) /= den;
        }
    };
    return lowest_eigenpairs_davidson(op, precondition, diagonal, count, initial, opts);
}

}  // namespace qcmdo
