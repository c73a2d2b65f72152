// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file davidson.hpp
 * @brief Block Davidson-Liu eigensolver for the lowest roots of a symmetric operator.
 *
 * The operator is supplied as a callable mapping an N x k block X to H X.
 * Correction vectors use the diagonal (Jacobi) preconditioner
 *   delta_i = r_i / (theta_i - H_ii),
 * with |theta_i - H_ii| clamped from below by the level shift. When the
 * subspace would exceed max_subspace it collapses onto the lowest 2 n_roots
 * Ritz vectors. An optional projector commuting with the operator is applied
 * to every new basis vector, which restricts the search to its range.
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/ingest/run_config.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace casq {

struct DavidsonResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors; // N x n_roots, orthonormal columns
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

// Orthonormalizes `cand` against `basis` and itself; returns the kept columns.
inline Eigen::MatrixXd orthonormalize_against(const Eigen::MatrixXd& basis, Eigen::MatrixXd cand,
                                              double drop_tol = 1e-8) {
    std::vector<Eigen::VectorXd> kept;
    for (Eigen::Index j = 0; j < cand.cols(); ++j) {
        Eigen::VectorXd v = cand.col(j);
        const double n0 = v.norm();
        if (n0 == 0.0) continue;
        v /= n0;
        for (int pass = 0; pass < 2; ++pass) {
            if (basis.cols() > 0) v -= basis * (basis.transpose() * v);
            for (const auto& k : kept) v -= k.dot(v) * k;
        }
        const double n1 = v.norm();
        if (n1 < drop_tol) continue;
        kept.push_back(v / n1);
    }
    Eigen::MatrixXd out(cand.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
    return out;
}

} // namespace detail

/// In-place projection of the columns of a block; empty means none.
using BlockProjector = std::function<void(Eigen::MatrixXd&)>;

template <class ApplyBlock>
[[nodiscard]] DavidsonResult davidson(ApplyBlock&& apply_block, const Eigen::VectorXd& diag, int n_roots,
                                      const DavidsonOptions& opt, const Eigen::MatrixXd& guess,
                                      const BlockProjector& project = {}) {
    const Eigen::Index n = diag.size();
    if (n_roots < 1) throw InputError("davidson: n_roots must be >= 1");
    if (n_roots > n) throw InputError("davidson: n_roots exceeds the space dimension");
    // Columns the projector all but annihilates are rounding noise of mixed
    // character; zero them rather than let normalization amplify them.
    auto projected = [&](Eigen::MatrixXd m) {
        if (!project) return m;
        const Eigen::VectorXd before = m.colwise().norm();
        project(m);
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m.col(j).norm() <= 1e-8 * before[j]) m.col(j).setZero();
        return m;
    };

    Eigen::MatrixXd v = detail::orthonormalize_against(Eigen::MatrixXd(n, 0), projected(guess));
    if (v.cols() < n_roots) {
        // Top up with unit vectors on the lowest diagonal entries.
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return diag[a] < diag[b]; });
        for (Eigen::Index idx : order) {
            if (v.cols() >= n_roots) break;
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, 1);
            e(idx, 0) = 1.0;
            const Eigen::MatrixXd add = detail::orthonormalize_against(v, projected(std::move(e)));
            if (add.cols() == 0) continue;
            Eigen::MatrixXd grown(n, v.cols() + 1);
            grown << v, add;
            v = std::move(grown);
        }
    }

    if (v.cols() < n_roots) throw InputError("davidson: fewer than n_roots states in the projected space");
    const Eigen::Index keep = 2 * static_cast<Eigen::Index>(n_roots);
    const Eigen::Index max_sub =
        std::min<Eigen::Index>(n, std::max<Eigen::Index>(opt.max_subspace, 4 * static_cast<Eigen::Index>(n_roots)));
    Eigen::MatrixXd av = apply_block(v);
    Eigen::MatrixXd t = v.transpose() * av;

    DavidsonResult res;
    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        res.iterations = iter;
        const Eigen::MatrixXd tsym = 0.5 * (t + t.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tsym);
        const Eigen::VectorXd theta = eig.eigenvalues().head(n_roots);
        const Eigen::MatrixXd y = eig.eigenvectors().leftCols(n_roots);
        Eigen::MatrixXd x = v * y;
        Eigen::MatrixXd ax = av * y;
        Eigen::MatrixXd r = ax - x * theta.asDiagonal();

        res.residuals.assign(static_cast<std::size_t>(n_roots), 0.0);
        bool all = true;
        for (int k = 0; k < n_roots; ++k) {
            res.residuals[static_cast<std::size_t>(k)] = r.col(k).norm();
            all = all && res.residuals[static_cast<std::size_t>(k)] <= opt.tol;
        }
        res.eigenvalues = theta;
        res.eigenvectors = x;
        if (all || v.cols() == n) {
            res.converged = true;
            return res;
        }

        Eigen::MatrixXd corr(n, n_roots);
        Eigen::Index n_corr = 0;
        for (int k = 0; k < n_roots; ++k) {
            if (res.residuals[static_cast<std::size_t>(k)] <= opt.tol) continue;
            for (Eigen::Index i = 0; i < n; ++i) {
                double denom = theta[k] - diag[i];
                if (std::abs(denom) < opt.level_shift) denom = denom >= 0.0 ? opt.level_shift : -opt.level_shift;
                corr(i, n_corr) = r(i, k) / denom;
            }
            ++n_corr;
        }
        corr.conservativeResize(n, n_corr);

        if (v.cols() + n_corr > max_sub) {
            // Thick restart on the lowest Ritz vectors.
            const Eigen::Index k = std::min<Eigen::Index>(keep, v.cols());
            const Eigen::MatrixXd yk = eig.eigenvectors().leftCols(k);
            v = (v * yk).eval();
            av = (av * yk).eval();
            t = eig.eigenvalues().head(k).asDiagonal();
        }

        Eigen::MatrixXd fresh = detail::orthonormalize_against(v, projected(std::move(corr)));
        if (fresh.cols() == 0) fresh = detail::orthonormalize_against(v, projected(r));
        if (fresh.cols() == 0) break; // stalled

        const Eigen::MatrixXd afresh = apply_block(fresh);
        const Eigen::Index old = v.cols(), add = fresh.cols();
        Eigen::MatrixXd v2(n, old + add), av2(n, old + add), t2(old + add, old + add);
        v2 << v, fresh;
        av2 << av, afresh;
        t2.topLeftCorner(old, old) = t;
        t2.topRightCorner(old, add) = v.transpose() * afresh;
        t2.bottomLeftCorner(add, old) = fresh.transpose() * av;
        t2.bottomRightCorner(add, add) = fresh.transpose() * afresh;
        v = std::move(v2);
        av = std::move(av2);
        t = std::move(t2);
    }
    res.converged = false;
    return res;
}

} // namespace casq
