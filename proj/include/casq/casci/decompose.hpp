// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file decompose.hpp
 * @brief Determinant decomposition of CI vectors in "2 u d 0 (NN%)" form.
 */

#pragma once

#include <casq/detspace/cas_space.hpp>
#include <casq/detspace/determinant.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace casq {

struct DecompositionLine {
    std::string determinant;      // e.g. "2 2 u 2 0 d 0"
    double weight_percent = 0.0;  // combined weight of merged partners
    int n_merged = 1;

    /// "2 2 u 2 0 d 0 (49%)"
    [[nodiscard]] std::string format() const {
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%ld%%)", std::lround(weight_percent));
        return determinant + buf;
    }
};

inline constexpr double conjugate_weight_tol = 1e-6; // on |c|^2
inline constexpr const char* decomposition_convention = "conjugate-pair-summed";

/// Weights 100|c_k|^2, spin-conjugate partners merged, descending, cut at threshold.
[[nodiscard]] inline std::vector<DecompositionLine> decompose(const CasSpace& space, const Eigen::VectorXd& coeffs,
                                                              double threshold_percent = 0.0) {
    const std::size_t n = space.size();
    std::vector<char> used(n, 0);
    std::vector<DecompositionLine> lines;
    for (std::size_t k = 0; k < n; ++k) {
        if (used[k]) continue;
        used[k] = 1;
        const Determinant d = space.det(k);
        const double w = coeffs[static_cast<Eigen::Index>(k)] * coeffs[static_cast<Eigen::Index>(k)];
        DecompositionLine line{render(d, space.n_orb()), 100.0 * w, 1};
        const Determinant f = spin_flipped(d);
        if (f != d) {
            if (const auto j = space.index(f); j && !used[*j]) {
                const double wf = coeffs[static_cast<Eigen::Index>(*j)] * coeffs[static_cast<Eigen::Index>(*j)];
                if (std::abs(w - wf) <= conjugate_weight_tol && w > 0.0) {
                    used[*j] = 1;
                    line.determinant = std::min(line.determinant, render(f, space.n_orb()));
                    line.weight_percent += 100.0 * wf;
                    line.n_merged = 2;
                }
            }
        }
        if (line.weight_percent > 0.0 && line.weight_percent >= threshold_percent) lines.push_back(std::move(line));
    }
    std::stable_sort(lines.begin(), lines.end(), [](const DecompositionLine& a, const DecompositionLine& b) {
        if (a.weight_percent != b.weight_percent) return a.weight_percent > b.weight_percent;
        return a.determinant < b.determinant;
    });
    return lines;
}

} // namespace casq
