// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file integrals.hpp
 * @brief Active-space orbital metadata and the spin-free Hamiltonian integrals.
 *
 * Two-electron integrals are stored in chemist notation (pq|rs) as a dense
 * n^4 array. Every write goes through set_eri(), which fills all eight
 * permutational images, so reads never need to canonicalize indices.
 */

#pragma once

#include <casq/core/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace casq {

struct OrbitalSpace {
    int n_orb = 0;
    std::vector<std::string> labels;
    double core_energy = 0.0; // Hartree

    [[nodiscard]] static OrbitalSpace numbered(int n_orb, double core_energy = 0.0) {
        OrbitalSpace s;
        s.n_orb = n_orb;
        s.core_energy = core_energy;
        for (int p = 0; p < n_orb; ++p) s.labels.push_back("orb" + std::to_string(p + 1));
        return s;
    }

    void validate() const {
        if (n_orb < 1) throw InputError("OrbitalSpace: n_orb must be >= 1");
        if (static_cast<int>(labels.size()) != n_orb)
            throw InputError("OrbitalSpace: label count does not match n_orb");
    }
};

class IntegralSet {
public:
    IntegralSet() = default;

    explicit IntegralSet(int n_orb)
        : n_(n_orb),
          h_(Eigen::MatrixXd::Zero(n_orb, n_orb)),
          g2_(static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb, 0.0) {}

    [[nodiscard]] int n_orb() const noexcept { return n_; }

    [[nodiscard]] const Eigen::MatrixXd& h() const noexcept { return h_; }
    [[nodiscard]] double h(int p, int q) const noexcept { return h_(p, q); }

    void set_h(int p, int q, double v) {
        h_(p, q) = v;
        h_(q, p) = v;
    }

    [[nodiscard]] double eri(int p, int q, int r, int s) const noexcept { return g2_[offset(p, q, r, s)]; }

    /// Sets (pq|rs) and its seven symmetry images.
    void set_eri(int p, int q, int r, int s, double v) {
        for (auto [a, b] : {std::pair{p, q}, std::pair{q, p}}) {
            for (auto [c, d] : {std::pair{r, s}, std::pair{s, r}}) {
                g2_[offset(a, b, c, d)] = v;
                g2_[offset(c, d, a, b)] = v;
            }
        }
    }

    [[nodiscard]] const std::vector<double>& eri_data() const noexcept { return g2_; }

    double core_energy = 0.0; // Hartree

    /// Maximum deviation from the eight-fold permutational symmetry.
    [[nodiscard]] double symmetry_residual() const {
        double worst = (h_ - h_.transpose()).cwiseAbs().maxCoeff();
        for (int p = 0; p < n_; ++p)
            for (int q = 0; q < n_; ++q)
                for (int r = 0; r < n_; ++r)
                    for (int s = 0; s < n_; ++s) {
                        const double v = eri(p, q, r, s);
                        worst = std::max({worst, std::abs(v - eri(q, p, r, s)),
                                          std::abs(v - eri(p, q, s, r)), std::abs(v - eri(r, s, p, q))});
                    }
        return worst;
    }

    /// Integrals in the rotated orbital basis phi'_a = sum_p U(p,a) phi_p.
    [[nodiscard]] IntegralSet rotated(const Eigen::MatrixXd& u) const {
        if (u.rows() != n_ || u.cols() != n_) throw InputError("IntegralSet::rotated: dimension mismatch");
        IntegralSet out(n_);
        out.core_energy = core_energy;
        out.h_ = u.transpose() * h_ * u;
        // Four quarter transformations over the flattened tensor.
        const std::size_t n = n_;
        std::vector<double> a = g2_, b(a.size());
        auto idx = [n](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
            return ((i * n + j) * n + k) * n + l;
        };
        for (int step = 0; step < 4; ++step) {
            std::fill(b.begin(), b.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t l = 0; l < n; ++l) {
                            const double v = a[idx(i, j, k, l)];
                            if (v == 0.0) continue;
                            // Transform the first index and cycle it to the back.
                            for (std::size_t x = 0; x < n; ++x) b[idx(j, k, l, x)] += u(i, x) * v;
                        }
            std::swap(a, b);
        }
        out.g2_ = std::move(a);
        return out;
    }

private:
    [[nodiscard]] std::size_t offset(int p, int q, int r, int s) const noexcept {
        const std::size_t n = n_;
        return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
    }

    int n_ = 0;
    Eigen::MatrixXd h_;
    std::vector<double> g2_;
};

} // namespace casq
