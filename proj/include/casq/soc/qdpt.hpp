// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file qdpt.hpp
 * @brief Quasi-degenerate diagonalization of spin-free energies plus SOC,
 *        with Kramers pairing by time reversal.
 */

#pragma once

#include <casq/casci/multiplet.hpp>
#include <casq/casci/spin.hpp>
#include <casq/core/error.hpp>
#include <casq/soc/soc_matrix.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace casq {

struct SoEigenstates {
    Eigen::VectorXd energies;  // ascending, Hartree
    Eigen::MatrixXcd vectors;  // columns over the SOC basis
    std::vector<std::pair<Eigen::Index, Eigen::Index>> kramers_pairs; // (a, T a)
};

inline constexpr double kramers_degeneracy_tol = 1e-10; // Hartree
inline constexpr double kramers_overlap_tol = 1e-8;

/// Real matrix U with T|j> = sum_i U(i,j) |i> over the basis; T x = U conj(x).
[[nodiscard]] inline Eigen::MatrixXd time_reversal_matrix(const SocStateBasis& basis,
                                                          const std::vector<Multiplet>& multiplets,
                                                          const SpaceFamily& family) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& ej = basis.entries[static_cast<std::size_t>(j)];
        const Eigen::VectorXd tj = time_reverse(family.at(ej.ms2), family.at(-ej.ms2),
                                                multiplets[ej.multiplet].component(ej.ms2).coeffs);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& ei = basis.entries[static_cast<std::size_t>(i)];
            if (ei.ms2 != -ej.ms2) continue;
            u(i, j) = multiplets[ei.multiplet].component(ei.ms2).coeffs.dot(tj);
        }
    }
    return u;
}

[[nodiscard]] inline Eigen::VectorXcd apply_time_reversal(const Eigen::MatrixXd& u, const Eigen::VectorXcd& x) {
    return u.cast<cplx>() * x.conjugate();
}

/// Eigenpairs of diag(E) + H_SO. With a time-reversal matrix and an odd
/// electron count, each degenerate cluster is rebuilt as Kramers pairs.
[[nodiscard]] inline SoEigenstates qdpt(const Eigen::VectorXd& diagonal, const Eigen::MatrixXcd& soc,
                                        const std::optional<Eigen::MatrixXd>& time_reversal = std::nullopt,
                                        bool odd_electrons = false) {
    const Eigen::Index n = diagonal.size();
    if (soc.rows() != n || soc.cols() != n) throw InputError("qdpt: SOC matrix does not match the basis");
    const double r = hermiticity_residual(soc);
    if (r > hermiticity_tol) throw InvariantError("qdpt: SOC matrix is not Hermitian (residual " + std::to_string(r) + ")");
    Eigen::MatrixXcd h = soc;
    h.diagonal() += diagonal.cast<cplx>();
    h = (0.5 * (h + h.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    SoEigenstates out{eig.eigenvalues(), eig.eigenvectors(), {}};
    if (!odd_electrons) return out;
    if (!time_reversal) throw InputError("qdpt: Kramers pairing needs the time-reversal matrix");
    const Eigen::MatrixXd& u = *time_reversal;

    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && out.energies[end] - out.energies[end - 1] <= kramers_degeneracy_tol) ++end;
        const Eigen::Index size = end - start;
        if (size % 2 != 0)
            throw InvariantError("qdpt: eigenvalue " + std::to_string(out.energies[start]) + " has odd degeneracy " +
                                 std::to_string(size) + " in an odd-electron system");
        // Symplectic Gram-Schmidt inside the degenerate subspace.
        Eigen::MatrixXcd span = out.vectors.middleCols(start, size);
        Eigen::MatrixXcd paired(n, size);
        for (Eigen::Index k = 0; k < size; k += 2) {
            const Eigen::Index remaining = size - k;
            Eigen::VectorXcd a = span.col(0);
            Eigen::VectorXcd ta = apply_time_reversal(u, a);
            const double self = std::abs(a.dot(ta));
            const double inside = (span.adjoint() * ta).norm();
            if (self > kramers_overlap_tol || inside < 1.0 - kramers_overlap_tol)
                throw InvariantError("qdpt: Kramers pairing failed at energy " + std::to_string(out.energies[start]) +
                                     " (|<a|Ta>| = " + std::to_string(self) +
                                     ", |P Ta| = " + std::to_string(inside) + ")");
            ta.normalize();
            paired.col(k) = a;
            paired.col(k + 1) = ta;
            // Remove a and Ta from the remaining span.
            Eigen::MatrixXcd rest(n, remaining);
            Eigen::Index kept = 0;
            for (Eigen::Index c = 0; c < remaining && kept < remaining - 2; ++c) {
                Eigen::VectorXcd v = span.col(c);
                for (int pass = 0; pass < 2; ++pass) {
                    v -= a * a.dot(v);
                    v -= ta * ta.dot(v);
                    for (Eigen::Index m = 0; m < kept; ++m) v -= rest.col(m) * rest.col(m).dot(v);
                }
                if (v.norm() > 1e-6) rest.col(kept++) = v.normalized();
            }
            if (kept != remaining - 2) throw InvariantError("qdpt: degenerate subspace lost rank during pairing");
            span = rest.leftCols(kept);
        }
        out.vectors.middleCols(start, size) = paired;
        for (Eigen::Index k = 0; k < size; k += 2) out.kramers_pairs.emplace_back(start + k, start + k + 1);
        start = end;
    }
    return out;
}

} // namespace casq
