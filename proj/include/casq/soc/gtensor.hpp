// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file gtensor.hpp
 * @brief g-tensors from the ground Kramers pair (effective Hamiltonian) and
 *        from the second-order sum over states.
 *
 * Effective Hamiltonian: over the pair (a, Ta) the Zeeman matrices
 * Lambda_K = <i|L_K + g_e S_K|j> are mapped onto sum_L g_KL sigma_L / 2, so
 * g_KL = Tr(Lambda_K sigma_L). The pseudo-spin frame is arbitrary up to a
 * rotation, hence only G = g g^T and its eigenvectors carry meaning.
 *
 * Sum over states, with M_S = S components |0>, |b> of equal spin:
 *   dg_KL = -(1/S) sum_b [<0|L_K|b><b|z_L s_z|0> + <0|z_K s_z|b><b|L_L|0>] / (E_b - E_0).
 */

#pragma once

#include <casq/casci/multiplet.hpp>
#include <casq/core/error.hpp>
#include <casq/core/units.hpp>
#include <casq/soc/qdpt.hpp>
#include <casq/soc/soc_matrix.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace casq {

struct GTensor {
    Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
    Eigen::Vector3d principal = Eigen::Vector3d::Zero(); // (g_x, g_y, g_z)
    Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();  // column K is the K principal axis
    std::string method;                                   // "EHA" or "SOS"
};

namespace detail {

inline std::array<Eigen::Matrix2cd, 3> pauli() {
    const cplx i1(0.0, 1.0);
    Eigen::Matrix2cd x, y, z;
    x << 0, 1, 1, 0;
    y << 0, -i1, i1, 0;
    z << 1, 0, 0, -1;
    return {x, y, z};
}

// Principal values sqrt(eig(g g^T)); the axis with the largest z projection is
// called z, then the larger x projection of the rest is called x.
inline void principal_axes(GTensor& g) {
    const Eigen::Matrix3d big_g = g.matrix * g.matrix.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(0.5 * (big_g + big_g.transpose()));
    const Eigen::Vector3d vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix3d vecs = eig.eigenvectors();
    std::array<int, 3> idx{0, 1, 2};
    const auto iz = *std::max_element(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(vecs(2, a)) < std::abs(vecs(2, b));
    });
    std::vector<int> rest;
    for (int i : idx)
        if (i != iz) rest.push_back(i);
    const int ix = std::abs(vecs(0, rest[0])) >= std::abs(vecs(0, rest[1])) ? rest[0] : rest[1];
    const int iy = ix == rest[0] ? rest[1] : rest[0];
    const std::array<int, 3> order{ix, iy, iz};
    for (int k = 0; k < 3; ++k) {
        g.principal[k] = vals[order[static_cast<std::size_t>(k)]];
        Eigen::Vector3d v = vecs.col(order[static_cast<std::size_t>(k)]);
        if (v[k] < 0.0) v = -v;
        g.axes.col(k) = v;
    }
}

} // namespace detail

/// g from a Kramers pair given as vectors over the SOC basis.
[[nodiscard]] inline GTensor g_tensor_eha(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                                          const std::array<Eigen::MatrixXcd, 3>& zeeman,
                                          const Eigen::MatrixXd& time_reversal) {
    const Eigen::VectorXcd ta = apply_time_reversal(time_reversal, a);
    if (std::abs(b.dot(ta)) < 1.0 - kramers_overlap_tol || std::abs(a.dot(ta)) > kramers_overlap_tol)
        throw InputError("g_tensor_eha: the pair is not time-reversal conjugate");
    const auto sigma = detail::pauli();
    GTensor g;
    g.method = "EHA";
    for (int k = 0; k < 3; ++k) {
        const auto& m = zeeman[static_cast<std::size_t>(k)];
        Eigen::Matrix2cd lambda;
        lambda(0, 0) = a.dot(m * a);
        lambda(0, 1) = a.dot(m * b);
        lambda(1, 0) = b.dot(m * a);
        lambda(1, 1) = b.dot(m * b);
        for (int l = 0; l < 3; ++l) g.matrix(k, l) = (lambda * sigma[static_cast<std::size_t>(l)]).trace().real();
    }
    detail::principal_axes(g);
    return g;
}

/// Sum-over-states g from the ground multiplet and same-spin excited multiplets.
[[nodiscard]] inline GTensor g_tensor_sos(const SpaceFamily& family, const Multiplet& ground,
                                          const std::vector<Multiplet>& excited, const PropertyIntegrals& prop,
                                          double g_e = units::g_electron) {
    if (ground.spin2 == 0) throw InputError("g_tensor_sos: ground state has S = 0");
    const CasSpace& space = family.at(ground.spin2);
    const Eigen::VectorXd& c0 = ground.top().coeffs;
    std::array<OneElectronOperator, 3> l, zs;
    for (int k = 0; k < 3; ++k) {
        l[static_cast<std::size_t>(k)] = ops::orbital(prop, k);
        zs[static_cast<std::size_t>(k)] = ops::soc_times_sz(prop, k);
    }
    Eigen::Matrix3d dg = Eigen::Matrix3d::Zero();
    for (const auto& b : excited) {
        if (b.spin2 != ground.spin2) continue;
        const double delta = b.energy - ground.energy;
        if (delta < 1e-8)
            throw InputError("g_tensor_sos: excitation energy " + std::to_string(delta) +
                             " Hartree is too small; the ground manifold is degenerate, use the effective Hamiltonian");
        const Eigen::VectorXd& cb = b.top().coeffs;
        const PairDensity d0b = pair_density(space, c0, space, cb);
        const PairDensity db0 = pair_density(space, cb, space, c0);
        std::array<cplx, 3> l0b, lb0, z0b, zb0;
        for (std::size_t k = 0; k < 3; ++k) {
            l0b[k] = contract(l[k], d0b);
            lb0[k] = contract(l[k], db0);
            z0b[k] = contract(zs[k], d0b);
            zb0[k] = contract(zs[k], db0);
        }
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t m = 0; m < 3; ++m)
                dg(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) +=
                    (l0b[k] * zb0[m] + z0b[k] * lb0[m]).real() / delta;
    }
    GTensor g;
    g.method = "SOS";
    g.matrix = g_e * Eigen::Matrix3d::Identity() - dg / ground.spin();
    detail::principal_axes(g);
    return g;
}

/// Full effective-Hamiltonian workflow for the lowest Kramers pair.
struct EhaResult {
    GTensor g;
    SoEigenstates states;
    SocStateBasis basis;
};

[[nodiscard]] inline EhaResult g_tensor_from_multiplets(const SpaceFamily& family, const std::vector<Multiplet>& multiplets,
                                                        const PropertyIntegrals& prop,
                                                        const std::vector<std::size_t>& selected = {},
                                                        double g_e = units::g_electron) {
    if (family.n_elec() % 2 == 0) throw InputError("g-tensor: even electron count has no Kramers pair");
    EhaResult r;
    r.basis = SocStateBasis::from_multiplets(multiplets, selected);
    const Eigen::MatrixXcd soc = soc_matrix(r.basis, multiplets, family, prop);
    const Eigen::MatrixXd u = time_reversal_matrix(r.basis, multiplets, family);
    r.states = qdpt(r.basis.energies(multiplets), soc, u, true);
    const auto z = zeeman_matrices(r.basis, multiplets, family, prop, g_e);
    const auto [ia, ib] = r.states.kramers_pairs.front();
    r.g = g_tensor_eha(r.states.vectors.col(ia), r.states.vectors.col(ib), z, u);
    return r;
}

} // namespace casq
