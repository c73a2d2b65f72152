// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file soc_matrix.hpp
 * @brief Spin-orbit, orbital and spin angular momentum matrices over the
 *        spin components of a set of multiplets.
 *
 * Property matrices store imaginary parts: <p|l_K|q> = i L_K[p,q] and
 * <p|z_K|q> = i Z_K[p,q]. With s_x = (s+ + s-)/2 and s_y = (s+ - s-)/(2i),
 *   H_SO = sum_pq  i Z_z/2 (a+_pa a_qa - a+_pb a_qb)
 *                + (i Z_x + Z_y)/2  a+_pa a_qb
 *                + (i Z_x - Z_y)/2  a+_pb a_qa.
 */

#pragma once

#include <casq/casci/density.hpp>
#include <casq/casci/multiplet.hpp>
#include <casq/core/error.hpp>
#include <casq/ingest/property_integrals.hpp>

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <set>
#include <string>
#include <vector>

namespace casq {

using cplx = std::complex<double>;

struct SocBasisEntry {
    std::size_t multiplet = 0; // index into the multiplet list
    int spin2 = 0;
    int ms2 = 0;

    friend bool operator==(const SocBasisEntry&, const SocBasisEntry&) = default;
};

struct SocStateBasis {
    std::vector<SocBasisEntry> entries;

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }

    /// All components of the selected multiplets (all of them when `selected` is empty),
    /// ordered by multiplet and then descending ms2.
    [[nodiscard]] static SocStateBasis from_multiplets(const std::vector<Multiplet>& multiplets,
                                                       std::vector<std::size_t> selected = {}) {
        if (selected.empty())
            for (std::size_t i = 0; i < multiplets.size(); ++i) selected.push_back(i);
        SocStateBasis b;
        std::set<std::size_t> seen;
        for (std::size_t id : selected) {
            if (id >= multiplets.size()) throw InputError("SOC basis: multiplet id out of range");
            if (!seen.insert(id).second) throw InputError("SOC basis: multiplet listed twice");
            const auto& m = multiplets[id];
            if (static_cast<int>(m.components.size()) != m.spin2 + 1)
                throw InputError("SOC basis: multiplet " + std::to_string(id) + " is missing spin components");
            for (int ms2 = m.spin2; ms2 >= -m.spin2; ms2 -= 2) b.entries.push_back({id, m.spin2, ms2});
        }
        return b;
    }

    /// Spin-free energies on the diagonal.
    [[nodiscard]] Eigen::VectorXd energies(const std::vector<Multiplet>& multiplets) const {
        Eigen::VectorXd e(static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i) e[static_cast<Eigen::Index>(i)] = multiplets[entries[i].multiplet].energy;
        return e;
    }
};

namespace ops {

[[nodiscard]] inline OneElectronOperator spin_orbit(const PropertyIntegrals& prop) {
    const int n = prop.n_orb();
    const cplx i1(0.0, 1.0);
    auto op = OneElectronOperator::zero(n);
    const Eigen::MatrixXcd zx = prop.soc[0].cast<cplx>(), zy = prop.soc[1].cast<cplx>(), zz = prop.soc[2].cast<cplx>();
    op.aa = 0.5 * i1 * zz;
    op.bb = -0.5 * i1 * zz;
    op.ab = 0.5 * (i1 * zx + zy);
    op.ba = 0.5 * (i1 * zx - zy);
    return op;
}

/// Orbital angular momentum component K (0, 1, 2 = x, y, z).
[[nodiscard]] inline OneElectronOperator orbital(const PropertyIntegrals& prop, int k) {
    return OneElectronOperator::spin_free(cplx(0.0, 1.0) * prop.angmom[static_cast<std::size_t>(k)].cast<cplx>());
}

/// Total spin component K.
[[nodiscard]] inline OneElectronOperator spin(int n_orb, int k) {
    auto op = OneElectronOperator::zero(n_orb);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_orb, n_orb);
    const cplx i1(0.0, 1.0);
    switch (k) {
    case 0:
        op.ab = 0.5 * id;
        op.ba = 0.5 * id;
        break;
    case 1:
        op.ab = -0.5 * i1 * id;
        op.ba = 0.5 * i1 * id;
        break;
    default:
        op.aa = 0.5 * id;
        op.bb = -0.5 * id;
        break;
    }
    return op;
}

/// Spin-orbit component z_K s_z, as entering the sum-over-states g-shift.
[[nodiscard]] inline OneElectronOperator soc_times_sz(const PropertyIntegrals& prop, int k) {
    auto op = OneElectronOperator::zero(prop.n_orb());
    const Eigen::MatrixXcd z = cplx(0.0, 1.0) * prop.soc[static_cast<std::size_t>(k)].cast<cplx>();
    op.aa = 0.5 * z;
    op.bb = -0.5 * z;
    return op;
}

[[nodiscard]] inline OneElectronOperator dipole(const PropertyIntegrals& prop, int k) {
    return OneElectronOperator::spin_free(prop.dipole[static_cast<std::size_t>(k)].cast<cplx>());
}

inline OneElectronOperator operator+(OneElectronOperator a, const OneElectronOperator& b) {
    a.aa += b.aa;
    a.bb += b.bb;
    a.ab += b.ab;
    a.ba += b.ba;
    return a;
}

inline OneElectronOperator operator*(double s, OneElectronOperator a) {
    a.aa *= s;
    a.bb *= s;
    a.ab *= s;
    a.ba *= s;
    return a;
}

} // namespace ops

/// Matrices <i|O_k|j> over the basis for several operators, sharing densities.
/// Both triangles are evaluated independently.
[[nodiscard]] inline std::vector<Eigen::MatrixXcd> basis_matrices(const SocStateBasis& basis,
                                                                  const std::vector<Multiplet>& multiplets,
                                                                  const SpaceFamily& family,
                                                                  const std::vector<OneElectronOperator>& operators) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::MatrixXcd> out(operators.size(), Eigen::MatrixXcd::Zero(n, n));
    for (const auto& e : basis.entries) (void)family.at(e.ms2); // warm the cache before threading

    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(basis.entries[static_cast<std::size_t>(i)].ms2 - basis.entries[static_cast<std::size_t>(j)].ms2) <= 2)
                pairs.emplace_back(i, j);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        const auto& ei = basis.entries[static_cast<std::size_t>(i)];
        const auto& ej = basis.entries[static_cast<std::size_t>(j)];
        const PairDensity d = pair_density(family.at(ei.ms2), multiplets[ei.multiplet].component(ei.ms2).coeffs,
                                           family.at(ej.ms2), multiplets[ej.multiplet].component(ej.ms2).coeffs);
        for (std::size_t o = 0; o < operators.size(); ++o) out[o](i, j) = contract(operators[o], d);
    }
    return out;
}

inline constexpr double hermiticity_tol = 1e-8;

[[nodiscard]] inline double hermiticity_residual(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Spin-orbit matrix over the basis (Hartree).
[[nodiscard]] inline Eigen::MatrixXcd soc_matrix(const SocStateBasis& basis, const std::vector<Multiplet>& multiplets,
                                                 const SpaceFamily& family, const PropertyIntegrals& prop) {
    if (prop.n_orb() != family.n_orb()) throw InputError("soc_matrix: property integrals have the wrong orbital count");
    Eigen::MatrixXcd m = basis_matrices(basis, multiplets, family, {ops::spin_orbit(prop)})[0];
    const double r = hermiticity_residual(m);
    if (r > hermiticity_tol)
        throw InvariantError("soc_matrix: Hermiticity residual " + std::to_string(r) +
                             " (inconsistent multiplet phases?)");
    return 0.5 * (m + m.adjoint());
}

/// Zeeman operator components L_K + g_e S_K (field in units of the Bohr magneton).
[[nodiscard]] inline std::array<Eigen::MatrixXcd, 3> zeeman_matrices(const SocStateBasis& basis,
                                                                     const std::vector<Multiplet>& multiplets,
                                                                     const SpaceFamily& family,
                                                                     const PropertyIntegrals& prop, double g_e) {
    std::vector<OneElectronOperator> o;
    for (int k = 0; k < 3; ++k) o.push_back(ops::operator+(ops::orbital(prop, k), ops::operator*(g_e, ops::spin(prop.n_orb(), k))));
    auto m = basis_matrices(basis, multiplets, family, o);
    std::array<Eigen::MatrixXcd, 3> out;
    for (int k = 0; k < 3; ++k) {
        const double r = hermiticity_residual(m[static_cast<std::size_t>(k)]);
        if (r > hermiticity_tol) throw InvariantError("zeeman_matrices: Hermiticity residual " + std::to_string(r));
        out[static_cast<std::size_t>(k)] = 0.5 * (m[static_cast<std::size_t>(k)] + m[static_cast<std::size_t>(k)].adjoint());
    }
    return out;
}

} // namespace casq
