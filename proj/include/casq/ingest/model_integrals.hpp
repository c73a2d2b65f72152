// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model_integrals.hpp
 * @brief Seeded synthetic integral sets for testing and benchmarking.
 *
 * Two-electron integrals are built as (pq|rs) = sum_P B_{P,pq} B_{P,rs} with
 * symmetric B_P, so the supermatrix is positive semidefinite and every
 * permutational symmetry holds exactly.
 */

#pragma once

#include <casq/ingest/integrals.hpp>
#include <casq/ingest/property_integrals.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace casq {

struct ModelIntegralOptions {
    double orbital_spread = 1.0; // Hartree, spacing scale of diag(h)
    double coupling = 0.1;       // off-diagonal h scale
    double eri_scale = 0.3;
    int n_aux = 0;               // 0 picks n_orb + 2
    double core_energy = 0.0;
};

[[nodiscard]] inline IntegralSet random_integrals(int n_orb, std::uint64_t seed, const ModelIntegralOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    IntegralSet ints(n_orb);
    ints.core_energy = opt.core_energy;
    for (int p = 0; p < n_orb; ++p) {
        ints.set_h(p, p, -opt.orbital_spread * (n_orb - p) / n_orb + 0.05 * unif(rng));
        for (int q = 0; q < p; ++q) ints.set_h(p, q, opt.coupling * unif(rng));
    }

    const int n_aux = opt.n_aux > 0 ? opt.n_aux : n_orb + 2;
    const int npair = n_orb * n_orb;
    Eigen::MatrixXd b(n_aux, npair);
    for (int a = 0; a < n_aux; ++a)
        for (int p = 0; p < n_orb; ++p)
            for (int q = 0; q <= p; ++q) {
                // Diagonal pairs dominate, like real Coulomb integrals.
                const double v = (p == q ? 1.0 + 0.3 * gauss(rng) : 0.25 * gauss(rng)) / std::sqrt(double(n_aux));
                b(a, p * n_orb + q) = v;
                b(a, q * n_orb + p) = v;
            }
    const Eigen::MatrixXd g = opt.eri_scale * (b.transpose() * b);
    for (int p = 0; p < n_orb; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r < n_orb; ++r)
                for (int s = 0; s <= r; ++s) {
                    const int pq = p * n_orb + q, rs = r * n_orb + s;
                    if (pq < rs) continue;
                    ints.set_eri(p, q, r, s, g(pq, rs));
                }
    return ints;
}

/// Random antisymmetric L and Z and symmetric dipole integrals.
[[nodiscard]] inline PropertyIntegrals random_property_integrals(int n_orb, std::uint64_t seed,
                                                                double soc_scale = 1e-3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    PropertyIntegrals prop = PropertyIntegrals::zero(n_orb);
    for (int k = 0; k < 3; ++k)
        for (int p = 0; p < n_orb; ++p)
            for (int q = 0; q < p; ++q) {
                const double l = unif(rng);
                prop.angmom[k](p, q) = l;
                prop.angmom[k](q, p) = -l;
                const double z = soc_scale * unif(rng);
                prop.soc[k](p, q) = z;
                prop.soc[k](q, p) = -z;
                const double d = unif(rng);
                prop.dipole[k](p, q) = d;
                prop.dipole[k](q, p) = d;
            }
    for (int k = 0; k < 3; ++k)
        for (int p = 0; p < n_orb; ++p) prop.dipole[k](p, p) = unif(rng);
    return prop;
}

} // namespace casq
