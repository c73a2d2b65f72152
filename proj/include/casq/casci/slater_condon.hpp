// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file slater_condon.hpp
 * @brief Determinant-pair Hamiltonian matrix elements.
 *
 * Used to build dense reference matrices and the Davidson guess block. The
 * production sigma vector goes through the string-driven builder instead.
 */

#pragma once

#include <casq/detspace/determinant.hpp>
#include <casq/ingest/integrals.hpp>

#include <array>

namespace casq {

namespace detail {

struct SpinOrbital {
    Spin spin;
    int orb;
};

// Spin orbitals set in `a` but not in `b` (at most n_max are recorded).
template <std::size_t N>
inline int difference(const Determinant& a, const Determinant& b, std::array<SpinOrbital, N>& out) {
    int k = 0;
    for (Spin s : {Spin::alpha, Spin::beta}) {
        OccString d = a.string(s) & ~b.string(s);
        while (d && k < static_cast<int>(N)) {
            out[k++] = {s, std::countr_zero(d)};
            d &= d - 1;
        }
    }
    return k;
}

// <PQ||MN> in spin orbitals from chemist-notation spatial integrals.
inline double antisym(const IntegralSet& ints, SpinOrbital p, SpinOrbital q, SpinOrbital m, SpinOrbital n) {
    double v = 0.0;
    if (p.spin == m.spin && q.spin == n.spin) v += ints.eri(p.orb, m.orb, q.orb, n.orb);
    if (p.spin == n.spin && q.spin == m.spin) v -= ints.eri(p.orb, n.orb, q.orb, m.orb);
    return v;
}

} // namespace detail

/// Diagonal element <d|H|d>, including the core energy.
[[nodiscard]] inline double diagonal_element(const Determinant& d, const IntegralSet& ints) {
    double e = ints.core_energy;
    const int n = ints.n_orb();
    for (int p = 0; p < n; ++p) {
        const bool pa = occupied(d.alpha, p), pb = occupied(d.beta, p);
        if (pa) e += ints.h(p, p);
        if (pb) e += ints.h(p, p);
        if (pa && pb) e += ints.eri(p, p, p, p);
        for (int q = p + 1; q < n; ++q) {
            const bool qa = occupied(d.alpha, q), qb = occupied(d.beta, q);
            const int same = (pa && qa) + (pb && qb);
            const int opposite = (pa && qb) + (pb && qa);
            if (same + opposite == 0) continue;
            const double j = ints.eri(p, p, q, q);
            e += (same + opposite) * j - same * ints.eri(p, q, q, p);
        }
    }
    return e;
}

/// <bra|H|ket> by the Slater-Condon rules; zero beyond double excitations.
[[nodiscard]] inline double hamiltonian_element(const Determinant& bra, const Determinant& ket,
                                               const IntegralSet& ints) {
    const int degree = excitation_degree(bra, ket);
    if (degree == 0) return bra == ket ? diagonal_element(bra, ints) : 0.0;
    if (degree > 2) return 0.0;
    if (bra.ms2() != ket.ms2() || bra.n_alpha() + bra.n_beta() != ket.n_alpha() + ket.n_beta()) return 0.0;

    std::array<detail::SpinOrbital, 2> particles{}, holes{};
    detail::difference(bra, ket, particles);
    detail::difference(ket, bra, holes);

    if (degree == 1) {
        const auto p = particles[0], m = holes[0];
        const auto moved = excite(ket, p.spin, p.orb, m.spin, m.orb);
        double v = ints.h(p.orb, m.orb);
        for (Spin s : {Spin::alpha, Spin::beta}) {
            OccString occ = ket.string(s);
            while (occ) {
                const int k = std::countr_zero(occ);
                occ &= occ - 1;
                const detail::SpinOrbital ko{s, k};
                v += detail::antisym(ints, p, ko, m, ko);
            }
        }
        return moved->sign * v;
    }

    // a+_P a+_Q a_N a_M |ket>
    const auto [m, n] = holes;
    const auto [p, q] = particles;
    auto step = annihilate(ket, m.spin, m.orb);
    int sign = step->sign;
    step = annihilate(step->det, n.spin, n.orb);
    sign *= step->sign;
    step = create(step->det, q.spin, q.orb);
    sign *= step->sign;
    step = create(step->det, p.spin, p.orb);
    sign *= step->sign;
    return sign * detail::antisym(ints, p, q, m, n);
}

} // namespace casq
