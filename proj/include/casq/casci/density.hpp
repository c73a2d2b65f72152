// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file density.hpp
 * @brief Spin-resolved one-particle (transition) densities and one-electron
 *        operator matrix elements between CI states.
 *
 * For states A, B in the same ms2 block
 *   gamma_alpha[p,q] = <A| a+_{p,alpha} a_{q,alpha} |B>   (likewise beta).
 * For ms2(A) = ms2(B) + 2
 *   flip[p,q] = <A| a+_{p,alpha} a_{q,beta} |B>.
 * Any spin-dependent one-electron operator
 *   O = sum_pq aa[p,q] a+_pa a_qa + bb a+_pb a_qb + ab a+_pa a_qb + ba a+_pb a_qa
 * contracts against these.
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/detspace/cas_space.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace casq {

struct SpinDensity {
    Eigen::MatrixXd alpha;
    Eigen::MatrixXd beta;

    [[nodiscard]] Eigen::MatrixXd total() const { return alpha + beta; }
    [[nodiscard]] Eigen::MatrixXd spin() const { return 0.5 * (alpha - beta); }
};

namespace detail {

inline void check_vector(const CasSpace& s, const Eigen::VectorXd& v, const char* what) {
    if (v.size() != static_cast<Eigen::Index>(s.size()))
        throw InputError(std::string(what) + ": vector dimension does not match the CAS space");
}

} // namespace detail

/// Same-block transition density <bra| a+_p a_q |ket> per spin.
[[nodiscard]] inline SpinDensity transition_density(const CasSpace& space, const Eigen::VectorXd& bra,
                                                    const Eigen::VectorXd& ket) {
    detail::check_vector(space, bra, "transition_density");
    detail::check_vector(space, ket, "transition_density");
    const int n = space.n_orb();
    const auto nb = static_cast<Eigen::Index>(space.n_beta_strings());
    const auto na = static_cast<Eigen::Index>(space.n_alpha_strings());
    const Eigen::Map<const Eigen::MatrixXd> a(bra.data(), nb, na), b(ket.data(), nb, na);
    SpinDensity d{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};

    const StringSingles as = alpha_singles(space);
    for (Eigen::Index i = 0; i < na; ++i)
        as.for_each(static_cast<std::size_t>(i), [&](const StringSingles::Entry& e) {
            d.alpha(e.p, e.q) += e.sign * a.col(e.target).dot(b.col(i));
        });
    const StringSingles bs = beta_singles(space);
    for (Eigen::Index i = 0; i < nb; ++i)
        bs.for_each(static_cast<std::size_t>(i), [&](const StringSingles::Entry& e) {
            d.beta(e.p, e.q) += e.sign * a.row(e.target).dot(b.row(i));
        });
    return d;
}

/// <bra| a+_{p,alpha} a_{q,beta} |ket> with bra in the ms2 + 2 block of ket.
[[nodiscard]] inline Eigen::MatrixXd spin_flip_density(const CasSpace& bra_space, const Eigen::VectorXd& bra,
                                                       const CasSpace& ket_space, const Eigen::VectorXd& ket) {
    detail::check_vector(bra_space, bra, "spin_flip_density");
    detail::check_vector(ket_space, ket, "spin_flip_density");
    if (bra_space.ms2() != ket_space.ms2() + 2 || bra_space.n_orb() != ket_space.n_orb() ||
        bra_space.n_elec() != ket_space.n_elec())
        throw InputError("spin_flip_density: bra block must be ms2 + 2 of the ket block");
    const int n = ket_space.n_orb();
    const int n_alpha_ket = ket_space.n_alpha();

    // alpha creation a+_p: ket alpha string -> bra alpha string
    struct Hop {
        std::uint32_t target;
        std::int8_t sign;
        std::uint8_t orb;
    };
    auto build = [&](const std::vector<OccString>& strs, bool create, int extra_parity) {
        std::vector<std::vector<Hop>> t(strs.size());
        for (std::size_t i = 0; i < strs.size(); ++i)
            for (int p = 0; p < n; ++p) {
                const OccString s = strs[i];
                if (occupied(s, p) == create) continue;
                const OccString u = create ? (s | (OccString{1} << p)) : (s & ~(OccString{1} << p));
                const auto idx = create ? bra_space.alpha_index(u) : bra_space.beta_index(u);
                const int parity = popcount(s & bits_below(p)) + extra_parity;
                t[i].push_back({*idx, static_cast<std::int8_t>((parity & 1) ? -1 : 1), static_cast<std::uint8_t>(p)});
            }
        return t;
    };
    // a_{q,beta} passes every alpha creator of the ket; a+_{p,alpha} then only lower alphas.
    const auto alpha_hops = build(ket_space.alpha_strings(), true, 0);
    const auto beta_hops = build(ket_space.beta_strings(), false, n_alpha_ket);

    const auto nb_ket = static_cast<Eigen::Index>(ket_space.n_beta_strings());
    const auto nb_bra = static_cast<Eigen::Index>(bra_space.n_beta_strings());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t ia = 0; ia < alpha_hops.size(); ++ia)
        for (Eigen::Index ib = 0; ib < nb_ket; ++ib) {
            const double c = ket[static_cast<Eigen::Index>(ia) * nb_ket + ib];
            if (c == 0.0) continue;
            for (const Hop& ha : alpha_hops[ia]) {
                const double ca = ha.sign * c;
                const Eigen::Index row = static_cast<Eigen::Index>(ha.target) * nb_bra;
                for (const Hop& hb : beta_hops[static_cast<std::size_t>(ib)])
                    t(ha.orb, hb.orb) += hb.sign * ca * bra[row + hb.target];
            }
        }
    return t;
}

/// Spin-dependent one-electron operator in spin-orbital blocks.
struct OneElectronOperator {
    Eigen::MatrixXcd aa, bb, ab, ba;

    [[nodiscard]] static OneElectronOperator zero(int n) {
        const Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, n);
        return {z, z, z, z};
    }
    /// Spin-free operator with matrix m on both spins.
    [[nodiscard]] static OneElectronOperator spin_free(const Eigen::MatrixXcd& m) {
        auto op = zero(static_cast<int>(m.rows()));
        op.aa = m;
        op.bb = m;
        return op;
    }
};

/// Densities for one bra/ket pair. `same` is filled when delta_ms2 = 0. `flip`
/// holds <bra|a+_a a_b|ket> for delta_ms2 = +2 and <ket|a+_a a_b|bra> for -2.
struct PairDensity {
    int delta_ms2 = 0;
    SpinDensity same;
    Eigen::MatrixXd flip;
};

/// <bra|O|ket> from the pair densities.
[[nodiscard]] inline std::complex<double> contract(const OneElectronOperator& op, const PairDensity& d) {
    switch (d.delta_ms2) {
    case 0:
        return (op.aa.array() * d.same.alpha.array().cast<std::complex<double>>()).sum() +
               (op.bb.array() * d.same.beta.array().cast<std::complex<double>>()).sum();
    case 2:
        return (op.ab.array() * d.flip.array().cast<std::complex<double>>()).sum();
    case -2:
        // <bra|a+_{p,beta} a_{q,alpha}|ket> = <ket|a+_{q,alpha} a_{p,beta}|bra> = flip[q,p]
        return (op.ba.array() * d.flip.transpose().array().cast<std::complex<double>>()).sum();
    default:
        return 0.0;
    }
}

[[nodiscard]] inline PairDensity pair_density(const CasSpace& bra_space, const Eigen::VectorXd& bra,
                                              const CasSpace& ket_space, const Eigen::VectorXd& ket) {
    PairDensity d;
    d.delta_ms2 = bra_space.ms2() - ket_space.ms2();
    if (d.delta_ms2 == 0) d.same = transition_density(ket_space, bra, ket);
    else if (d.delta_ms2 == 2) d.flip = spin_flip_density(bra_space, bra, ket_space, ket);
    else if (d.delta_ms2 == -2) d.flip = spin_flip_density(ket_space, ket, bra_space, bra);
    return d;
}

// ---------------------------------------------------------------------------
// Reduced densities and occupations

struct RdmOne {
    Eigen::MatrixXd matrix; // spin-traced
};

/// Weighted spin-traced 1-RDM over states of one block.
[[nodiscard]] inline RdmOne one_rdm(const CasSpace& space, const std::vector<Eigen::VectorXd>& states,
                                    const std::vector<double>& weights) {
    if (states.size() != weights.size() || states.empty())
        throw InputError("one_rdm: need one weight per state");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw InputError("one_rdm: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InputError("one_rdm: weights must sum to 1");
    const int n = space.n_orb();
    RdmOne r{Eigen::MatrixXd::Zero(n, n)};
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (weights[i] == 0.0) continue;
        r.matrix += weights[i] * transition_density(space, states[i], states[i]).total();
    }
    r.matrix = 0.5 * (r.matrix + r.matrix.transpose()).eval();
    return r;
}

inline constexpr double occupation_clip_tol = 1e-10;

/// Natural occupation numbers, descending.
[[nodiscard]] inline std::vector<double> natural_occupations(const Eigen::MatrixXd& rdm) {
    if (rdm.rows() != rdm.cols()) throw InputError("natural_occupations: matrix is not square");
    if ((rdm - rdm.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw InputError("natural_occupations: density matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rdm, Eigen::EigenvaluesOnly);
    std::vector<double> occ(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    for (double& x : occ) {
        if (x < -occupation_clip_tol || x > 2.0 + occupation_clip_tol)
            throw InvariantError("natural_occupations: eigenvalue " + std::to_string(x) + " outside [0, 2]");
        x = std::clamp(x, 0.0, 2.0);
    }
    std::sort(occ.rbegin(), occ.rend());
    return occ;
}

[[nodiscard]] inline std::vector<double> natural_occupations(const RdmOne& rdm) {
    return natural_occupations(rdm.matrix);
}

} // namespace casq
