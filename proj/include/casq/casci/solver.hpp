// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file solver.hpp
 * @brief CASCI root solvers: Davidson (production), dense (reference) and
 *        spin-targeted variants.
 *
 * Spin targeting restricts the Davidson search space with a spin projector;
 * since [H, S^2] = 0 the projected iteration converges to eigenpairs of the
 * wanted spin. The small dense guess problem uses the penalty
 * lambda (S^2 - S(S+1))^2 instead, which is exact there because the guess
 * determinant set is closed under S^2.
 */

#pragma once

#include <casq/casci/davidson.hpp>
#include <casq/casci/hamiltonian.hpp>
#include <casq/casci/slater_condon.hpp>
#include <casq/casci/spin.hpp>
#include <casq/core/error.hpp>
#include <casq/detspace/cas_space.hpp>
#include <casq/ingest/integrals.hpp>
#include <casq/ingest/run_config.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace casq {

struct CiState {
    double energy = 0.0; // Hartree
    Eigen::VectorXd coeffs;
    int ms2 = 0;
    double s2_expect = 0.0;
    int multiplicity = 1; // 2S+1
};

inline constexpr std::size_t default_dense_cap = 20000;
inline constexpr double spin_penalty = 0.5; // Hartree

namespace detail {

inline int multiplicity_from_s2(double s2) { return static_cast<int>(std::lround(2.0 * spin_from_s2(s2))) + 1; }

// Lowest-diagonal determinants, completed so that every spatial configuration
// present appears with all of its spin couplings in this block.
inline std::vector<std::size_t> guess_determinants(const CasSpace& space, const Eigen::VectorXd& diag,
                                                   std::size_t guess_dim) {
    const std::size_t n = space.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(guess_dim, n);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const auto da = diag[static_cast<Eigen::Index>(a)], db = diag[static_cast<Eigen::Index>(b)];
                          return da < db || (da == db && a < b);
                      });
    std::vector<char> chosen(n, 0);
    std::vector<std::size_t> out;
    auto add = [&](std::size_t k) {
        if (!chosen[k]) {
            chosen[k] = 1;
            out.push_back(k);
        }
    };
    for (std::size_t i = 0; i < take; ++i) {
        const Determinant d = space.det(order[i]);
        const OccString doubly = d.alpha & d.beta;
        const OccString open = d.alpha ^ d.beta;
        const int n_open = popcount(open);
        const int n_up = popcount(d.alpha & ~d.beta);
        // Every distribution of n_up alpha spins over the open shells.
        std::vector<int> shells;
        for (OccString o = open; o; o &= o - 1) shells.push_back(std::countr_zero(o));
        for (const OccString pattern : enumerate_strings(n_open, n_up)) {
            Determinant e{doubly, doubly};
            for (int j = 0; j < n_open; ++j) {
                const OccString bit = OccString{1} << shells[static_cast<std::size_t>(j)];
                if (occupied(pattern, j)) e.alpha |= bit;
                else e.beta |= bit;
            }
            add(*space.index(e));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// S^2 restricted to a spin-complete determinant subset (closed under S^2).
inline Eigen::MatrixXd s2_block(const CasSpace& space, const std::vector<std::size_t>& subset) {
    const Eigen::Index m = static_cast<Eigen::Index>(subset.size());
    const double sz = 0.5 * space.ms2();
    Eigen::MatrixXd s2 = sz * (sz + 1.0) * Eigen::MatrixXd::Identity(m, m);
    // Group S+ images: <i|S-S+|j> = sum_K <K|S+|i><K|S+|j>.
    std::unordered_map<Determinant, std::vector<std::pair<Eigen::Index, int>>, DeterminantHash> images;
    for (Eigen::Index i = 0; i < m; ++i) {
        const Determinant d = space.det(subset[static_cast<std::size_t>(i)]);
        for (int p = 0; p < space.n_orb(); ++p) {
            const auto img = excite(d, Spin::alpha, p, Spin::beta, p);
            if (img) images[img->det].emplace_back(i, img->sign);
        }
    }
    for (const auto& [det, list] : images)
        for (const auto& [i, si] : list)
            for (const auto& [j, sj] : list) s2(i, j) += si * sj;
    return s2;
}

struct GuessBlock {
    Eigen::MatrixXd vectors; // N x k
};

inline Eigen::MatrixXd build_guess(const CasSpace& space, const IntegralSet& ints, const Eigen::VectorXd& diag,
                                   int n_roots, std::size_t guess_dim, const std::optional<double>& target_s) {
    const auto subset = guess_determinants(space, diag, std::max<std::size_t>(guess_dim, n_roots));
    const Eigen::Index m = static_cast<Eigen::Index>(subset.size());
    Eigen::MatrixXd h(m, m);
    std::vector<Determinant> dets(subset.size());
    for (Eigen::Index i = 0; i < m; ++i) dets[static_cast<std::size_t>(i)] = space.det(subset[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = hamiltonian_element(dets[static_cast<std::size_t>(i)], dets[static_cast<std::size_t>(j)], ints);
            h(i, j) = v;
            h(j, i) = v;
        }
    if (target_s) {
        const Eigen::MatrixXd p = s2_block(space, subset) -
                                  (*target_s) * (*target_s + 1.0) * Eigen::MatrixXd::Identity(m, m);
        h += spin_penalty * p * p;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const Eigen::Index keep = std::min<Eigen::Index>(m, 2 * static_cast<Eigen::Index>(n_roots));
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(space.size()), keep);
    for (Eigen::Index c = 0; c < keep; ++c)
        for (Eigen::Index i = 0; i < m; ++i) g(static_cast<Eigen::Index>(subset[static_cast<std::size_t>(i)]), c) = eig.eigenvectors()(i, c);
    return g;
}

inline std::string residual_report(const std::vector<double>& r) {
    std::ostringstream os;
    os.precision(3);
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? ", " : "") << r[i];
    return os.str();
}

// Rotates roots within clusters of near-degenerate energies onto S^2 eigenvectors.
inline void spin_adapt_clusters(const SpinSquaredOperator& s2op, Eigen::VectorXd& energies, Eigen::MatrixXd& vecs,
                                double cluster_tol) {
    const Eigen::Index n = energies.size();
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && energies[end] - energies[end - 1] <= cluster_tol) ++end;
        const Eigen::Index size = end - start;
        if (size > 1) {
            Eigen::MatrixXd block = vecs.middleCols(start, size);
            Eigen::MatrixXd s2(size, size);
            for (Eigen::Index i = 0; i < size; ++i) {
                const Eigen::VectorXd si = s2op.apply(block.col(i));
                for (Eigen::Index j = 0; j < size; ++j) s2(j, i) = block.col(j).dot(si);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (s2 + s2.transpose()));
            vecs.middleCols(start, size) = block * eig.eigenvectors();
            // Energies are equal within the cluster tolerance; keep them ordered.
        }
        start = end;
    }
}

inline std::vector<CiState> package(const CasSpace& space, const SpinSquaredOperator& s2op, const HamiltonianOperator* hop,
                                    const Eigen::VectorXd& energies, const Eigen::MatrixXd& vecs) {
    std::vector<CiState> out;
    for (Eigen::Index k = 0; k < energies.size(); ++k) {
        CiState s;
        s.coeffs = vecs.col(k);
        s.coeffs.normalize();
        s.energy = hop ? s.coeffs.dot(hop->apply(s.coeffs)) : energies[k];
        s.ms2 = space.ms2();
        s.s2_expect = s2op.expectation(s.coeffs);
        s.multiplicity = multiplicity_from_s2(s.s2_expect);
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const CiState& a, const CiState& b) { return a.energy < b.energy; });
    return out;
}

inline std::vector<CiState> run_davidson(const CasSpace& space, const IntegralSet& ints, int n_roots,
                                         const DavidsonOptions& opt, const std::optional<double>& target_s) {
    if (n_roots < 1) return {};
    if (static_cast<std::size_t>(n_roots) > space.size())
        throw InputError("solve_davidson: n_roots=" + std::to_string(n_roots) + " exceeds the space dimension " +
                         std::to_string(space.size()));
    if (opt.guess_dim < n_roots) throw InputError("solve_davidson: guess_dim must be >= n_roots");

    const HamiltonianOperator hop(space, ints);
    const SpinSquaredOperator s2op(space);
    const Eigen::VectorXd& diag = hop.diagonal();
    auto apply = [&](const Eigen::MatrixXd& x) { return hop.apply(x); };
    BlockProjector project;
    std::optional<SpinProjector> proj;
    if (target_s) {
        proj.emplace(space, *target_s);
        // Twice: one pass leaves rounding-level admixtures amplified by the polynomial.
        project = [&](Eigen::MatrixXd& m) {
            proj->apply_columns(m);
            proj->apply_columns(m);
        };
    }
    const Eigen::MatrixXd guess =
        build_guess(space, ints, diag, n_roots, static_cast<std::size_t>(opt.guess_dim), target_s);
    DavidsonResult res = davidson(apply, diag, n_roots, opt, guess, project);
    if (!res.converged)
        throw ConvergenceError("Davidson did not converge after " + std::to_string(res.iterations) +
                                   " iterations; residuals: " + residual_report(res.residuals),
                               res.residuals);
    if (!target_s) spin_adapt_clusters(s2op, res.eigenvalues, res.eigenvectors, 10.0 * opt.tol);
    return package(space, s2op, &hop, res.eigenvalues, res.eigenvectors);
}

} // namespace detail

[[nodiscard]] inline std::uint64_t states_of_spin(int n_elec, int n_orb, int multiplicity);

/// Lowest n_roots eigenpairs of H in this M_S block, sorted by energy.
///
/// Solved one spin sector at a time and merged: H conserves S^2, so a plain
/// Davidson run whose corrections stay in the spins of the tracked roots can
/// converge past a low state of another spin.
[[nodiscard]] inline std::vector<CiState> solve_davidson(const CasSpace& space, const IntegralSet& ints, int n_roots,
                                                         const DavidsonOptions& opt = {}) {
    if (n_roots < 1) return {};
    if (static_cast<std::size_t>(n_roots) > space.size())
        throw InputError("solve_davidson: n_roots=" + std::to_string(n_roots) + " exceeds the space dimension " +
                         std::to_string(space.size()));
    std::vector<CiState> all;
    const int open_max = std::min(space.n_elec(), 2 * space.n_orb() - space.n_elec());
    for (int two_s = std::abs(space.ms2()); two_s <= open_max; two_s += 2) {
        const auto count = states_of_spin(space.n_elec(), space.n_orb(), two_s + 1);
        const int n = static_cast<int>(std::min<std::uint64_t>(count, static_cast<std::uint64_t>(n_roots)));
        if (n == 0) continue;
        auto part = detail::run_davidson(space, ints, n, opt, 0.5 * two_s);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    std::stable_sort(all.begin(), all.end(), [](const CiState& a, const CiState& b) { return a.energy < b.energy; });
    all.resize(static_cast<std::size_t>(n_roots));
    return all;
}

/// Lowest n_roots states of spin S = (multiplicity - 1)/2 in this M_S block.
[[nodiscard]] inline std::vector<CiState> solve_multiplicity(const CasSpace& space, const IntegralSet& ints,
                                                             int multiplicity, int n_roots,
                                                             const DavidsonOptions& opt = {}) {
    const double s = 0.5 * (multiplicity - 1);
    if (std::abs(space.ms2()) > multiplicity - 1)
        throw InputError("solve_multiplicity: |ms2| exceeds 2S for multiplicity " + std::to_string(multiplicity));
    if ((multiplicity - 1 - space.ms2()) % 2 != 0)
        throw InputError("solve_multiplicity: multiplicity incompatible with the electron count");
    auto states = detail::run_davidson(space, ints, n_roots, opt, s);
    for (const auto& st : states)
        if (st.multiplicity != multiplicity)
            throw InvariantError("solve_multiplicity: converged root has <S^2> = " + std::to_string(st.s2_expect) +
                                 ", not multiplicity " + std::to_string(multiplicity) +
                                 " (too few states of this spin?)");
    return states;
}

/// Explicit Hamiltonian matrix from the Slater-Condon rules.
[[nodiscard]] inline Eigen::MatrixXd dense_hamiltonian(const CasSpace& space, const IntegralSet& ints,
                                                       std::size_t cap = default_dense_cap) {
    if (space.size() > cap)
        throw InputError("dense_solve: space of " + std::to_string(space.size()) + " determinants exceeds the cap of " +
                         std::to_string(cap));
    const auto dets = space.dets();
    const Eigen::Index n = static_cast<Eigen::Index>(dets.size());
    Eigen::MatrixXd h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = hamiltonian_element(dets[static_cast<std::size_t>(i)], dets[static_cast<std::size_t>(j)], ints);
            h(i, j) = v;
            h(j, i) = v;
        }
    return h;
}

/// Every eigenpair of the explicit H, with spin labels.
[[nodiscard]] inline std::vector<CiState> dense_spectrum(const CasSpace& space, const IntegralSet& ints,
                                                         std::size_t cap = default_dense_cap) {
    const Eigen::MatrixXd h = dense_hamiltonian(space, ints, cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const SpinSquaredOperator s2op(space);
    Eigen::VectorXd e = eig.eigenvalues();
    Eigen::MatrixXd v = eig.eigenvectors();
    detail::spin_adapt_clusters(s2op, e, v, 1e-9);
    return detail::package(space, s2op, nullptr, e, v);
}

/// Lowest n_roots eigenpairs of the explicit H (reference solver).
[[nodiscard]] inline std::vector<CiState> dense_solve(const CasSpace& space, const IntegralSet& ints, int n_roots,
                                                      std::size_t cap = default_dense_cap) {
    if (n_roots < 0 || static_cast<std::size_t>(n_roots) > space.size())
        throw InputError("dense_solve: n_roots exceeds the space dimension");
    auto all = dense_spectrum(space, ints, cap);
    all.resize(static_cast<std::size_t>(n_roots));
    return all;
}

/// Dense counterpart of solve_multiplicity.
[[nodiscard]] inline std::vector<CiState> dense_solve_multiplicity(const CasSpace& space, const IntegralSet& ints,
                                                                   int multiplicity, int n_roots,
                                                                   std::size_t cap = default_dense_cap) {
    std::vector<CiState> out;
    for (auto& s : dense_spectrum(space, ints, cap)) {
        if (static_cast<int>(out.size()) == n_roots) break;
        if (s.multiplicity == multiplicity) out.push_back(std::move(s));
    }
    if (static_cast<int>(out.size()) < n_roots)
        throw InputError("dense_solve: only " + std::to_string(out.size()) + " states of multiplicity " +
                         std::to_string(multiplicity) + " exist");
    return out;
}

/// Number of spin-S states available (dim of the M_S = S block minus the M_S = S+1 block).
[[nodiscard]] inline std::uint64_t states_of_spin(int n_elec, int n_orb, int multiplicity) {
    const int ms2 = multiplicity - 1;
    if (!detail::block_exists(n_elec, n_orb, ms2)) return 0;
    const auto top = cas_dimension(n_elec, n_orb, ms2);
    const auto above = detail::block_exists(n_elec, n_orb, ms2 + 2) ? cas_dimension(n_elec, n_orb, ms2 + 2) : 0;
    return top - above;
}

} // namespace casq
