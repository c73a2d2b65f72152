// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file multiplet.hpp
 * @brief Spin multiplets built from top-M_S roots by repeated S- application.
 *
 * Components generated this way carry the standard Condon-Shortley relative
 * phases, S-|S,M> = sqrt(S(S+1) - M(M-1)) |S,M-1>, which the spin-orbit
 * matrix relies on.
 */

#pragma once

#include <casq/casci/density.hpp>
#include <casq/casci/hamiltonian.hpp>
#include <casq/casci/solver.hpp>
#include <casq/casci/spin.hpp>
#include <casq/core/error.hpp>
#include <casq/detspace/cas_space.hpp>
#include <casq/ingest/integrals.hpp>
#include <casq/ingest/run_config.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace casq {

/// Lazily built CAS blocks for one (n_elec, n_orb), keyed by ms2. The cache
/// is not guarded; populate it before sharing across threads.
class SpaceFamily {
public:
    SpaceFamily() = default;
    SpaceFamily(int n_elec, int n_orb) : n_elec_(n_elec), n_orb_(n_orb) {}

    [[nodiscard]] int n_elec() const noexcept { return n_elec_; }
    [[nodiscard]] int n_orb() const noexcept { return n_orb_; }

    [[nodiscard]] const CasSpace& at(int ms2) const {
        auto it = blocks_.find(ms2);
        if (it == blocks_.end()) it = blocks_.emplace(ms2, std::make_shared<CasSpace>(n_elec_, n_orb_, ms2)).first;
        return *it->second;
    }

private:
    int n_elec_ = 0;
    int n_orb_ = 0;
    mutable std::map<int, std::shared_ptr<CasSpace>> blocks_;
};

struct Multiplet {
    int spin2 = 0;                      // 2S
    double energy = 0.0;                // Hartree, top-component energy
    std::map<int, CiState> components;  // keyed by ms2 = 2 M_S

    [[nodiscard]] double spin() const noexcept { return 0.5 * spin2; }
    [[nodiscard]] int multiplicity() const noexcept { return spin2 + 1; }
    [[nodiscard]] const CiState& top() const { return components.at(spin2); }
    [[nodiscard]] const CiState& component(int ms2) const {
        const auto it = components.find(ms2);
        if (it == components.end())
            throw InputError("multiplet has no component with ms2 = " + std::to_string(ms2));
        return it->second;
    }
};

inline constexpr double default_multiplet_tol = 1e-8; // Hartree

/// Builds all 2S+1 components for each state; every state must sit at ms2 = 2S.
[[nodiscard]] inline std::vector<Multiplet> assemble_multiplets(const SpaceFamily& family, const IntegralSet& ints,
                                                                const std::vector<CiState>& top_states,
                                                                double tol = default_multiplet_tol) {
    std::map<int, std::unique_ptr<HamiltonianOperator>> hops;
    auto hop = [&](int ms2) -> const HamiltonianOperator& {
        auto& p = hops[ms2];
        if (!p) p = std::make_unique<HamiltonianOperator>(family.at(ms2), ints);
        return *p;
    };

    std::vector<Multiplet> out;
    for (const auto& st : top_states) {
        const int spin2 = st.multiplicity - 1;
        if (st.ms2 != spin2)
            throw InputError("assemble_multiplets: state with multiplicity " + std::to_string(st.multiplicity) +
                             " was not solved at its top ms2 = " + std::to_string(spin2));
        Multiplet m;
        m.spin2 = spin2;
        m.energy = st.energy;
        m.components.emplace(spin2, st);
        CiState cur = st;
        for (int ms2 = spin2 - 2; ms2 >= -spin2; ms2 -= 2) {
            const CasSpace& from = family.at(ms2 + 2);
            LadderResult lr = apply_s_minus(from, cur.coeffs);
            CiState next;
            next.coeffs = lr.vector.normalized();
            next.ms2 = ms2;
            next.multiplicity = st.multiplicity;
            next.s2_expect = st.s2_expect;
            next.energy = next.coeffs.dot(hop(ms2).apply(next.coeffs));
            if (std::abs(next.energy - st.energy) > tol)
                throw InvariantError("assemble_multiplets: component ms2 = " + std::to_string(ms2) +
                                     " has Rayleigh quotient differing by " +
                                     std::to_string(std::abs(next.energy - st.energy)) +
                                     " Hartree (root mixing between degenerate states?)");
            m.components.emplace(ms2, next);
            cur = std::move(next);
        }
        out.push_back(std::move(m));
    }
    std::stable_sort(out.begin(), out.end(), [](const Multiplet& a, const Multiplet& b) { return a.energy < b.energy; });
    return out;
}

struct MultipletSolve {
    std::vector<Multiplet> multiplets; // ascending energy
    std::vector<std::string> warnings;
};

enum class SolverKind { davidson, dense };

namespace detail {

inline std::vector<CiState> solve_top(const CasSpace& space, const IntegralSet& ints, int multiplicity, int n_roots,
                                      const DavidsonOptions& opt, SolverKind kind) {
    if (kind == SolverKind::dense) return dense_solve_multiplicity(space, ints, multiplicity, n_roots);
    return solve_multiplicity(space, ints, multiplicity, n_roots, opt);
}

} // namespace detail

/// Solves each requested multiplicity at its top M_S block and assembles
/// multiplets. Extra ms2 blocks are re-diagonalized only as a consistency check.
[[nodiscard]] inline MultipletSolve solve_multiplets(const SpaceFamily& family, const IntegralSet& ints,
                                                     const std::map<int, int>& roots_per_multiplicity,
                                                     const DavidsonOptions& opt = {},
                                                     SolverKind kind = SolverKind::davidson,
                                                     const std::vector<int>& check_ms2 = {}) {
    MultipletSolve res;
    std::vector<CiState> tops;
    for (const auto& [mult, count] : roots_per_multiplicity) {
        if (count <= 0) continue;
        const int spin2 = mult - 1;
        if (!detail::block_exists(family.n_elec(), family.n_orb(), spin2))
            throw InputError("multiplicity " + std::to_string(mult) + " is impossible for CAS(" +
                             std::to_string(family.n_elec()) + "," + std::to_string(family.n_orb()) + ")");
        const auto available = states_of_spin(family.n_elec(), family.n_orb(), mult);
        if (static_cast<std::uint64_t>(count) > available)
            throw InputError("requested " + std::to_string(count) + " roots of multiplicity " + std::to_string(mult) +
                             " but only " + std::to_string(available) + " exist");
        auto states = detail::solve_top(family.at(spin2), ints, mult, count, opt, kind);
        tops.insert(tops.end(), states.begin(), states.end());
    }
    res.multiplets = assemble_multiplets(family, ints, tops);

    for (int ms2 : check_ms2) {
        std::vector<double> expected;
        for (const auto& m : res.multiplets)
            if (m.components.count(ms2)) expected.push_back(m.energy);
        if (expected.empty() || !detail::block_exists(family.n_elec(), family.n_orb(), ms2)) continue;
        bool is_top = false;
        for (const auto& [mult, count] : roots_per_multiplicity) is_top = is_top || (count > 0 && mult - 1 == ms2);
        if (is_top) continue;
        // Independent solve of this block; lowest roots should reproduce the
        // components (unless unrequested spins intrude, which is reported).
        const auto& space = family.at(ms2);
        const int n = static_cast<int>(std::min<std::size_t>(expected.size(), space.size()));
        std::vector<CiState> direct;
        try {
            direct = kind == SolverKind::dense ? dense_solve(space, ints, n) : solve_davidson(space, ints, n, opt);
        } catch (const ConvergenceError& e) {
            res.warnings.push_back("ms2 = " + std::to_string(ms2) + " cross-check did not converge: " + e.what());
            continue;
        }
        std::sort(expected.begin(), expected.end());
        for (int k = 0; k < n; ++k) {
            const double d = std::abs(direct[static_cast<std::size_t>(k)].energy - expected[static_cast<std::size_t>(k)]);
            if (d > 1e-6) {
                res.warnings.push_back("ms2 = " + std::to_string(ms2) + " cross-check: root " + std::to_string(k) +
                                       " differs from ladder components by " + std::to_string(d) +
                                       " Hartree (other spin states lie in between)");
                break;
            }
        }
    }
    return res;
}

/// State-averaged spin-traced 1-RDM over multiplets. The spin-traced density
/// is the same for every component, so the top components are used.
[[nodiscard]] inline RdmOne one_rdm(const SpaceFamily& family, const std::vector<Multiplet>& multiplets,
                                    const std::vector<double>& weights) {
    if (multiplets.size() != weights.size() || multiplets.empty())
        throw InputError("one_rdm: need one weight per multiplet");
    const int n = family.n_orb();
    std::map<int, std::pair<std::vector<Eigen::VectorXd>, std::vector<double>>> by_block;
    double total = 0.0;
    for (std::size_t i = 0; i < multiplets.size(); ++i) {
        if (weights[i] < 0.0) throw InputError("one_rdm: negative weight");
        total += weights[i];
        auto& [vs, ws] = by_block[multiplets[i].spin2];
        vs.push_back(multiplets[i].top().coeffs);
        ws.push_back(weights[i]);
    }
    if (std::abs(total - 1.0) > 1e-10) throw InputError("one_rdm: weights must sum to 1");
    RdmOne r{Eigen::MatrixXd::Zero(n, n)};
    for (auto& [ms2, block] : by_block) {
        auto& [vs, ws] = block;
        double wsum = 0.0;
        for (double w : ws) wsum += w;
        if (wsum == 0.0) continue;
        for (double& w : ws) w /= wsum;
        r.matrix += wsum * one_rdm(family.at(ms2), vs, ws).matrix;
    }
    return r;
}

} // namespace casq
