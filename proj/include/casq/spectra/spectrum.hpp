// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectrum.hpp
 * @brief Transition dipoles, oscillator strengths and Gaussian-broadened
 *        absorption curves.
 */

#pragma once

#include <casq/casci/density.hpp>
#include <casq/casci/multiplet.hpp>
#include <casq/casci/solver.hpp>
#include <casq/core/error.hpp>
#include <casq/core/units.hpp>
#include <casq/ingest/property_integrals.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace casq {

struct TransitionDipole {
    Eigen::Vector3d mu = Eigen::Vector3d::Zero(); // atomic units
    bool spin_forbidden = false;
};

/// <0|D_K|N> for two states of one block; zero and flagged across multiplicities.
[[nodiscard]] inline TransitionDipole transition_dipole(const CasSpace& space, const CiState& s0, const CiState& sn,
                                                        const PropertyIntegrals& prop) {
    TransitionDipole t;
    if (s0.multiplicity != sn.multiplicity || s0.ms2 != sn.ms2) {
        t.spin_forbidden = true;
        return t;
    }
    if (s0.ms2 != space.ms2()) throw InputError("transition_dipole: states do not belong to this block");
    const Eigen::MatrixXd d = transition_density(space, s0.coeffs, sn.coeffs).total();
    for (int k = 0; k < 3; ++k) t.mu[k] = (prop.dipole[static_cast<std::size_t>(k)].array() * d.array()).sum();
    return t;
}

/// f = (2/3) dE |mu|^2 in atomic units.
[[nodiscard]] inline double oscillator_strength(double delta_e_hartree, const Eigen::Vector3d& mu) {
    if (delta_e_hartree < 0.0) throw InputError("oscillator_strength: negative excitation energy");
    return 2.0 / 3.0 * delta_e_hartree * mu.squaredNorm();
}

struct SpectrumLine {
    double delta_e = 0.0; // eV
    double f_osc = 0.0;
    std::size_t from = 0;
    std::size_t to = 0;
    std::string label;
    bool spin_forbidden = false;
};

inline constexpr double soret_threshold = 0.5;
inline constexpr const char* soret_tag = "Soret-like (heuristic)";

/// Lines from the lowest multiplet to every other one (top components).
[[nodiscard]] inline std::vector<SpectrumLine> absorption_lines(const SpaceFamily& family,
                                                                const std::vector<Multiplet>& multiplets,
                                                                const PropertyIntegrals& prop) {
    std::vector<SpectrumLine> lines;
    if (multiplets.empty()) return lines;
    const Multiplet& g = multiplets.front();
    for (std::size_t i = 1; i < multiplets.size(); ++i) {
        const Multiplet& m = multiplets[i];
        SpectrumLine line;
        line.from = 0;
        line.to = i;
        const double de = std::max(0.0, m.energy - g.energy);
        line.delta_e = de * units::hartree_to_ev;
        if (m.spin2 != g.spin2) {
            line.spin_forbidden = true;
            line.label = "spin-forbidden";
        } else {
            const auto t = transition_dipole(family.at(g.spin2), g.top(), m.top(), prop);
            line.f_osc = oscillator_strength(de, t.mu);
            if (line.f_osc >= soret_threshold) line.label = soret_tag;
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

struct EnergyGrid {
    double min_ev = 0.0;
    double max_ev = 6.0;
    double step_ev = 0.005;

    [[nodiscard]] std::vector<double> points() const {
        if (!(step_ev > 0.0) || !(max_ev >= min_ev)) return {};
        const auto n = static_cast<std::size_t>(std::floor((max_ev - min_ev) / step_ev + 1e-9)) + 1;
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = min_ev + static_cast<double>(i) * step_ev;
        return x;
    }
};

inline constexpr double fwhm_to_sigma = 2.0 * 1.1774100225154747; // 2 sqrt(2 ln 2)

/// Sum of unit-area Gaussians scaled by f (intensity per eV).
[[nodiscard]] inline std::vector<double> broaden(const std::vector<SpectrumLine>& lines, double fwhm_ev,
                                                 const std::vector<double>& grid) {
    if (grid.empty()) throw InputError("broaden: empty energy grid");
    if (!(fwhm_ev > 0.0)) throw InputError("broaden: fwhm must be positive");
    const double sigma = fwhm_ev / fwhm_to_sigma;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> y(grid.size(), 0.0);
    for (const auto& l : lines) {
        if (l.f_osc == 0.0) continue;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double u = (grid[i] - l.delta_e) / sigma;
            y[i] += l.f_osc * norm * std::exp(-0.5 * u * u);
        }
    }
    return y;
}

/// True when every line lies at least 3 sigma inside the grid.
[[nodiscard]] inline bool grid_covers(const std::vector<SpectrumLine>& lines, double fwhm_ev, const EnergyGrid& grid) {
    const double s3 = 3.0 * fwhm_ev / fwhm_to_sigma;
    for (const auto& l : lines)
        if (l.f_osc > 0.0 && (l.delta_e - s3 < grid.min_ev || l.delta_e + s3 > grid.max_ev)) return false;
    return true;
}

[[nodiscard]] inline std::string spectrum_csv(const std::vector<double>& grid, const std::vector<double>& intensity) {
    std::ostringstream os;
    os << "energy_eV,intensity\n";
    char buf[64];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f,%.10e\n", grid[i], intensity[i]);
        os << buf;
    }
    return os.str();
}

/// Reads "energy_eV f_osc [label]" lines; '#' starts a comment.
[[nodiscard]] inline std::vector<SpectrumLine> parse_lines(const std::string& text) {
    std::vector<SpectrumLine> out;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (const auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
        std::istringstream ls(raw);
        SpectrumLine l;
        if (!(ls >> l.delta_e)) {
            std::string rest;
            if (std::istringstream(raw) >> rest) throw InputError("line file: cannot parse line " + std::to_string(lineno));
            continue;
        }
        if (!(ls >> l.f_osc)) throw InputError("line file: missing oscillator strength on line " + std::to_string(lineno));
        if (l.f_osc < 0.0 || l.delta_e < 0.0)
            throw InputError("line file: negative value on line " + std::to_string(lineno));
        std::getline(ls >> std::ws, l.label);
        l.to = out.size() + 1;
        out.push_back(std::move(l));
    }
    return out;
}

} // namespace casq
