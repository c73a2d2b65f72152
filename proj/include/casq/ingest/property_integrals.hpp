// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file property_integrals.hpp
 * @brief One-electron angular momentum, spin-orbit and dipole matrices.
 *
 * Angular momentum and SOC operators are purely imaginary over real orbitals.
 * We store the real antisymmetric matrix A with <p|op|q> = i * A(p,q).
 * Dipole matrices are real symmetric.
 *
 * File format: sections introduced by a name token (ANGMOM_X, ANGMOM_Y,
 * ANGMOM_Z, SOC_X, SOC_Y, SOC_Z, DIP_X, DIP_Y, DIP_Z), each followed by
 * n_orb^2 reals in row-major order. Lines starting with '#' are comments.
 * Absent sections are zero.
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/ingest/fcidump.hpp>

#include <Eigen/Dense>

#include <array>
#include <map>
#include <sstream>
#include <string>

namespace casq {

struct PropertyIntegrals {
    std::array<Eigen::MatrixXd, 3> angmom; // imaginary parts of <p|l_K|q>
    std::array<Eigen::MatrixXd, 3> soc;    // imaginary parts of <p|z_K|q>, Hartree
    std::array<Eigen::MatrixXd, 3> dipole; // atomic units

    [[nodiscard]] static PropertyIntegrals zero(int n_orb) {
        PropertyIntegrals p;
        for (int k = 0; k < 3; ++k) {
            p.angmom[k] = Eigen::MatrixXd::Zero(n_orb, n_orb);
            p.soc[k] = Eigen::MatrixXd::Zero(n_orb, n_orb);
            p.dipole[k] = Eigen::MatrixXd::Zero(n_orb, n_orb);
        }
        return p;
    }

    [[nodiscard]] int n_orb() const noexcept { return static_cast<int>(angmom[0].rows()); }

    [[nodiscard]] bool has_dipoles() const {
        for (const auto& d : dipole)
            if (d.size() > 0 && d.cwiseAbs().maxCoeff() > 0.0) return true;
        return false;
    }

    /// Same operators in the rotated orbital basis phi'_a = sum_p U(p,a) phi_p.
    [[nodiscard]] PropertyIntegrals rotated(const Eigen::MatrixXd& u) const {
        PropertyIntegrals out;
        for (int k = 0; k < 3; ++k) {
            out.angmom[k] = u.transpose() * angmom[k] * u;
            out.soc[k] = u.transpose() * soc[k] * u;
            out.dipole[k] = u.transpose() * dipole[k] * u;
        }
        return out;
    }
};

namespace detail {

inline constexpr double property_symmetry_threshold = 1e-8;

// Replaces m by its (anti)symmetric part; throws if the correction is larger
// than the tolerance.
inline void enforce_symmetry(Eigen::MatrixXd& m, bool antisymmetric, const std::string& name) {
    const Eigen::MatrixXd target = antisymmetric ? Eigen::MatrixXd(0.5 * (m - m.transpose()))
                                                 : Eigen::MatrixXd(0.5 * (m + m.transpose()));
    const double correction = (target - m).cwiseAbs().maxCoeff();
    if (correction > property_symmetry_threshold) {
        std::ostringstream os;
        os << "property file: section " << name << " violates " << (antisymmetric ? "antisymmetry" : "symmetry")
           << " by " << correction;
        throw InputError(os.str());
    }
    m = target;
}

} // namespace detail

[[nodiscard]] inline PropertyIntegrals parse_property_integrals(const std::string& text, int n_orb) {
    if (n_orb < 1) throw InputError("property file: n_orb must be >= 1");
    static const std::map<std::string, std::pair<int, int>> sections = {
        {"ANGMOM_X", {0, 0}}, {"ANGMOM_Y", {0, 1}}, {"ANGMOM_Z", {0, 2}}, //
        {"SOC_X", {1, 0}},    {"SOC_Y", {1, 1}},    {"SOC_Z", {1, 2}},    //
        {"DIP_X", {2, 0}},    {"DIP_Y", {2, 1}},    {"DIP_Z", {2, 2}},
    };

    PropertyIntegrals out = PropertyIntegrals::zero(n_orb);
    auto slot = [&out](std::pair<int, int> where) -> Eigen::MatrixXd& {
        if (where.first == 0) return out.angmom[where.second];
        if (where.first == 1) return out.soc[where.second];
        return out.dipole[where.second];
    };

    std::string current;
    int section_line = 0;
    std::vector<double> values;
    auto flush = [&]() {
        if (current.empty()) return;
        const auto expected = static_cast<std::size_t>(n_orb) * n_orb;
        if (values.size() != expected)
            throw InputError("property file: section " + current + " (line " + std::to_string(section_line) +
                             ") has " + std::to_string(values.size()) + " values, expected " +
                             std::to_string(expected));
        Eigen::MatrixXd& m = slot(sections.at(current));
        for (int p = 0; p < n_orb; ++p)
            for (int q = 0; q < n_orb; ++q) m(p, q) = values[static_cast<std::size_t>(p) * n_orb + q];
        detail::enforce_symmetry(m, sections.at(current).first != 2, current);
        values.clear();
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        for (std::string tok; ls >> tok;) {
            const std::string up = detail::upper(tok);
            if (sections.count(up)) {
                flush();
                current = up;
                section_line = line_no;
                continue;
            }
            const auto v = detail::parse_real(tok);
            if (!v)
                throw InputError("property file: unparsable token '" + tok + "' on line " + std::to_string(line_no));
            if (current.empty())
                throw InputError("property file: value before any section header on line " +
                                 std::to_string(line_no));
            values.push_back(*v);
        }
    }
    flush();
    return out;
}

/// Serializes all nine sections at round-trip precision.
[[nodiscard]] inline std::string write_property_integrals(const PropertyIntegrals& prop) {
    std::ostringstream os;
    os.precision(17);
    const char* names[3][3] = {{"ANGMOM_X", "ANGMOM_Y", "ANGMOM_Z"}, {"SOC_X", "SOC_Y", "SOC_Z"}, {"DIP_X", "DIP_Y", "DIP_Z"}};
    const std::array<const std::array<Eigen::MatrixXd, 3>*, 3> groups = {&prop.angmom, &prop.soc, &prop.dipole};
    for (int g = 0; g < 3; ++g)
        for (int k = 0; k < 3; ++k) {
            os << names[g][k] << '\n';
            const auto& m = (*groups[g])[k];
            for (int p = 0; p < m.rows(); ++p) {
                for (int q = 0; q < m.cols(); ++q) os << (q ? " " : "") << m(p, q);
                os << '\n';
            }
        }
    return os.str();
}

} // namespace casq
