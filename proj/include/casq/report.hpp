// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file report.hpp
 * @brief Human-readable and JSON reports for states, g-tensors and spectra.
 *
 * Reports carry no timings or host data so that repeated runs are
 * byte-identical; those go to the run manifest.
 */

#pragma once

#include <casq/casci/decompose.hpp>
#include <casq/casci/density.hpp>
#include <casq/casci/multiplet.hpp>
#include <casq/core/units.hpp>
#include <casq/soc/gap_report.hpp>
#include <casq/soc/gtensor.hpp>
#include <casq/spectra/spectrum.hpp>

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace casq {

/// FNV-1a 64-bit digest, hex encoded.
[[nodiscard]] inline std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline std::string roots_summary(const std::vector<Multiplet>& ms) {
    std::map<int, int> count;
    for (const auto& m : ms) ++count[m.multiplicity()];
    std::string s;
    for (const auto& [mult, n] : count) {
        if (!s.empty()) s += " + ";
        s += std::to_string(n) + " " + multiplicity_name(mult) + (n == 1 ? "" : "s");
    }
    return s;
}

struct StateReportOptions {
    double decomposition_threshold = 5.0; // percent
    std::vector<std::string> orbital_labels;
};

[[nodiscard]] inline std::string state_report_text(const SpaceFamily& family, const std::vector<Multiplet>& ms,
                                                   const StateReportOptions& opt = {}) {
    std::ostringstream os;
    os << "# CASCI states for CAS(" << family.n_elec() << "," << family.n_orb() << "): " << roots_summary(ms) << "\n";
    if (!opt.orbital_labels.empty()) {
        os << "# orbital order:";
        for (const auto& l : opt.orbital_labels) os << " " << l;
        os << "\n";
    }
    os << "# determinant weights: " << decomposition_convention << ", shown above "
       << fmt("%g", opt.decomposition_threshold) << "%\n";
    if (ms.empty()) return os.str();
    const double e0 = ms.front().energy;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto& m = ms[i];
        const auto& top = m.top();
        os << "\nstate " << i << "  " << multiplicity_name(m.multiplicity()) << "  E = " << fmt("%.10f", m.energy)
           << " Eh  dE = " << fmt("%.4f", (m.energy - e0) * units::hartree_to_ev) << " eV  "
           << format_cm((m.energy - e0) * units::hartree_to_cm) << " cm^-1  <S^2> = " << fmt("%.6f", top.s2_expect)
           << "\n";
        for (const auto& l : decompose(family.at(top.ms2), top.coeffs, opt.decomposition_threshold))
            os << "  " << l.format() << "\n";
    }
    return os.str();
}

[[nodiscard]] inline nlohmann::json state_report_json(const SpaceFamily& family, const std::vector<Multiplet>& ms,
                                                      const StateReportOptions& opt = {}) {
    nlohmann::json j;
    j["n_elec"] = family.n_elec();
    j["n_orb"] = family.n_orb();
    j["orbital_labels"] = opt.orbital_labels;
    j["weight_convention"] = decomposition_convention;
    j["decomposition_threshold_percent"] = opt.decomposition_threshold;
    j["states"] = nlohmann::json::array();
    const double e0 = ms.empty() ? 0.0 : ms.front().energy;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto& m = ms[i];
        const auto& top = m.top();
        nlohmann::json s;
        s["index"] = i;
        s["multiplicity"] = m.multiplicity();
        s["energy_hartree"] = m.energy;
        s["excitation_ev"] = (m.energy - e0) * units::hartree_to_ev;
        s["excitation_cm"] = (m.energy - e0) * units::hartree_to_cm;
        s["s2"] = top.s2_expect;
        s["components_ms2"] = nlohmann::json::array();
        for (const auto& [ms2, c] : m.components) s["components_ms2"].push_back(ms2);
        s["decomposition"] = nlohmann::json::array();
        for (const auto& l : decompose(family.at(top.ms2), top.coeffs, opt.decomposition_threshold))
            s["decomposition"].push_back({{"determinant", l.determinant}, {"weight_percent", l.weight_percent}, {"line", l.format()}});
        j["states"].push_back(std::move(s));
    }
    return j;
}

[[nodiscard]] inline std::string occupations_text(const std::vector<double>& occ) {
    std::string s = "# natural occupations (ground state):";
    for (double x : occ) s += " " + fmt("%.4f", x);
    return s + "\n";
}

// ---------------------------------------------------------------------------

struct GTableRow {
    std::string method;
    std::string roots;
    std::optional<GTensor> g;
    std::string note;
};

[[nodiscard]] inline std::string g_table_text(const std::vector<GTableRow>& rows) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %-32s %7s %7s %7s\n", "method", "roots", "g_x", "g_y", "g_z");
    os << buf;
    for (const auto& r : rows) {
        if (r.g)
            std::snprintf(buf, sizeof buf, "%-8s %-32s %7.3f %7.3f %7.3f\n", r.method.c_str(), r.roots.c_str(),
                          r.g->principal[0], r.g->principal[1], r.g->principal[2]);
        else
            std::snprintf(buf, sizeof buf, "%-8s %-32s %7s %7s %7s\n", r.method.c_str(), r.roots.c_str(), "n/a", "n/a",
                          "n/a");
        os << buf;
        if (!r.note.empty()) os << "  note: " << r.note << "\n";
    }
    return os.str();
}

[[nodiscard]] inline nlohmann::json g_table_json(const std::vector<GTableRow>& rows) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json e{{"method", r.method}, {"roots", r.roots}};
        if (r.g) {
            e["g"] = {r.g->principal[0], r.g->principal[1], r.g->principal[2]};
            nlohmann::json m = nlohmann::json::array();
            for (int k = 0; k < 3; ++k) m.push_back({r.g->matrix(k, 0), r.g->matrix(k, 1), r.g->matrix(k, 2)});
            e["matrix"] = m;
            nlohmann::json ax = nlohmann::json::array();
            for (int k = 0; k < 3; ++k) ax.push_back({r.g->axes(0, k), r.g->axes(1, k), r.g->axes(2, k)});
            e["axes"] = ax;
        } else {
            e["g"] = nullptr;
        }
        if (!r.note.empty()) e["note"] = r.note;
        j.push_back(std::move(e));
    }
    return j;
}

// ---------------------------------------------------------------------------

[[nodiscard]] inline std::string line_table_text(const std::vector<SpectrumLine>& lines,
                                                 const std::vector<std::string>& weight_strings = {}) {
    std::ostringstream os;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-6s %-28s %10s %12s  %s\n", "state", "weight", "dE_eV", "f_osc", "band / exp.");
    os << buf;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        const std::string w = i < weight_strings.size() ? weight_strings[i] : "";
        const std::string band = l.label.empty() ? "-" : l.label;
        std::snprintf(buf, sizeof buf, "%-6zu %-28s %10.4f %12.6f  %s / -\n", l.to, w.c_str(), l.delta_e, l.f_osc,
                      band.c_str());
        os << buf;
    }
    return os.str();
}

[[nodiscard]] inline nlohmann::json line_table_json(const std::vector<SpectrumLine>& lines,
                                                    const std::vector<std::string>& weight_strings = {}) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        j.push_back({{"from", l.from},
                     {"to", l.to},
                     {"weight", i < weight_strings.size() ? weight_strings[i] : ""},
                     {"delta_e_ev", l.delta_e},
                     {"f_osc", l.f_osc},
                     {"label", l.label},
                     {"spin_forbidden", l.spin_forbidden},
                     {"experiment", nullptr}});
    }
    return j;
}

} // namespace casq
