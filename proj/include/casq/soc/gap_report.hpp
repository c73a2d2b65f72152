// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file gap_report.hpp
 * @brief Multiplet energy table and doublet/quartet gaps in cm^-1.
 */

#pragma once

#include <casq/casci/multiplet.hpp>
#include <casq/core/units.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace casq {

struct GapRow {
    std::size_t multiplet = 0;
    int multiplicity = 1;
    double energy_cm = 0.0; // relative to the lowest multiplet
};

struct GapPair {
    std::size_t lower = 0;
    std::size_t upper = 0;
    double gap_cm = 0.0; // E_upper - E_lower
};

struct QuartetFlag {
    std::size_t quartet = 0;
    std::size_t doublet = 0; // nearest doublet
    double gap_cm = 0.0;     // E_doublet - E_quartet
    bool quartet_below = false;
};

struct GapReport {
    std::vector<GapRow> rows;
    std::vector<GapPair> gaps; // every pair, lower index first
    std::vector<QuartetFlag> flags;

    [[nodiscard]] bool any_quartet_below() const {
        for (const auto& f : flags)
            if (f.quartet_below) return true;
        return false;
    }
};

inline std::string format_cm(double v) {
    char buf[48];
    // Avoid printing "-0.00".
    std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
    return buf;
}

inline std::string multiplicity_name(int mult) {
    switch (mult) {
    case 1: return "singlet";
    case 2: return "doublet";
    case 3: return "triplet";
    case 4: return "quartet";
    case 5: return "quintet";
    case 6: return "sextet";
    default: return "multiplicity " + std::to_string(mult);
    }
}

[[nodiscard]] inline GapReport gap_report(const std::vector<Multiplet>& multiplets) {
    GapReport r;
    if (multiplets.empty()) return r;
    double e0 = multiplets.front().energy;
    for (const auto& m : multiplets) e0 = std::min(e0, m.energy);
    for (std::size_t i = 0; i < multiplets.size(); ++i)
        r.rows.push_back({i, multiplets[i].multiplicity(), (multiplets[i].energy - e0) * units::hartree_to_cm});
    for (std::size_t i = 0; i < multiplets.size(); ++i)
        for (std::size_t j = i + 1; j < multiplets.size(); ++j)
            r.gaps.push_back({i, j, (multiplets[j].energy - multiplets[i].energy) * units::hartree_to_cm});
    for (std::size_t q = 0; q < multiplets.size(); ++q) {
        if (multiplets[q].multiplicity() != 4) continue;
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_d = 0;
        for (std::size_t d = 0; d < multiplets.size(); ++d) {
            if (multiplets[d].multiplicity() != 2) continue;
            const double gap = std::abs(multiplets[d].energy - multiplets[q].energy);
            if (gap < best) {
                best = gap;
                best_d = d;
            }
        }
        if (!std::isfinite(best)) continue;
        const double g = (multiplets[best_d].energy - multiplets[q].energy) * units::hartree_to_cm;
        r.flags.push_back({q, best_d, g, g > 0.0});
    }
    return r;
}

[[nodiscard]] inline std::string to_text(const GapReport& r) {
    std::ostringstream os;
    os << "# multiplet energies (cm^-1, relative to the lowest)\n";
    for (const auto& row : r.rows)
        os << "  M" << row.multiplet << "  " << multiplicity_name(row.multiplicity) << "  " << format_cm(row.energy_cm)
           << "\n";
    os << "# consecutive gaps (cm^-1)\n";
    for (const auto& g : r.gaps)
        if (g.upper == g.lower + 1)
            os << "  M" << g.lower << " -> M" << g.upper << "  " << format_cm(g.gap_cm) << "\n";
    if (!r.flags.empty()) {
        os << "# quartet vs nearest doublet (cm^-1)\n";
        for (const auto& f : r.flags)
            os << "  M" << f.quartet << " (quartet) vs M" << f.doublet << " (doublet)  " << format_cm(f.gap_cm)
               << (f.quartet_below ? "  quartet below doublet" : "") << "\n";
    }
    return os.str();
}

[[nodiscard]] inline nlohmann::json to_json(const GapReport& r) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows)
        j["rows"].push_back({{"multiplet", row.multiplet}, {"multiplicity", row.multiplicity}, {"energy_cm", row.energy_cm}});
    j["gaps"] = nlohmann::json::array();
    for (const auto& g : r.gaps) j["gaps"].push_back({{"lower", g.lower}, {"upper", g.upper}, {"gap_cm", g.gap_cm}});
    j["quartet_flags"] = nlohmann::json::array();
    for (const auto& f : r.flags)
        j["quartet_flags"].push_back({{"quartet", f.quartet},
                                      {"doublet", f.doublet},
                                      {"gap_cm", f.gap_cm},
                                      {"quartet_below_doublet", f.quartet_below}});
    return j;
}

} // namespace casq
