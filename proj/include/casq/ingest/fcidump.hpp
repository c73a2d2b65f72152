// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fcidump.hpp
 * @brief FCIDUMP reader and writer.
 *
 * Header: "&FCI NORB=n,NELEC=k,MS2=m/" (may span lines, closed by "/" or
 * "&END"). Body lines are "value i j k l" with 1-based orbital indices:
 *   i j k l  (all > 0)  two-electron integral (ij|kl)
 *   i j 0 0             one-electron integral h_ij
 *   0 0 0 0             core energy
 *   i 0 0 0             orbital energy (ignored)
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/ingest/integrals.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace casq {

struct FcidumpData {
    OrbitalSpace orbitals;
    IntegralSet integrals;
    int n_elec = 0;
    int ms2 = 0;
};

namespace detail {

inline std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

inline std::optional<double> parse_real(std::string token) {
    std::replace(token.begin(), token.end(), 'D', 'E');
    std::replace(token.begin(), token.end(), 'd', 'e');
    const char* first = token.data();
    if (!token.empty() && token.front() == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return v;
}

inline std::optional<long> parse_int(std::string_view token) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return v;
}

inline std::optional<long> header_int(const std::string& header, const std::string& key) {
    const std::regex re("(^|[^A-Z0-9_])" + key + R"(\s*=\s*(-?\d+))");
    std::smatch m;
    if (!std::regex_search(header, m, re)) return std::nullopt;
    return std::stol(m[2].str());
}

} // namespace detail

[[nodiscard]] inline FcidumpData parse_fcidump(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    std::string header;
    bool in_header = false, header_done = false;
    while (!header_done && std::getline(in, line)) {
        ++line_no;
        const std::string up = detail::upper(line);
        if (!in_header) {
            const auto pos = up.find("&FCI");
            if (pos == std::string::npos) {
                if (up.find_first_not_of(" \t\r") == std::string::npos) continue;
                throw InputError("FCIDUMP: missing &FCI header (line " + std::to_string(line_no) + ")");
            }
            in_header = true;
            header += up.substr(pos + 4);
        } else {
            header += " " + up;
        }
        if (header.find("&END") != std::string::npos || header.find('/') != std::string::npos) header_done = true;
    }
    if (!header_done) throw InputError("FCIDUMP: missing or unterminated &FCI header");

    const auto norb = detail::header_int(header, "NORB");
    const auto nelec = detail::header_int(header, "NELEC");
    if (!norb || *norb < 1) throw InputError("FCIDUMP: header lacks a valid NORB");
    if (!nelec || *nelec < 0) throw InputError("FCIDUMP: header lacks a valid NELEC");
    const long n = *norb;

    FcidumpData out;
    out.n_elec = static_cast<int>(*nelec);
    out.ms2 = static_cast<int>(detail::header_int(header, "MS2").value_or(0));
    out.orbitals = OrbitalSpace::numbered(static_cast<int>(n));
    out.integrals = IntegralSet(static_cast<int>(n));

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string where = " on line " + std::to_string(line_no);
        if (tok.size() != 5) throw InputError("FCIDUMP: unparsable line" + where + ": '" + line + "'");
        const auto value = detail::parse_real(tok[0]);
        if (!value) throw InputError("FCIDUMP: bad value '" + tok[0] + "'" + where);
        long idx[4];
        for (int k = 0; k < 4; ++k) {
            const auto v = detail::parse_int(tok[k + 1]);
            if (!v) throw InputError("FCIDUMP: bad index '" + tok[k + 1] + "'" + where);
            if (*v < 0 || *v > n)
                throw InputError("FCIDUMP: index " + std::to_string(*v) + " out of range [0, " + std::to_string(n) +
                                 "]" + where);
            idx[k] = *v;
        }
        const auto [i, j, k, l] = idx;
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            out.integrals.core_energy = *value;
        } else if (i > 0 && j > 0 && k > 0 && l > 0) {
            out.integrals.set_eri(static_cast<int>(i - 1), static_cast<int>(j - 1), static_cast<int>(k - 1),
                                  static_cast<int>(l - 1), *value);
        } else if (i > 0 && j > 0 && k == 0 && l == 0) {
            out.integrals.set_h(static_cast<int>(i - 1), static_cast<int>(j - 1), *value);
        } else if (i > 0 && j == 0 && k == 0 && l == 0) {
            // orbital energy, not used
        } else {
            throw InputError("FCIDUMP: unparsable index pattern" + where + ": '" + line + "'");
        }
    }
    out.orbitals.core_energy = out.integrals.core_energy;
    return out;
}

/// Writes the symmetry-unique nonzero integrals at round-trip precision.
[[nodiscard]] inline std::string write_fcidump(const IntegralSet& ints, int n_elec, int ms2) {
    const int n = ints.n_orb();
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "&FCI NORB=%d,NELEC=%d,MS2=%d/\n", n, n_elec, ms2);
    out += buf;
    auto emit = [&](double v, int i, int j, int k, int l) {
        std::snprintf(buf, sizeof buf, "%.17g %d %d %d %d\n", v, i, j, k, l);
        out += buf;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l <= k; ++l) {
                    if (i * n + j < k * n + l) continue;
                    const double v = ints.eri(i, j, k, l);
                    if (v != 0.0) emit(v, i + 1, j + 1, k + 1, l + 1);
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            if (ints.h(i, j) != 0.0) emit(ints.h(i, j), i + 1, j + 1, 0, 0);
    emit(ints.core_energy, 0, 0, 0, 0);
    return out;
}

} // namespace casq
