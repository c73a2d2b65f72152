// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <casq/core/error.hpp>
#include <casq/ingest/fcidump.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace casq {

struct DavidsonOptions {
    int max_subspace = 64;
    double tol = 1e-7; // residual norm, Hartree
    int max_iter = 200;
    int guess_dim = 200;
    double level_shift = 1e-4; // Hartree
};

struct SpectrumOptions {
    double fwhm_ev = 0.1;
    double min_ev = 0.0;
    double max_ev = 6.0;
    double step_ev = 0.005;
};

struct RunConfig {
    int n_elec = 0;
    int n_orb = 0;
    std::map<int, int> roots_per_multiplicity; // 2S+1 -> root count
    std::vector<int> ms2_blocks;               // empty: top M_S of each multiplicity
    DavidsonOptions davidson;
    bool soc_enabled = true;
    std::vector<int> qdpt_multiplicities; // multiplicities entering QDPT; empty: all solved
    SpectrumOptions spectrum;

    [[nodiscard]] int total_roots() const {
        int n = 0;
        for (const auto& [mult, count] : roots_per_multiplicity) n += count;
        return n;
    }

    void validate() const {
        if (n_orb < 1 || n_orb > 64) throw InputError("config: cas_norb must be in [1, 64]");
        if (n_elec < 0 || n_elec > 2 * n_orb) throw InputError("config: cas_nelec must be in [0, 2*cas_norb]");
        for (const auto& [mult, count] : roots_per_multiplicity) {
            if (mult < 1) throw InputError("config: multiplicity must be >= 1");
            if (count < 0) throw InputError("config: root counts must be >= 0");
            if ((mult - 1) % 2 != n_elec % 2)
                throw InputError("config: multiplicity " + std::to_string(mult) + " incompatible with " +
                                 std::to_string(n_elec) + " electrons");
        }
        for (int mult : qdpt_multiplicities)
            if (!roots_per_multiplicity.count(mult))
                throw InputError("config: qdpt_multiplicities lists " + std::to_string(mult) + " but no roots are requested for it");
        if (!(davidson.tol > 0.0)) throw InputError("config: davidson_tol must be > 0");
        if (davidson.max_iter < 1) throw InputError("config: davidson_max_iter must be >= 1");
        if (davidson.guess_dim < total_roots()) throw InputError("config: guess_dim must be >= total roots");
        if (!(spectrum.fwhm_ev > 0.0)) throw InputError("config: spectrum_fwhm_ev must be > 0");
        if (!(spectrum.step_ev > 0.0) || spectrum.max_ev <= spectrum.min_ev)
            throw InputError("config: spectrum grid is empty");
    }
};

namespace detail {

inline std::vector<int> parse_int_list(const std::string& value, const std::string& where) {
    std::string s = value;
    for (char& c : s)
        if (c == ',' || c == ';') c = ' ';
    std::istringstream is(s);
    std::vector<int> out;
    for (std::string tok; is >> tok;) {
        const auto v = parse_int(tok);
        if (!v) throw InputError("config: bad integer '" + tok + "'" + where);
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

inline bool parse_bool(std::string v, const std::string& where) {
    v = upper(v);
    if (v == "1" || v == "TRUE" || v == "YES" || v == "ON") return true;
    if (v == "0" || v == "FALSE" || v == "NO" || v == "OFF") return false;
    throw InputError("config: bad boolean '" + v + "'" + where);
}

} // namespace detail

/// Applies key=value lines on top of `base`. Unknown keys are errors.
[[nodiscard]] inline RunConfig parse_run_config(const std::string& text, RunConfig base = {}) {
    RunConfig cfg = std::move(base);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string{};
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = " on line " + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("config: expected key=value" + where);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto as_int = [&]() {
            const auto v = detail::parse_int(value);
            if (!v) throw InputError("config: bad integer for " + key + where);
            return static_cast<int>(*v);
        };
        auto as_real = [&]() {
            const auto v = detail::parse_real(value);
            if (!v) throw InputError("config: bad number for " + key + where);
            return *v;
        };
        if (key == "cas_nelec") cfg.n_elec = as_int();
        else if (key == "cas_norb") cfg.n_orb = as_int();
        else if (key == "ms2_blocks") cfg.ms2_blocks = detail::parse_int_list(value, where);
        else if (key.rfind("roots_mult_", 0) == 0) {
            const auto mult = detail::parse_int(key.substr(11));
            if (!mult) throw InputError("config: bad multiplicity in key " + key + where);
            cfg.roots_per_multiplicity[static_cast<int>(*mult)] = as_int();
        } else if (key == "davidson_tol") cfg.davidson.tol = as_real();
        else if (key == "davidson_max_subspace") cfg.davidson.max_subspace = as_int();
        else if (key == "davidson_max_iter") cfg.davidson.max_iter = as_int();
        else if (key == "guess_dim") cfg.davidson.guess_dim = as_int();
        else if (key == "soc") cfg.soc_enabled = detail::parse_bool(value, where);
        else if (key == "qdpt_multiplicities") cfg.qdpt_multiplicities = detail::parse_int_list(value, where);
        else if (key == "spectrum_fwhm_ev") cfg.spectrum.fwhm_ev = as_real();
        else if (key == "spectrum_min_ev") cfg.spectrum.min_ev = as_real();
        else if (key == "spectrum_max_ev") cfg.spectrum.max_ev = as_real();
        else if (key == "spectrum_step_ev") cfg.spectrum.step_ev = as_real();
        else throw InputError("config: unknown key '" + key + "'" + where);
    }
    return cfg;
}

} // namespace casq
