// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cas_space.hpp
 * @brief CAS(n_elec, n_orb) determinant basis at fixed M_S.
 *
 * Alpha and beta strings are each enumerated in lexicographic order of their
 * sorted occupied-orbital lists. Determinant k sits at
 *   k = i_alpha * N_beta + i_beta,
 * so a CI vector is an N_alpha x N_beta row-major array and sigma builders can
 * work string by string.
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/detspace/determinant.hpp>

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace casq {

[[nodiscard]] constexpr std::uint64_t binomial(int n, int k) noexcept {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

struct ElectronCounts {
    int n_alpha = 0;
    int n_beta = 0;
};

/// Validates a CAS request and returns its alpha/beta electron counts.
[[nodiscard]] inline ElectronCounts cas_electron_counts(int n_elec, int n_orb, int ms2) {
    if (n_orb < 1 || n_orb > 64) throw InputError("CAS: n_orb must be in [1, 64]");
    if (n_elec < 0 || n_elec > 2 * n_orb)
        throw InputError("CAS: n_elec=" + std::to_string(n_elec) + " must be in [0, 2*n_orb]");
    if (((n_elec - ms2) % 2 + 2) % 2 != 0)
        throw InputError("CAS: parity mismatch between n_elec=" + std::to_string(n_elec) +
                         " and ms2=" + std::to_string(ms2));
    const int na = (n_elec + ms2) / 2, nb = (n_elec - ms2) / 2;
    if (std::abs(ms2) > n_elec || na > n_orb || nb > n_orb)
        throw InputError("CAS: ms2=" + std::to_string(ms2) + " infeasible for CAS(" + std::to_string(n_elec) + "," +
                         std::to_string(n_orb) + ")");
    return {na, nb};
}

/// Determinant count without enumerating anything.
[[nodiscard]] inline std::uint64_t cas_dimension(int n_elec, int n_orb, int ms2) {
    const auto [na, nb] = cas_electron_counts(n_elec, n_orb, ms2);
    return binomial(n_orb, na) * binomial(n_orb, nb);
}

/// All k-electron occupation strings over n orbitals, lexicographic.
[[nodiscard]] inline std::vector<OccString> enumerate_strings(int n, int k) {
    if (binomial(n, k) > static_cast<std::uint64_t>(std::numeric_limits<std::uint32_t>::max()))
        throw InputError("CAS: string space too large to enumerate");
    std::vector<OccString> out;
    out.reserve(binomial(n, k));
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        OccString s = 0;
        for (int i : idx) s |= OccString{1} << i;
        out.push_back(s);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

class CasSpace {
public:
    CasSpace() = default;

    CasSpace(int n_elec, int n_orb, int ms2) : n_elec_(n_elec), n_orb_(n_orb), ms2_(ms2) {
        const auto counts = cas_electron_counts(n_elec, n_orb, ms2);
        n_alpha_ = counts.n_alpha;
        n_beta_ = counts.n_beta;
        alpha_ = enumerate_strings(n_orb, n_alpha_);
        beta_ = enumerate_strings(n_orb, n_beta_);
        for (std::uint32_t i = 0; i < alpha_.size(); ++i) alpha_index_.emplace(alpha_[i], i);
        for (std::uint32_t i = 0; i < beta_.size(); ++i) beta_index_.emplace(beta_[i], i);
    }

    [[nodiscard]] int n_elec() const noexcept { return n_elec_; }
    [[nodiscard]] int n_orb() const noexcept { return n_orb_; }
    [[nodiscard]] int ms2() const noexcept { return ms2_; }
    [[nodiscard]] int n_alpha() const noexcept { return n_alpha_; }
    [[nodiscard]] int n_beta() const noexcept { return n_beta_; }

    [[nodiscard]] std::size_t size() const noexcept { return alpha_.size() * beta_.size(); }
    [[nodiscard]] std::size_t n_alpha_strings() const noexcept { return alpha_.size(); }
    [[nodiscard]] std::size_t n_beta_strings() const noexcept { return beta_.size(); }

    [[nodiscard]] const std::vector<OccString>& alpha_strings() const noexcept { return alpha_; }
    [[nodiscard]] const std::vector<OccString>& beta_strings() const noexcept { return beta_; }

    [[nodiscard]] Determinant det(std::size_t k) const noexcept {
        return {alpha_[k / beta_.size()], beta_[k % beta_.size()]};
    }

    [[nodiscard]] std::vector<Determinant> dets() const {
        std::vector<Determinant> out;
        out.reserve(size());
        for (auto a : alpha_)
            for (auto b : beta_) out.push_back({a, b});
        return out;
    }

    [[nodiscard]] std::optional<std::uint32_t> alpha_index(OccString s) const {
        const auto it = alpha_index_.find(s);
        if (it == alpha_index_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::optional<std::uint32_t> beta_index(OccString s) const {
        const auto it = beta_index_.find(s);
        if (it == beta_index_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::optional<std::size_t> index(const Determinant& d) const {
        const auto a = alpha_index(d.alpha);
        const auto b = beta_index(d.beta);
        if (!a || !b) return std::nullopt;
        return static_cast<std::size_t>(*a) * beta_.size() + *b;
    }

    [[nodiscard]] bool same_shape(const CasSpace& o) const noexcept {
        return n_elec_ == o.n_elec_ && n_orb_ == o.n_orb_ && ms2_ == o.ms2_;
    }

private:
    int n_elec_ = 0;
    int n_orb_ = 0;
    int ms2_ = 0;
    int n_alpha_ = 0;
    int n_beta_ = 0;
    std::vector<OccString> alpha_;
    std::vector<OccString> beta_;
    std::unordered_map<OccString, std::uint32_t> alpha_index_;
    std::unordered_map<OccString, std::uint32_t> beta_index_;
};

[[nodiscard]] inline CasSpace enumerate_cas(int n_elec, int n_orb, int ms2) { return CasSpace(n_elec, n_orb, ms2); }

/// Single replacements E_pq = a+_p a_q (same spin, p == q included) for every string of a set.
struct StringSingles {
    struct Entry {
        std::uint32_t target; // index of a+_p a_q |source>
        std::int8_t sign;
        std::uint8_t p; // created
        std::uint8_t q; // annihilated
    };

    std::vector<std::uint32_t> offsets; // size n_strings + 1
    std::vector<Entry> entries;

    [[nodiscard]] std::size_t n_strings() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }

    template <class Fn>
    void for_each(std::size_t source, Fn&& fn) const {
        for (auto k = offsets[source]; k < offsets[source + 1]; ++k) fn(entries[k]);
    }

    static StringSingles build(const std::vector<OccString>& strings,
                               const std::unordered_map<OccString, std::uint32_t>& index, int n_orb) {
        StringSingles t;
        t.offsets.reserve(strings.size() + 1);
        t.offsets.push_back(0);
        for (OccString s : strings) {
            for (int q = 0; q < n_orb; ++q) {
                if (!occupied(s, q)) continue;
                for (int p = 0; p < n_orb; ++p) {
                    if (p != q && occupied(s, p)) continue;
                    const OccString u = (s & ~(OccString{1} << q)) | (OccString{1} << p);
                    const int sign = p == q ? 1 : single_sign(s, p, q);
                    t.entries.push_back({index.at(u), static_cast<std::int8_t>(sign), static_cast<std::uint8_t>(p),
                                         static_cast<std::uint8_t>(q)});
                }
            }
            t.offsets.push_back(static_cast<std::uint32_t>(t.entries.size()));
        }
        return t;
    }
};

namespace detail {
inline std::unordered_map<OccString, std::uint32_t> string_index(const std::vector<OccString>& strings) {
    std::unordered_map<OccString, std::uint32_t> m;
    for (std::uint32_t i = 0; i < strings.size(); ++i) m.emplace(strings[i], i);
    return m;
}
} // namespace detail

[[nodiscard]] inline StringSingles alpha_singles(const CasSpace& space) {
    return StringSingles::build(space.alpha_strings(), detail::string_index(space.alpha_strings()), space.n_orb());
}

[[nodiscard]] inline StringSingles beta_singles(const CasSpace& space) {
    return StringSingles::build(space.beta_strings(), detail::string_index(space.beta_strings()), space.n_orb());
}

} // namespace casq
