// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file determinant.hpp
 * @brief Alpha/beta occupation bitstrings and fermionic sign rules.
 *
 * Orbital p is bit p. A determinant is the ordered product
 *   a+_{a1,alpha} ... a+_{ak,alpha} a+_{b1,beta} ... a+_{bl,beta} |vac>
 * with ascending orbital indices, all alpha creators to the left of all beta
 * creators. Every sign in the library derives from this ordering.
 */

#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace casq {

enum class Spin : std::uint8_t { alpha = 0, beta = 1 };

using OccString = std::uint64_t;

[[nodiscard]] constexpr OccString bits_below(int p) noexcept {
    return p <= 0 ? 0 : (p >= 64 ? ~OccString{0} : ((OccString{1} << p) - 1));
}

[[nodiscard]] constexpr bool occupied(OccString s, int p) noexcept { return (s >> p) & 1u; }

[[nodiscard]] constexpr int popcount(OccString s) noexcept { return std::popcount(s); }

struct Determinant {
    OccString alpha = 0;
    OccString beta = 0;

    [[nodiscard]] constexpr OccString string(Spin s) const noexcept { return s == Spin::alpha ? alpha : beta; }
    [[nodiscard]] constexpr int n_alpha() const noexcept { return popcount(alpha); }
    [[nodiscard]] constexpr int n_beta() const noexcept { return popcount(beta); }
    [[nodiscard]] constexpr int ms2() const noexcept { return n_alpha() - n_beta(); }

    friend constexpr auto operator<=>(const Determinant&, const Determinant&) = default;
};

struct DeterminantHash {
    std::size_t operator()(const Determinant& d) const noexcept {
        return std::hash<std::uint64_t>{}(d.alpha * 0x9E3779B97F4A7C15ull ^ d.beta);
    }
};

struct SignedDeterminant {
    Determinant det;
    int sign = 1;
};

/// Number of occupied spin orbitals preceding (spin, p) in the canonical ordering.
[[nodiscard]] constexpr int creators_before(const Determinant& d, Spin s, int p) noexcept {
    if (s == Spin::alpha) return popcount(d.alpha & bits_below(p));
    return popcount(d.alpha) + popcount(d.beta & bits_below(p));
}

[[nodiscard]] constexpr std::optional<SignedDeterminant> annihilate(const Determinant& d, Spin s, int p) noexcept {
    if (!occupied(d.string(s), p)) return std::nullopt;
    Determinant out = d;
    (s == Spin::alpha ? out.alpha : out.beta) &= ~(OccString{1} << p);
    return SignedDeterminant{out, (creators_before(d, s, p) & 1) ? -1 : 1};
}

[[nodiscard]] constexpr std::optional<SignedDeterminant> create(const Determinant& d, Spin s, int p) noexcept {
    if (occupied(d.string(s), p)) return std::nullopt;
    Determinant out = d;
    (s == Spin::alpha ? out.alpha : out.beta) |= (OccString{1} << p);
    return SignedDeterminant{out, (creators_before(d, s, p) & 1) ? -1 : 1};
}

/// a+_{p,sp} a_{q,sq} applied to d.
[[nodiscard]] constexpr std::optional<SignedDeterminant> excite(const Determinant& d, Spin sp, int p, Spin sq,
                                                                int q) noexcept {
    const auto a = annihilate(d, sq, q);
    if (!a) return std::nullopt;
    const auto c = create(a->det, sp, p);
    if (!c) return std::nullopt;
    return SignedDeterminant{c->det, a->sign * c->sign};
}

/// Sign of a+_p a_q within a single occupation string (p != q): parity of the
/// electrons strictly between p and q.
[[nodiscard]] constexpr int single_sign(OccString s, int p, int q) noexcept {
    const int lo = p < q ? p : q, hi = p < q ? q : p;
    const OccString between = bits_below(hi) & ~bits_below(lo + 1);
    return (popcount(s & between) & 1) ? -1 : 1;
}

[[nodiscard]] constexpr int excitation_degree(const Determinant& a, const Determinant& b) noexcept {
    return (popcount(a.alpha ^ b.alpha) + popcount(a.beta ^ b.beta)) / 2;
}

/// Per-orbital "2", "u", "d", "0" separated by spaces.
[[nodiscard]] inline std::string render(const Determinant& d, int n_orb) {
    std::string out;
    out.reserve(static_cast<std::size_t>(2 * n_orb));
    for (int p = 0; p < n_orb; ++p) {
        if (p) out += ' ';
        const bool a = occupied(d.alpha, p), b = occupied(d.beta, p);
        out += a && b ? '2' : a ? 'u' : b ? 'd' : '0';
    }
    return out;
}

/// Determinant with every open-shell spin flipped.
[[nodiscard]] constexpr Determinant spin_flipped(const Determinant& d) noexcept { return {d.beta, d.alpha}; }

struct SingleExcitation {
    Determinant det;
    int sign = 1;
    int from = 0;
    int to = 0;
    Spin spin = Spin::alpha;
};

/// Every single excitation of d within n_orb orbitals.
[[nodiscard]] inline std::vector<SingleExcitation> connected_singles(const Determinant& d, int n_orb) {
    std::vector<SingleExcitation> out;
    for (Spin s : {Spin::alpha, Spin::beta}) {
        const OccString str = d.string(s);
        for (int from = 0; from < n_orb; ++from) {
            if (!occupied(str, from)) continue;
            for (int to = 0; to < n_orb; ++to) {
                if (occupied(str, to)) continue;
                const OccString moved = (str & ~(OccString{1} << from)) | (OccString{1} << to);
                Determinant e = d;
                (s == Spin::alpha ? e.alpha : e.beta) = moved;
                out.push_back({e, single_sign(str, to, from), from, to, s});
            }
        }
    }
    return out;
}

} // namespace casq
