// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

#include <casq/casq.hpp>

#include "oracles/fock.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace casq;

TEST(Counting, KnownActiveSpaces) {
    EXPECT_EQ(cas_dimension(9, 5, 1), 5u);
    EXPECT_EQ(cas_dimension(1, 5, 1), 5u);
    EXPECT_EQ(cas_dimension(17, 12, 1), 108900u);
    EXPECT_EQ(cas_dimension(13, 14, 1), 10306296u);
    EXPECT_EQ(cas_dimension(0, 3, 0), 1u);
    EXPECT_EQ(cas_dimension(6, 3, 0), 1u);
}

TEST(Counting, RejectsParityAndInfeasibleBlocks) {
    EXPECT_THROW((void)cas_dimension(2, 2, 1), InputError);
    EXPECT_THROW((void)cas_dimension(2, 1, 2), InputError);
    EXPECT_THROW((void)cas_dimension(5, 2, 1), InputError);
    EXPECT_THROW((void)cas_dimension(1, 0, 1), InputError);
    EXPECT_THROW((void)cas_dimension(3, 2, 5), InputError);
}

TEST(Counting, SumOverBlocksIsFullSector) {
    for (int n = 1; n <= 6; ++n)
        for (int e = 0; e <= 2 * n; ++e) {
            std::uint64_t total = 0;
            for (int ms2 = -e; ms2 <= e; ms2 += 2)
                if (detail::block_exists(e, n, ms2)) total += cas_dimension(e, n, ms2);
            EXPECT_EQ(total, binomial(2 * n, e));
        }
}

TEST(CasSpace, AddressingIsAlphaMajorAndBijective) {
    const CasSpace s(4, 5, 0);
    ASSERT_EQ(s.size(), 100u);
    std::set<std::pair<OccString, OccString>> seen;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Determinant d = s.det(k);
        EXPECT_EQ(d.n_alpha(), 2);
        EXPECT_EQ(d.n_beta(), 2);
        EXPECT_EQ(*s.alpha_index(d.alpha) * s.n_beta_strings() + *s.beta_index(d.beta), k);
        EXPECT_EQ(*s.index(d), k);
        seen.insert({d.alpha, d.beta});
    }
    EXPECT_EQ(seen.size(), s.size());
    EXPECT_FALSE(s.index(Determinant{0b111, 0b1}).has_value());
}

TEST(CasSpace, StringsAreLexicographicAndComplete) {
    const auto strs = enumerate_strings(6, 3);
    EXPECT_EQ(strs.size(), 20u);
    EXPECT_EQ(strs.front(), 0b000111u);
    for (std::size_t i = 1; i < strs.size(); ++i) EXPECT_EQ(popcount(strs[i]), 3);
    EXPECT_EQ(std::set<OccString>(strs.begin(), strs.end()).size(), strs.size());
    EXPECT_EQ(enumerate_strings(4, 0).size(), 1u);
}

TEST(Determinant, RenderingUsesSpaceSeparatedOccupations) {
    EXPECT_EQ(render(Determinant{0b0001011, 0b0101011}, 7), "2 2 0 2 0 d 0");
    EXPECT_EQ(render(Determinant{0b0001111, 0b0101011}, 7), "2 2 u 2 0 d 0");
    EXPECT_EQ(render(Determinant{}, 3), "0 0 0");
    EXPECT_EQ(render(spin_flipped(Determinant{0b0001111, 0b0101011}), 7), "2 2 d 2 0 u 0");
}

TEST(Determinant, SecondQuantizationSignsMatchBruteForce) {
    // Alpha creators precede beta creators; within a spin, ascending.
    const int n = 4;
    const CasSpace s(4, n, 0);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Determinant d = s.det(k);
        const oracle::Mask m = oracle::to_mask(d, n);
        for (Spin sp : {Spin::alpha, Spin::beta})
            for (Spin sq : {Spin::alpha, Spin::beta})
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) {
                        const auto lib = excite(d, sp, p, sq, q);
                        const auto ref = oracle::hop(m, p + (sp == Spin::beta) * n, q + (sq == Spin::beta) * n);
                        ASSERT_EQ(lib.has_value(), ref.has_value());
                        if (!lib) continue;
                        EXPECT_EQ(oracle::to_mask(lib->det, n), ref->second);
                        EXPECT_EQ(lib->sign, ref->first);
                    }
    }
}

TEST(Determinant, SingleSignAndDegree) {
    EXPECT_EQ(single_sign(0b10110, 0, 4), 1);  // two electrons between
    EXPECT_EQ(single_sign(0b10100, 1, 4), -1); // one electron between
    EXPECT_EQ(excitation_degree(Determinant{0b011, 0b1}, Determinant{0b101, 0b10}), 2);
    EXPECT_EQ(excitation_degree(Determinant{0b011, 0b1}, Determinant{0b011, 0b1}), 0);
}

TEST(StringSingles, TablesAgreeWithDirectExcitation) {
    const CasSpace s(5, 5, 1);
    for (bool alpha : {true, false}) {
        const StringSingles t = alpha ? alpha_singles(s) : beta_singles(s);
        const auto& strs = alpha ? s.alpha_strings() : s.beta_strings();
        ASSERT_EQ(t.n_strings(), strs.size());
        const int k = popcount(strs.front());
        for (std::size_t i = 0; i < strs.size(); ++i) {
            // One diagonal entry per occupied orbital, plus k (n - k) moves.
            const std::size_t count = t.offsets[i + 1] - t.offsets[i];
            EXPECT_EQ(count, static_cast<std::size_t>(k + k * (5 - k)));
            for (auto e = t.offsets[i]; e < t.offsets[i + 1]; ++e) {
                const auto& x = t.entries[e];
                const OccString src = strs[i];
                ASSERT_TRUE(occupied(src, x.q));
                const OccString dst = (src & ~(OccString{1} << x.q)) | (OccString{1} << x.p);
                EXPECT_EQ(strs[x.target], dst);
                if (x.p != x.q) EXPECT_EQ(x.sign, single_sign(src, x.p, x.q));
            }
        }
    }
}
