// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

#include <casq/casq.hpp>

#include "oracles/dshell.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace casq;

namespace {

template <typename F>
std::string error_of(F&& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Fcidump, ParsesHeaderAndAllIndexPatterns) {
    const std::string text = "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n&END\n"
                             "  0.5 1 1 1 1\n 0.25D0 2 1 1 1\n 0.125 2 2 1 1\n 0.7 2 2 2 2\n"
                             " -1.0 1 1 0 0\n 0.1 2 1 0 0\n -0.5 2 2 0 0\n -0.9 1 0 0 0\n 3.5 0 0 0 0\n";
    const auto d = parse_fcidump(text);
    EXPECT_EQ(d.n_elec, 2);
    EXPECT_EQ(d.ms2, 0);
    EXPECT_EQ(d.integrals.n_orb(), 2);
    EXPECT_DOUBLE_EQ(d.integrals.core_energy, 3.5);
    EXPECT_DOUBLE_EQ(d.integrals.h(0, 1), 0.1);
    EXPECT_DOUBLE_EQ(d.integrals.h(1, 0), 0.1);
    EXPECT_DOUBLE_EQ(d.integrals.eri(1, 0, 0, 0), 0.25);
    EXPECT_DOUBLE_EQ(d.integrals.eri(0, 0, 0, 1), 0.25);
    EXPECT_DOUBLE_EQ(d.integrals.eri(0, 0, 1, 1), 0.125);
    EXPECT_EQ(d.integrals.symmetry_residual(), 0.0);
}

TEST(Fcidump, SlashTerminatedHeaderWorks) {
    const auto d = parse_fcidump("&FCI NORB=1,NELEC=1,MS2=1/\n 0.3 1 1 1 1\n");
    EXPECT_EQ(d.ms2, 1);
    EXPECT_DOUBLE_EQ(d.integrals.eri(0, 0, 0, 0), 0.3);
}

TEST(Fcidump, ErrorsCarryLineNumbers) {
    const std::string head = "&FCI NORB=2,NELEC=2/\n";
    EXPECT_NE(error_of([&] { (void)parse_fcidump(head + "0.1 1 1 1\n"); }).find("line 2"), std::string::npos);
    EXPECT_NE(error_of([&] { (void)parse_fcidump(head + "0.1 1 1 0 0\nabc 1 1 1 1\n"); }).find("line 3"),
              std::string::npos);
    EXPECT_NE(error_of([&] { (void)parse_fcidump(head + "0.1 3 1 0 0\n"); }).find("out of range"), std::string::npos);
    EXPECT_NE(error_of([&] { (void)parse_fcidump(head + "0.1 0 1 0 0\n"); }).find("index pattern"), std::string::npos);
    EXPECT_FALSE(error_of([] { (void)parse_fcidump("0.1 1 1 1 1\n"); }).empty());
    EXPECT_FALSE(error_of([] { (void)parse_fcidump("&FCI NELEC=2/\n"); }).empty());
    EXPECT_FALSE(error_of([] { (void)parse_fcidump("&FCI NORB=2,NELEC=2\n 0.1 1 1 1 1\n"); }).empty());
}

TEST(Fcidump, RoundTripIsValueExact) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        IntegralSet ints = random_integrals(5, seed);
        ints.core_energy = -12.345678901234567;
        const auto back = parse_fcidump(write_fcidump(ints, 4, 2));
        EXPECT_EQ(back.n_elec, 4);
        EXPECT_EQ(back.ms2, 2);
        EXPECT_EQ(back.integrals.core_energy, ints.core_energy);
        EXPECT_EQ((back.integrals.h() - ints.h()).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(back.integrals.eri_data(), ints.eri_data());
    }
}

TEST(Integrals, RotationPreservesSymmetryAndIsInvertible) {
    const IntegralSet ints = random_integrals(4, 11);
    EXPECT_LT(ints.symmetry_residual(), 1e-14);
    const Eigen::MatrixXd u = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Random(4, 4)).householderQ();
    const IntegralSet r = ints.rotated(u);
    EXPECT_LT(r.symmetry_residual(), 1e-13);
    const IntegralSet back = r.rotated(u.transpose());
    for (std::size_t i = 0; i < ints.eri_data().size(); ++i)
        EXPECT_NEAR(back.eri_data()[i], ints.eri_data()[i], 1e-12);
}

TEST(PropertyFile, RoundTripAndSymmetryChecks) {
    const PropertyIntegrals p = random_property_integrals(3, 5);
    const PropertyIntegrals q = parse_property_integrals(write_property_integrals(p), 3);
    for (int k = 0; k < 3; ++k) {
        EXPECT_EQ((q.angmom[k] - p.angmom[k]).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ((q.soc[k] - p.soc[k]).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ((q.dipole[k] - p.dipole[k]).cwiseAbs().maxCoeff(), 0.0);
    }
    const std::string sym = "SOC_Z\n0 1\n1 0\n";
    EXPECT_NE(error_of([&] { (void)parse_property_integrals(sym, 2); }).find("antisymmetry"), std::string::npos);
    EXPECT_NE(error_of([] { (void)parse_property_integrals("DIP_X\n0 1 2\n", 2); }).find("3 values"), std::string::npos);
    EXPECT_NE(error_of([] { (void)parse_property_integrals("1 2\n", 1); }).find("before any section"),
              std::string::npos);
    // Missing sections default to zero.
    const auto only = parse_property_integrals("ANGMOM_Z\n0 -2\n2 0\n", 2);
    EXPECT_DOUBLE_EQ(only.angmom[2](0, 1), -2.0);
    EXPECT_FALSE(only.has_dipoles());
}

TEST(RunConfig, ParsesKeysAndRejectsUnknown) {
    const auto cfg = parse_run_config("cas_nelec = 3 # comment\ncas_norb=4\nroots_mult_2 = 3\nroots_mult_4=1\n"
                                      "ms2_blocks = 1, -1\ndavidson_tol = 1e-9\nsoc = off\nspectrum_fwhm_ev=0.2\n");
    EXPECT_EQ(cfg.n_elec, 3);
    EXPECT_EQ(cfg.n_orb, 4);
    EXPECT_EQ(cfg.roots_per_multiplicity.at(2), 3);
    EXPECT_EQ(cfg.total_roots(), 4);
    EXPECT_EQ(cfg.ms2_blocks, (std::vector<int>{1, -1}));
    EXPECT_DOUBLE_EQ(cfg.davidson.tol, 1e-9);
    EXPECT_FALSE(cfg.soc_enabled);
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_NE(error_of([] { (void)parse_run_config("bogus = 1\n"); }).find("line 1"), std::string::npos);
    EXPECT_NE(error_of([] { (void)parse_run_config("\ncas_norb = x\n"); }).find("line 2"), std::string::npos);
    auto bad = cfg;
    bad.roots_per_multiplicity[3] = 1;
    EXPECT_THROW(bad.validate(), InputError);
    auto sel = parse_run_config("qdpt_multiplicities = 2\n", cfg);
    EXPECT_EQ(sel.qdpt_multiplicities, std::vector<int>{2});
    EXPECT_NO_THROW(sel.validate());
    sel.qdpt_multiplicities = {6};
    EXPECT_THROW(sel.validate(), InputError);
}

TEST(LigandField, CoulombTensorMatchesSphericalQuadrature) {
    const double b = 0.11, c = 0.43;
    const IntegralSet g = lf::coulomb_tensor_ev(b, c);
    // Slater integrals with A = 0.
    const auto ref = oracle::coulomb_quadrature({7.0 * c / 5.0, 49.0 * (b + c / 7.0), 441.0 * c / 35.0});
    for (int p = 0; p < 5; ++p)
        for (int q = 0; q < 5; ++q)
            for (int r = 0; r < 5; ++r)
                for (int s = 0; s < 5; ++s)
                    EXPECT_NEAR(g.eri(p, q, r, s), ref[static_cast<std::size_t>(((p * 5 + q) * 5 + r) * 5 + s)], 1e-12)
                        << p << q << r << s;
}

TEST(LigandField, RacahLimitsGiveFreeIonTermSplitting) {
    // d2 free ion: 3F at A - 8B, 3P at A + 7B, so E(3P) - E(3F) = 15B.
    LigandFieldModel m;
    m.racah_b = 0.1;
    m.racah_c = 0.4;
    m.n_elec = 2;
    const auto sys = build_ligand_field_model(m);
    SpaceFamily fam(2, 5);
    const auto st = dense_spectrum(fam.at(2), sys.integrals);
    // 3F: 7 states, then 3P: 3 states.
    EXPECT_NEAR((st[7].energy - st[0].energy) * units::hartree_to_ev, 15.0 * 0.1, 1e-10);
    EXPECT_NEAR(st[6].energy, st[0].energy, 1e-12);
}

TEST(LigandField, AngularMomentumMatchesFiniteDifference) {
    const auto l = lf::angular_momentum();
    const auto ref = oracle::angular_momentum_fd();
    for (int k = 0; k < 3; ++k) EXPECT_LT((l[k] - ref[k]).cwiseAbs().maxCoeff(), 1e-7) << "component " << k;
}

TEST(LigandField, AngularMomentumAlgebra) {
    const auto a = lf::angular_momentum();
    std::array<Eigen::MatrixXcd, 3> l;
    for (int k = 0; k < 3; ++k) l[k] = std::complex<double>(0, 1) * a[k].cast<std::complex<double>>();
    const Eigen::MatrixXcd l2 = l[0] * l[0] + l[1] * l[1] + l[2] * l[2];
    EXPECT_LT((l2 - 6.0 * Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((l[0] * l[1] - l[1] * l[0] - std::complex<double>(0, 1) * l[2]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LigandField, PresetsResolveAndValidate) {
    EXPECT_EQ(lf::preset("d1").n_elec, 1);
    EXPECT_EQ(lf::preset("d9-planar").n_elec, 9);
    EXPECT_THROW((void)lf::preset("d5"), InputError);
    LigandFieldModel m;
    m.n_elec = 10;
    EXPECT_THROW(m.validate(), InputError);
    m.n_elec = 2;
    m.v_lf(0, 1) = 1.0;
    EXPECT_THROW(m.validate(), InputError);
    const auto sys = build_ligand_field_model(lf::preset("d1"));
    EXPECT_EQ(sys.orbitals.labels.size(), 5u);
    EXPECT_NEAR(sys.properties.soc[2](3, 4), -2.0 * 250.0 * units::cm_to_hartree, 1e-15);
}
