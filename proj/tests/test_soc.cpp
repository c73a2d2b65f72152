// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

#include <casq/casq.hpp>

#include "oracles/dshell.hpp"
#include "oracles/fock.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace casq;

namespace {

struct Solved {
    SpaceFamily family;
    std::vector<Multiplet> multiplets;
};

Solved solve_all(int ne, int no, const IntegralSet& ints) {
    Solved s{SpaceFamily(ne, no), {}};
    std::map<int, int> roots;
    for (int mult = ne % 2 + 1; mult <= ne + 1; mult += 2)
        if (const auto n = states_of_spin(ne, no, mult); n > 0) roots[mult] = static_cast<int>(n);
    s.multiplets = solve_multiplets(s.family, ints, roots, {}, SolverKind::dense).multiplets;
    return s;
}

Solved solve_lf(const LigandFieldSystem& sys) {
    Solved s{SpaceFamily(sys.config.n_elec, 5), {}};
    s.multiplets = solve_multiplets(s.family, sys.integrals, sys.config.roots_per_multiplicity, sys.config.davidson,
                                    SolverKind::dense)
                       .multiplets;
    return s;
}

// Columns: basis entries embedded in the full N-electron determinant sector.
Eigen::MatrixXcd embed(const Solved& s, const SocStateBasis& basis, const oracle::Basis& full) {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(full.size()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto& e = basis.entries[j];
        const CasSpace& sp = s.family.at(e.ms2);
        const auto& c = s.multiplets[e.multiplet].component(e.ms2).coeffs;
        for (std::size_t k = 0; k < sp.size(); ++k)
            v(static_cast<Eigen::Index>(full.index.at(oracle::to_mask(sp.det(k), sp.n_orb()))), static_cast<Eigen::Index>(j)) =
                c[static_cast<Eigen::Index>(k)];
    }
    return v;
}

Eigen::Matrix3d rotation(double a, double b, double c) {
    return (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(c, Eigen::Vector3d::UnitZ()))
        .toRotationMatrix();
}

// Dt(a, p) = int d_a(u) d_p(R u) du, so that d_p o R = sum_a Dt(a, p) d_a.
Eigen::MatrixXd d_rotation(const Eigen::Matrix3d& r) {
    const auto rule = oracle::sphere_rule();
    Eigen::MatrixXd dt = Eigen::MatrixXd::Zero(5, 5);
    for (std::size_t i = 0; i < rule.r.size(); ++i) {
        const Eigen::Vector3d u = rule.r[i], ru = r * u;
        for (int a = 0; a < 5; ++a)
            for (int p = 0; p < 5; ++p)
                dt(a, p) += rule.w[i] * oracle::real_d(a, u.x(), u.y(), u.z()) * oracle::real_d(p, ru.x(), ru.y(), ru.z());
    }
    return dt;
}

PropertyIntegrals props_for(int no, std::uint64_t seed, double scale) { return random_property_integrals(no, seed, scale); }

LigandFieldSystem d1_model(double zeta_cm, double d1_ev, double d2_ev) {
    LigandFieldModel m = lf::preset_d1_tetragonal();
    m.v_lf.diagonal() << 4.5, d2_ev, d2_ev, d1_ev, 0.0;
    m.zeta = zeta_cm;
    return build_ligand_field_model(m);
}

} // namespace

TEST(SocMatrix, ElementsMatchFullSpaceOperator) {
    const int ne = 3, no = 4;
    const IntegralSet ints = random_integrals(no, 5);
    const PropertyIntegrals prop = props_for(no, 6, 0.05);
    const Solved s = solve_all(ne, no, ints);
    const auto basis = SocStateBasis::from_multiplets(s.multiplets);
    ASSERT_EQ(basis.size(), binomial(2 * no, ne));
    const auto full = oracle::all_with(ne, no);
    const Eigen::MatrixXcd v = embed(s, basis, full);
    const Eigen::MatrixXcd hso = oracle::one_body(full, full, oracle::soc_element(prop));
    const Eigen::MatrixXcd ref = v.adjoint() * hso * v;
    EXPECT_LT((soc_matrix(basis, s.multiplets, s.family, prop) - ref).cwiseAbs().maxCoeff(), 1e-10);

    const auto z = zeeman_matrices(basis, s.multiplets, s.family, prop, units::g_electron);
    for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXcd op = oracle::one_body(full, full, oracle::orbital_element(prop, k)) +
                                    units::g_electron * oracle::one_body(full, full, oracle::spin_element(no, k));
        EXPECT_LT((z[static_cast<std::size_t>(k)] - v.adjoint() * op * v).cwiseAbs().maxCoeff(), 1e-10) << k;
    }
}

TEST(Qdpt, CompleteBasisReproducesFullSpinOrbitCi) {
    const int ne = 3, no = 4;
    const IntegralSet ints = random_integrals(no, 8);
    const PropertyIntegrals prop = props_for(no, 9, 0.05);
    const Solved s = solve_all(ne, no, ints);
    const auto basis = SocStateBasis::from_multiplets(s.multiplets);
    const auto u = time_reversal_matrix(basis, s.multiplets, s.family);
    const auto so = qdpt(basis.energies(s.multiplets), soc_matrix(basis, s.multiplets, s.family, prop), u, true);

    const auto full = oracle::all_with(ne, no);
    Eigen::MatrixXcd h = oracle::hamiltonian(full, ints, ints.core_energy).cast<std::complex<double>>();
    h += oracle::one_body(full, full, oracle::soc_element(prop));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    ASSERT_EQ(so.energies.size(), es.eigenvalues().size());
    EXPECT_LT((so.energies - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Qdpt, KramersPairsForRandomSoc) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int no = 3 + static_cast<int>(seed % 2);
        const IntegralSet ints = random_integrals(no, 300 + seed);
        const PropertyIntegrals prop = props_for(no, 400 + seed, 0.02);
        const Solved s = solve_all(3, no, ints);
        const auto basis = SocStateBasis::from_multiplets(s.multiplets);
        const auto u = time_reversal_matrix(basis, s.multiplets, s.family);
        EXPECT_LT((u * u + Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-10);
        const auto so = qdpt(basis.energies(s.multiplets), soc_matrix(basis, s.multiplets, s.family, prop), u, true);
        ASSERT_EQ(so.kramers_pairs.size() * 2, basis.size());
        for (Eigen::Index i = 0; i + 1 < so.energies.size(); i += 2)
            EXPECT_LE(so.energies[i + 1] - so.energies[i], kramers_degeneracy_tol);
        for (const auto& [a, b] : so.kramers_pairs) {
            const Eigen::VectorXcd ta = apply_time_reversal(u, so.vectors.col(a));
            EXPECT_NEAR(std::abs(so.vectors.col(b).dot(ta)), 1.0, 1e-8);
            EXPECT_LT(std::abs(so.vectors.col(a).dot(ta)), 1e-8);
        }
    }
}

TEST(Qdpt, RejectsNonHermitianInput) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = 1e-3;
    EXPECT_THROW((void)qdpt(Eigen::VectorXd::Zero(2), m), InvariantError);
    EXPECT_THROW((void)qdpt(Eigen::VectorXd::Zero(3), Eigen::MatrixXcd::Zero(2, 2)), InputError);
}

TEST(Qdpt, FreeIonDShellMatchesLsOracle) {
    const double zeta_cm = 500.0;
    LigandFieldModel m;
    m.zeta = zeta_cm;
    m.n_elec = 1;
    const auto sys = build_ligand_field_model(m);
    const Solved s = solve_lf(sys);
    const auto basis = SocStateBasis::from_multiplets(s.multiplets);
    const auto so = qdpt(basis.energies(s.multiplets), soc_matrix(basis, s.multiplets, s.family, sys.properties));
    const double zeta = zeta_cm * units::cm_to_hartree;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::ls_complex(zeta));
    EXPECT_LT((so.energies - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(so.energies[0], -1.5 * zeta, 1e-12);
    EXPECT_NEAR(so.energies[9], zeta, 1e-12);
}

TEST(Qdpt, T2gManifoldSplitsLikeNegativeP) {
    // Strong octahedral field: t2g behaves as l = 1 with l_eff = -l, so a
    // quartet sits at -zeta/2 and a doublet at +zeta up to O(zeta^2 / Delta).
    const double zeta_cm = 300.0;
    LigandFieldModel m;
    m.v_lf.diagonal() << 100.0, 0.0, 0.0, 100.0, 0.0;
    m.zeta = zeta_cm;
    m.n_elec = 1;
    const auto sys = build_ligand_field_model(m);
    const Solved s = solve_lf(sys);
    const auto basis = SocStateBasis::from_multiplets(s.multiplets);
    const auto so = qdpt(basis.energies(s.multiplets), soc_matrix(basis, s.multiplets, s.family, sys.properties));
    const Eigen::VectorXd cm = (so.energies.array() - s.multiplets.front().energy) * units::hartree_to_cm;
    const double second_order = 2.0 * zeta_cm * zeta_cm / (100.0 * units::hartree_to_cm / units::hartree_to_ev);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(cm[i], -0.5 * zeta_cm, second_order);
    for (int i = 4; i < 6; ++i) EXPECT_NEAR(cm[i], zeta_cm, second_order);
}

TEST(GTensor, FreeElectronLimit) {
    const auto sys = d1_model(0.0, 2.8, 2.0);
    const Solved s = solve_lf(sys);
    const auto eha = g_tensor_from_multiplets(s.family, s.multiplets, sys.properties);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(eha.g.principal[k], units::g_electron, 1e-9);
    const auto sos = g_tensor_sos(s.family, s.multiplets.front(),
                                  std::vector<Multiplet>(s.multiplets.begin() + 1, s.multiplets.end()), sys.properties);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(sos.principal[k], units::g_electron, 1e-12);
}

TEST(GTensor, PresetOrderings) {
    for (const char* name : {"d1", "d9"}) {
        const auto sys = build_ligand_field_model(lf::preset(name));
        const Solved s = solve_lf(sys);
        const auto g = g_tensor_from_multiplets(s.family, s.multiplets, sys.properties).g.principal;
        EXPECT_NEAR(g[0], g[1], 1e-8) << name;
        if (std::string(name) == "d1") {
            EXPECT_LT(g[2], g[0]);
            EXPECT_LT(g[0], units::g_electron);
        } else {
            EXPECT_GT(g[2], g[0]);
            EXPECT_GT(g[0], units::g_electron);
        }
    }
}

TEST(GTensor, AnalyticSmallSocLimitForTetragonalD1) {
    const double d1 = 2.8, d2 = 2.0, zeta_cm = 10.0;
    const auto sys = d1_model(zeta_cm, d1, d2);
    const Solved s = solve_lf(sys);
    const auto g = g_tensor_from_multiplets(s.family, s.multiplets, sys.properties).g.principal;
    const double x1 = zeta_cm / (d1 * units::hartree_to_cm / units::hartree_to_ev);
    const double x2 = zeta_cm / (d2 * units::hartree_to_cm / units::hartree_to_ev);
    EXPECT_NEAR((g[2] - units::g_electron) / (-8.0 * x1), 1.0, 1e-2);
    EXPECT_NEAR((g[0] - units::g_electron) / (-2.0 * x2), 1.0, 1e-2);
}

TEST(GTensor, SumOverStatesTracksEffectiveHamiltonian) {
    const auto sys = build_ligand_field_model(lf::preset("d1"));
    const Solved s = solve_lf(sys);
    const auto eha = g_tensor_from_multiplets(s.family, s.multiplets, sys.properties).g;
    const auto sos = g_tensor_sos(s.family, s.multiplets.front(),
                                  std::vector<Multiplet>(s.multiplets.begin() + 1, s.multiplets.end()), sys.properties);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(eha.principal[k], sos.principal[k], 5e-3);
}

TEST(GTensor, SumOverStatesWithinMilliUnitsForWeakSoc) {
    const double d2 = 2.0;
    const double zeta_cm = 1e-2 * d2 * units::hartree_to_cm / units::hartree_to_ev;
    const auto sys = d1_model(zeta_cm, 2.8, d2);
    const Solved s = solve_lf(sys);
    const auto eha = g_tensor_from_multiplets(s.family, s.multiplets, sys.properties).g;
    const auto sos = g_tensor_sos(s.family, s.multiplets.front(),
                                  std::vector<Multiplet>(s.multiplets.begin() + 1, s.multiplets.end()), sys.properties);
    EXPECT_LE((eha.matrix - sos.matrix).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(GTensor, CovariantUnderRotationOfTheLigandField) {
    const auto sys = build_ligand_field_model(lf::preset("d1"));
    const Solved s = solve_lf(sys);
    const auto g0 = g_tensor_from_multiplets(s.family, s.multiplets, sys.properties).g;
    const Eigen::Matrix3d r = rotation(0.3, 0.7, -0.4);
    const Eigen::MatrixXd dt = d_rotation(r);
    ASSERT_LT((dt.transpose() * dt - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
    // The Coulomb tensor of a full shell is rotation invariant.
    const IntegralSet g_rot = sys.integrals.rotated(dt);
    for (std::size_t i = 0; i < g_rot.eri_data().size(); ++i)
        ASSERT_NEAR(g_rot.eri_data()[i], sys.integrals.eri_data()[i], 1e-12);
    const IntegralSet rotated = sys.integrals.rotated(dt);
    Solved s2{SpaceFamily(1, 5), {}};
    s2.multiplets = solve_multiplets(s2.family, rotated, sys.config.roots_per_multiplicity, {}, SolverKind::dense).multiplets;
    const auto g1 = g_tensor_from_multiplets(s2.family, s2.multiplets, sys.properties).g;
    const Eigen::Matrix3d big0 = g0.matrix * g0.matrix.transpose();
    const Eigen::Matrix3d big1 = g1.matrix * g1.matrix.transpose();
    EXPECT_LT((big1 - r * big0 * r.transpose()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(GTensor, InvariantUnderOrbitalGauge) {
    const auto sys = build_ligand_field_model(lf::preset("d9"));
    const Solved s = solve_lf(sys);
    const auto g0 = g_tensor_from_multiplets(s.family, s.multiplets, sys.properties).g;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd a(5, 5);
    for (int i = 0; i < 25; ++i) a(i / 5, i % 5) = nd(rng);
    const Eigen::MatrixXd u = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
    Solved s2{SpaceFamily(9, 5), {}};
    s2.multiplets = solve_multiplets(s2.family, sys.integrals.rotated(u), sys.config.roots_per_multiplicity, {},
                                     SolverKind::dense)
                        .multiplets;
    const auto g1 = g_tensor_from_multiplets(s2.family, s2.multiplets, sys.properties.rotated(u)).g;
    EXPECT_LT((g1.principal - g0.principal).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((g1.matrix * g1.matrix.transpose() - g0.matrix * g0.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(GTensor, InputGuards) {
    const IntegralSet ints = random_integrals(3, 2);
    const Solved even = solve_all(2, 3, ints);
    const auto prop = props_for(3, 1, 0.01);
    EXPECT_THROW((void)g_tensor_from_multiplets(even.family, even.multiplets, prop), InputError);
    EXPECT_THROW((void)g_tensor_sos(even.family, even.multiplets.front(), {}, prop), InputError);
    // Degenerate ground manifold: two d orbitals at the bottom.
    LigandFieldModel m;
    m.v_lf.diagonal() << 1.0, 0.0, 0.0, 1.0, 2.0;
    m.zeta = 100.0;
    const auto sys = build_ligand_field_model(m);
    const Solved s = solve_lf(sys);
    EXPECT_THROW((void)g_tensor_sos(s.family, s.multiplets[0], {s.multiplets[1]}, sys.properties), InputError);
    const auto basis = SocStateBasis::from_multiplets(s.multiplets);
    const auto u = time_reversal_matrix(basis, s.multiplets, s.family);
    const auto z = zeeman_matrices(basis, s.multiplets, s.family, sys.properties, units::g_electron);
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    a[0] = 1.0;
    EXPECT_THROW((void)g_tensor_eha(a, a, z, u), InputError);
}

TEST(GapReport, HundQuartetIsFlaggedBelowDoublet) {
    // Three degenerate orbitals with on-site repulsion and ferromagnetic exchange.
    IntegralSet ints(3);
    for (int p = 0; p < 3; ++p) {
        ints.set_eri(p, p, p, p, 0.8);
        for (int q = 0; q < p; ++q) {
            ints.set_eri(p, p, q, q, 0.5);
            ints.set_eri(p, q, p, q, 0.05);
        }
    }
    const SpaceFamily fam(3, 3);
    const auto res = solve_multiplets(fam, ints, {{2, 2}, {4, 1}});
    const GapReport r = gap_report(res.multiplets);
    ASSERT_EQ(r.flags.size(), 1u);
    EXPECT_TRUE(r.flags[0].quartet_below);
    EXPECT_GT(r.flags[0].gap_cm, 0.0);
    EXPECT_TRUE(r.any_quartet_below());
    EXPECT_EQ(res.multiplets.front().multiplicity(), 4);
    EXPECT_EQ(r.gaps.size(), 3u);
    const std::string text = to_text(r);
    EXPECT_NE(text.find("quartet below doublet"), std::string::npos);
    EXPECT_TRUE(to_json(r)["quartet_flags"][0]["quartet_below_doublet"].get<bool>());
}

TEST(GapReport, FormattingAvoidsNegativeZero) {
    EXPECT_EQ(format_cm(-0.001), "0.00");
    EXPECT_EQ(format_cm(170.456), "170.46");
    EXPECT_EQ(format_cm(-6.5), "-6.50");
    EXPECT_EQ(multiplicity_name(4), "quartet");
    EXPECT_EQ(multiplicity_name(7), "multiplicity 7");
}
