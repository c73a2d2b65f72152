// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ligand_field.hpp
 * @brief d-shell ligand-field model Hamiltonian.
 *
 * Real d orbitals in the fixed order (d_z2, d_xz, d_yz, d_x2-y2, d_xy):
 *   d_z2    = |0>
 *   d_xz    = (|-1> - |1>) / sqrt2
 *   d_yz    = i (|-1> + |1>) / sqrt2
 *   d_x2-y2 = (|2> + |-2>) / sqrt2
 *   d_xy    = -i (|2> - |-2>) / sqrt2
 * with Condon-Shortley complex harmonics |m>.
 *
 * Electron repulsion is parameterized by Racah B and C with A = 0, i.e.
 * F0 = 7C/5, F2 = B + C/7, F4 = C/35. The two-electron tensor is built from
 * Gaunt coefficients in the complex basis and rotated to the real basis.
 * SOC is the one-shell operator zeta l.s, so z_K = zeta * l_K.
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/core/units.hpp>
#include <casq/ingest/integrals.hpp>
#include <casq/ingest/property_integrals.hpp>
#include <casq/ingest/run_config.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>

namespace casq {

struct LigandFieldModel {
    Eigen::Matrix<double, 5, 5> v_lf = Eigen::Matrix<double, 5, 5>::Zero(); // eV
    double racah_b = 0.0; // eV
    double racah_c = 0.0; // eV
    double zeta = 0.0;    // cm^-1
    int n_elec = 1;

    void validate() const {
        if (n_elec < 1 || n_elec > 9) throw InputError("ligand field: n_elec must be in 1..9");
        if ((v_lf - v_lf.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw InputError("ligand field: v_lf must be symmetric");
        if (racah_b < 0.0 || racah_c < 0.0) throw InputError("ligand field: Racah B and C must be >= 0");
    }
};

struct LigandFieldSystem {
    OrbitalSpace orbitals;
    IntegralSet integrals;
    PropertyIntegrals properties;
    RunConfig config;
};

namespace lf {

inline const std::array<std::string, 5> orbital_labels = {"d_z2", "d_xz", "d_yz", "d_x2-y2", "d_xy"};

/// Imaginary parts of <p|l_K|q> over the real d orbitals, hbar units.
[[nodiscard]] inline std::array<Eigen::MatrixXd, 3> angular_momentum() {
    const double r3 = std::sqrt(3.0);
    std::array<Eigen::MatrixXd, 3> l;
    for (auto& m : l) m = Eigen::MatrixXd::Zero(5, 5);
    auto put = [](Eigen::MatrixXd& m, int p, int q, double v) {
        m(p, q) = v;
        m(q, p) = -v;
    };
    put(l[0], 0, 2, r3);
    put(l[0], 1, 4, 1.0);
    put(l[0], 2, 3, -1.0);
    put(l[1], 0, 1, -r3);
    put(l[1], 1, 3, -1.0);
    put(l[1], 2, 4, -1.0);
    put(l[2], 1, 2, -1.0);
    put(l[2], 3, 4, -2.0);
    return l;
}

namespace detail {

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Wigner 3j symbol via the Racah formula (integer arguments).
inline double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
    if (m1 + m2 + m3 != 0) return 0.0;
    if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
    const double tri = factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3) /
                       factorial(j1 + j2 + j3 + 1);
    const double pre = std::sqrt(tri * factorial(j1 + m1) * factorial(j1 - m1) * factorial(j2 + m2) *
                                 factorial(j2 - m2) * factorial(j3 + m3) * factorial(j3 - m3));
    double sum = 0.0;
    for (int t = 0; t <= j1 + j2 + j3; ++t) {
        const int a = j3 - j2 + t + m1, b = j3 - j1 + t - m2, c = j1 + j2 - j3 - t, d = j1 - t - m1,
                  e = j2 - t + m2;
        if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0) continue;
        const double term = 1.0 / (factorial(t) * factorial(a) * factorial(b) * factorial(c) * factorial(d) *
                                   factorial(e));
        sum += (t % 2 ? -term : term);
    }
    const int phase = j1 - j2 - m3;
    return (phase % 2 ? -1.0 : 1.0) * pre * sum;
}

// c^k(l m, l m') for l = 2.
inline double gaunt_d(int k, int m, int mp) {
    const double sign = (std::abs(m) % 2) ? -1.0 : 1.0;
    return sign * 5.0 * wigner_3j(2, k, 2, 0, 0, 0) * wigner_3j(2, k, 2, -m, m - mp, mp);
}

// Column p holds the complex-harmonic coefficients (m = -2..2) of real orbital p.
inline Eigen::Matrix<std::complex<double>, 5, 5> real_to_complex() {
    using C = std::complex<double>;
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix<C, 5, 5> u = Eigen::Matrix<C, 5, 5>::Zero();
    auto at = [](int m) { return m + 2; };
    u(at(0), 0) = 1.0;
    u(at(-1), 1) = s;
    u(at(1), 1) = -s;
    u(at(-1), 2) = C(0, s);
    u(at(1), 2) = C(0, s);
    u(at(2), 3) = s;
    u(at(-2), 3) = s;
    u(at(2), 4) = C(0, -s);
    u(at(-2), 4) = C(0, s);
    return u;
}

} // namespace detail

/// d-shell (pq|rs) over real orbitals in eV, given Racah B, C with A = 0.
[[nodiscard]] inline IntegralSet coulomb_tensor_ev(double racah_b, double racah_c) {
    using C = std::complex<double>;
    const std::array<double, 3> slater = {7.0 * racah_c / 5.0, 49.0 * (racah_b + racah_c / 7.0),
                                          441.0 * racah_c / 35.0}; // F^0, F^2, F^4
    // Complex-basis (m1 m2|m3 m4).
    std::array<double, 625> cplx{};
    auto ci = [](int a, int b, int c, int d) { return ((a * 5 + b) * 5 + c) * 5 + d; };
    for (int m1 = -2; m1 <= 2; ++m1)
        for (int m2 = -2; m2 <= 2; ++m2)
            for (int m3 = -2; m3 <= 2; ++m3)
                for (int m4 = -2; m4 <= 2; ++m4) {
                    if (m1 + m3 != m2 + m4) continue;
                    double v = 0.0;
                    for (int k = 0; k <= 2; ++k)
                        v += slater[k] * detail::gaunt_d(2 * k, m1, m2) * detail::gaunt_d(2 * k, m4, m3);
                    cplx[ci(m1 + 2, m2 + 2, m3 + 2, m4 + 2)] = v;
                }
    const auto u = detail::real_to_complex();
    IntegralSet out(5);
    for (int p = 0; p < 5; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r < 5; ++r)
                for (int s = 0; s <= r; ++s) {
                    C v = 0.0;
                    for (int a = 0; a < 5; ++a)
                        for (int b = 0; b < 5; ++b)
                            for (int c = 0; c < 5; ++c)
                                for (int d = 0; d < 5; ++d) {
                                    const double x = cplx[ci(a, b, c, d)];
                                    if (x == 0.0) continue;
                                    v += std::conj(u(a, p)) * u(b, q) * std::conj(u(c, r)) * u(d, s) * x;
                                }
                    out.set_eri(p, q, r, s, v.real());
                }
    return out;
}

} // namespace lf

[[nodiscard]] inline LigandFieldSystem build_ligand_field_model(const LigandFieldModel& model) {
    model.validate();
    LigandFieldSystem sys;
    sys.orbitals.n_orb = 5;
    sys.orbitals.labels.assign(lf::orbital_labels.begin(), lf::orbital_labels.end());
    sys.orbitals.core_energy = 0.0;

    const IntegralSet g_ev = lf::coulomb_tensor_ev(model.racah_b, model.racah_c);
    sys.integrals = IntegralSet(5);
    for (int p = 0; p < 5; ++p)
        for (int q = 0; q <= p; ++q) sys.integrals.set_h(p, q, model.v_lf(p, q) * units::ev_to_hartree);
    for (int p = 0; p < 5; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r < 5; ++r)
                for (int s = 0; s <= r; ++s)
                    sys.integrals.set_eri(p, q, r, s, g_ev.eri(p, q, r, s) * units::ev_to_hartree);

    sys.properties = PropertyIntegrals::zero(5);
    sys.properties.angmom = lf::angular_momentum();
    const double zeta = model.zeta * units::cm_to_hartree;
    for (int k = 0; k < 3; ++k) sys.properties.soc[k] = zeta * sys.properties.angmom[k];

    sys.config.n_elec = model.n_elec;
    sys.config.n_orb = 5;
    // Low-spin multiplicity, five roots (or every state if fewer exist).
    const int low_mult = model.n_elec % 2 + 1;
    sys.config.roots_per_multiplicity[low_mult] = 5;
    sys.config.davidson.guess_dim = 252;
    return sys;
}

namespace lf {

/// VO2+-like d1 ligand field: d_xy lowest, d_x2-y2 above d_xz/d_yz, d_z2 highest.
/// Illustrative values, not fitted to any molecule.
[[nodiscard]] inline LigandFieldModel preset_d1_tetragonal() {
    LigandFieldModel m;
    m.v_lf.diagonal() << 4.5, 2.0, 2.0, 2.8, 0.0;
    m.racah_b = 0.08;
    m.racah_c = 0.32;
    m.zeta = 250.0;
    m.n_elec = 1;
    return m;
}

/// Cu2+-like square-planar d9 ligand field: hole in d_x2-y2, about 2.2 eV total splitting.
/// Illustrative values, not fitted to any molecule.
[[nodiscard]] inline LigandFieldModel preset_d9_planar() {
    LigandFieldModel m;
    m.v_lf.diagonal() << 0.5, 0.3, 0.3, 2.2, 0.0;
    m.racah_b = 0.12;
    m.racah_c = 0.48;
    m.zeta = 830.0;
    m.n_elec = 9;
    return m;
}

/// Resolves "d1-tetragonal"/"d1" and "d9-planar"/"d9".
[[nodiscard]] inline LigandFieldModel preset(const std::string& name) {
    if (name == "d1-tetragonal" || name == "d1") return preset_d1_tetragonal();
    if (name == "d9-planar" || name == "d9") return preset_d9_planar();
    throw InputError("unknown ligand-field preset '" + name + "' (expected d1-tetragonal or d9-planar)");
}

} // namespace lf

} // namespace casq
