// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Matrix-free CASCI Hamiltonian action (sigma vector).
 *
 * With k_pq = h_pq - 1/2 sum_r (pr|rq) the Hamiltonian splits as
 *   H = H_alpha + H_beta + sum_pqrs (pq|rs) E^alpha_pq E^beta_rs + E_core,
 * where H_alpha, H_beta act on one string type only. The same-spin parts are
 * assembled once as sparse string-space matrices; the alpha-beta part is
 * applied per target alpha string as a dense product over the beta strings.
 *
 * A CI vector is viewed as an N_beta x N_alpha column-major matrix, so column
 * i_alpha holds the coefficients of all determinants with that alpha string.
 * Each worker owns whole columns of the output, which makes the result
 * independent of the worker count.
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/detspace/cas_space.hpp>
#include <casq/ingest/integrals.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace casq {

namespace detail {

// <I|H_same|J> over one string set: one-body k plus same-spin repulsion.
inline Eigen::SparseMatrix<double> string_hamiltonian(const StringSingles& singles, const Eigen::MatrixXd& k,
                                                      const IntegralSet& ints) {
    const std::size_t n_str = singles.n_strings();
    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<double> row(n_str, 0.0);
    std::vector<char> touched(n_str, 0);
    std::vector<std::uint32_t> cols;
    for (std::size_t i = 0; i < n_str; ++i) {
        cols.clear();
        auto add = [&](std::uint32_t j, double v) {
            if (!touched[j]) {
                touched[j] = 1;
                cols.push_back(j);
            }
            row[j] += v;
        };
        // Entry (K, s1, p, q) of I means <I|E_qp|K> = s1.
        singles.for_each(i, [&](const StringSingles::Entry& e1) {
            add(e1.target, k(e1.q, e1.p) * e1.sign);
            singles.for_each(e1.target, [&](const StringSingles::Entry& e2) {
                add(e2.target, 0.5 * e1.sign * e2.sign * ints.eri(e1.q, e1.p, e2.q, e2.p));
            });
        });
        for (auto j : cols) {
            if (row[j] != 0.0) triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), row[j]);
            row[j] = 0.0;
            touched[j] = 0;
        }
    }
    Eigen::SparseMatrix<double> m(static_cast<int>(n_str), static_cast<int>(n_str));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

} // namespace detail

class HamiltonianOperator {
public:
    HamiltonianOperator(const CasSpace& space, const IntegralSet& ints)
        : n_orb_(space.n_orb()),
          n_a_(static_cast<Eigen::Index>(space.n_alpha_strings())),
          n_b_(static_cast<Eigen::Index>(space.n_beta_strings())),
          core_(ints.core_energy),
          alpha_(alpha_singles(space)),
          beta_(beta_singles(space)) {
        if (ints.n_orb() != space.n_orb()) throw InputError("HamiltonianOperator: orbital count mismatch");
        const int n = n_orb_;
        Eigen::MatrixXd k = ints.h();
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r) k(p, q) -= 0.5 * ints.eri(p, r, r, q);
        h_alpha_ = detail::string_hamiltonian(alpha_, k, ints);
        h_beta_ = detail::string_hamiltonian(beta_, k, ints);

        const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
        eri_ = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            ints.eri_data().data(), nn, nn);

        // Diagonal: same-spin string energies plus alpha-beta Coulomb.
        Eigen::MatrixXd coulomb_beta(n_b_, n); // sum_{q in beta} (pp|qq)
        for (Eigen::Index ib = 0; ib < n_b_; ++ib)
            for (int p = 0; p < n; ++p) {
                double v = 0.0;
                for (int q = 0; q < n; ++q)
                    if (occupied(space.beta_strings()[ib], q)) v += ints.eri(p, p, q, q);
                coulomb_beta(ib, p) = v;
            }
        diag_.resize(static_cast<Eigen::Index>(space.size()));
        for (Eigen::Index ia = 0; ia < n_a_; ++ia) {
            const OccString a = space.alpha_strings()[ia];
            for (Eigen::Index ib = 0; ib < n_b_; ++ib) {
                double v = core_ + h_alpha_.coeff(ia, ia) + h_beta_.coeff(ib, ib);
                for (int p = 0; p < n; ++p)
                    if (occupied(a, p)) v += coulomb_beta(ib, p);
                diag_[ia * n_b_ + ib] = v;
            }
        }
    }

    [[nodiscard]] Eigen::Index dim() const noexcept { return n_a_ * n_b_; }
    [[nodiscard]] const Eigen::VectorXd& diagonal() const noexcept { return diag_; }

    /// sigma = H c.
    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& c) const {
        if (c.size() != dim()) throw InputError("sigma: vector dimension does not match the CAS space");
        Eigen::VectorXd out(dim());
        apply_into(c.data(), out.data());
        return out;
    }

    /// Column-wise H X.
    [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        if (x.rows() != dim()) throw InputError("sigma: block dimension does not match the CAS space");
        Eigen::MatrixXd out(x.rows(), x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j) apply_into(x.col(j).data(), out.col(j).data());
        return out;
    }

private:
    void apply_into(const double* c_ptr, double* s_ptr) const {
        using Map = Eigen::Map<Eigen::MatrixXd>;
        using CMap = Eigen::Map<const Eigen::MatrixXd>;
        const CMap c(c_ptr, n_b_, n_a_);
        Map s(s_ptr, n_b_, n_a_);

        s.noalias() = core_ * c;
        s.noalias() += h_beta_ * c;
        s.noalias() += c * h_alpha_; // h_alpha is symmetric

        const int n = n_orb_;
        const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
        std::size_t max_entries = 0;
        for (std::size_t i = 0; i < alpha_.n_strings(); ++i)
            max_entries = std::max<std::size_t>(max_entries, alpha_.offsets[i + 1] - alpha_.offsets[i]);
        if (max_entries == 0 || beta_.entries.empty()) return;

#pragma omp parallel
        {
            Eigen::MatrixXd gathered(n_b_, static_cast<Eigen::Index>(max_entries));
            Eigen::MatrixXd eri_rows(static_cast<Eigen::Index>(max_entries), nn);
            Eigen::MatrixXd y(n_b_, nn);
#pragma omp for schedule(dynamic, 1)
            for (Eigen::Index ia = 0; ia < n_a_; ++ia) {
                Eigen::Index ne = 0;
                // Entry (Ja, sa, p, q) of Ia means <Ia|E_qp|Ja> = sa.
                alpha_.for_each(static_cast<std::size_t>(ia), [&](const StringSingles::Entry& e) {
                    gathered.col(ne) = e.sign * c.col(e.target);
                    eri_rows.row(ne) = eri_.row(static_cast<Eigen::Index>(e.q) * n + e.p);
                    ++ne;
                });
                y.noalias() = gathered.leftCols(ne) * eri_rows.topRows(ne);
                auto out = s.col(ia);
                for (Eigen::Index ib = 0; ib < n_b_; ++ib) {
                    double acc = 0.0;
                    beta_.for_each(static_cast<std::size_t>(ib), [&](const StringSingles::Entry& e) {
                        acc += e.sign * y(e.target, static_cast<Eigen::Index>(e.q) * n + e.p);
                    });
                    out[ib] += acc;
                }
            }
        }
    }

    int n_orb_;
    Eigen::Index n_a_;
    Eigen::Index n_b_;
    double core_;
    StringSingles alpha_;
    StringSingles beta_;
    Eigen::SparseMatrix<double> h_alpha_;
    Eigen::SparseMatrix<double> h_beta_;
    Eigen::MatrixXd eri_;
    Eigen::VectorXd diag_;
};

/// sigma(space, integrals, v) = H v without building H.
[[nodiscard]] inline Eigen::VectorXd sigma(const CasSpace& space, const IntegralSet& ints, const Eigen::VectorXd& v) {
    if (v.size() != static_cast<Eigen::Index>(space.size()))
        throw InputError("sigma: vector dimension does not match the CAS space");
    return HamiltonianOperator(space, ints).apply(v);
}

} // namespace casq
