// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spin.hpp
 * @brief Spin ladder operators, S^2 and time reversal on CI vectors.
 *
 * S+ = sum_p a+_{p,alpha} a_{p,beta} maps the ms2 block to ms2 + 2, S- the
 * reverse. Signs follow the canonical determinant ordering.
 */

#pragma once

#include <casq/core/error.hpp>
#include <casq/detspace/cas_space.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace casq {

namespace detail {

inline bool block_exists(int n_elec, int n_orb, int ms2) {
    if (((n_elec - ms2) % 2 + 2) % 2 != 0 || std::abs(ms2) > n_elec) return false;
    const int na = (n_elec + ms2) / 2, nb = (n_elec - ms2) / 2;
    return na >= 0 && nb >= 0 && na <= n_orb && nb <= n_orb;
}

} // namespace detail

/// Precomputed S+ (raise = true) or S- action from `from` into `to`.
class SpinLadder {
public:
    SpinLadder(const CasSpace& from, const CasSpace& to, bool raise)
        : n_b_from_(from.n_beta_strings()), n_b_to_(to.n_beta_strings()), raise_(raise) {
        if (from.n_orb() != to.n_orb() || from.n_elec() != to.n_elec() ||
            to.ms2() != from.ms2() + (raise ? 2 : -2))
            throw InputError("SpinLadder: target block does not match the ladder direction");
        const int n = from.n_orb();
        n_orb_ = n;
        const int na = from.n_alpha();
        alpha_.assign(from.n_alpha_strings() * n, {-1, 0});
        beta_.assign(from.n_beta_strings() * n, {-1, 0});
        for (std::size_t ia = 0; ia < from.n_alpha_strings(); ++ia) {
            const OccString a = from.alpha_strings()[ia];
            for (int p = 0; p < n; ++p) {
                const int below = popcount(a & bits_below(p));
                if (raise && !occupied(a, p)) {
                    // a+_{p,alpha} acts after a_{p,beta}; the alpha string is still intact.
                    const auto t = to.alpha_index(a | (OccString{1} << p));
                    alpha_[ia * n + p] = {static_cast<long>(*t), (below & 1) ? -1 : 1};
                } else if (!raise && occupied(a, p)) {
                    const auto t = to.alpha_index(a & ~(OccString{1} << p));
                    alpha_[ia * n + p] = {static_cast<long>(*t), (below & 1) ? -1 : 1};
                }
            }
        }
        for (std::size_t ib = 0; ib < from.n_beta_strings(); ++ib) {
            const OccString b = from.beta_strings()[ib];
            for (int p = 0; p < n; ++p) {
                const int below = popcount(b & bits_below(p));
                if (raise && occupied(b, p)) {
                    // a_{p,beta} passes all na alpha creators.
                    const auto t = to.beta_index(b & ~(OccString{1} << p));
                    beta_[ib * n + p] = {static_cast<long>(*t), ((na + below) & 1) ? -1 : 1};
                } else if (!raise && !occupied(b, p)) {
                    // a+_{p,beta} passes the na - 1 remaining alpha creators.
                    const auto t = to.beta_index(b | (OccString{1} << p));
                    beta_[ib * n + p] = {static_cast<long>(*t), ((na - 1 + below) & 1) ? -1 : 1};
                }
            }
        }
        n_a_from_ = from.n_alpha_strings();
        to_size_ = to.size();
    }

    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        if (static_cast<std::size_t>(v.size()) != n_a_from_ * n_b_from_)
            throw InputError("SpinLadder: vector dimension mismatch");
        Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(to_size_));
        for (std::size_t ia = 0; ia < n_a_from_; ++ia)
            for (std::size_t ib = 0; ib < n_b_from_; ++ib) {
                const double c = v[static_cast<Eigen::Index>(ia * n_b_from_ + ib)];
                if (c == 0.0) continue;
                for (int p = 0; p < n_orb_; ++p) {
                    const auto& a = alpha_[ia * n_orb_ + p];
                    const auto& b = beta_[ib * n_orb_ + p];
                    if (a.first < 0 || b.first < 0) continue;
                    out[static_cast<Eigen::Index>(static_cast<std::size_t>(a.first) * n_b_to_ + b.first)] +=
                        a.second * b.second * c;
                }
            }
        return out;
    }

    [[nodiscard]] bool raises() const noexcept { return raise_; }

private:
    int n_orb_ = 0;
    std::size_t n_a_from_ = 0;
    std::size_t n_b_from_ = 0;
    std::size_t n_b_to_ = 0;
    std::size_t to_size_ = 0;
    bool raise_;
    std::vector<std::pair<long, int>> alpha_;
    std::vector<std::pair<long, int>> beta_;
};

/// S^2 = S- S+ + S_z (S_z + 1) on one ms2 block.
class SpinSquaredOperator {
public:
    explicit SpinSquaredOperator(const CasSpace& space) : ms2_(space.ms2()), dim_(space.size()) {
        if (detail::block_exists(space.n_elec(), space.n_orb(), space.ms2() + 2)) {
            upper_.emplace(space.n_elec(), space.n_orb(), space.ms2() + 2);
            up_.emplace(space, *upper_, true);
            down_.emplace(*upper_, space, false);
        }
        // Diagonal of S-S+: orbitals with beta occupied and alpha empty.
        diag_.resize(static_cast<Eigen::Index>(dim_));
        const double sz = 0.5 * ms2_;
        for (std::size_t k = 0; k < dim_; ++k) {
            const Determinant d = space.det(k);
            diag_[static_cast<Eigen::Index>(k)] = sz * (sz + 1.0) + popcount(d.beta & ~d.alpha);
        }
    }

    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        const double sz = 0.5 * ms2_;
        Eigen::VectorXd out = sz * (sz + 1.0) * v;
        if (up_) out += down_->apply(up_->apply(v));
        return out;
    }

    /// <v|S^2|v> for a normalized v.
    [[nodiscard]] double expectation(const Eigen::VectorXd& v) const {
        const double sz = 0.5 * ms2_;
        double e = sz * (sz + 1.0) * v.squaredNorm();
        if (up_) e += up_->apply(v).squaredNorm();
        return e;
    }

    /// S+ images, or an empty vector when the upper block does not exist.
    [[nodiscard]] Eigen::VectorXd raise(const Eigen::VectorXd& v) const {
        return up_ ? up_->apply(v) : Eigen::VectorXd{};
    }

    [[nodiscard]] const Eigen::VectorXd& diagonal() const noexcept { return diag_; }

private:
    int ms2_;
    std::size_t dim_;
    std::optional<CasSpace> upper_;
    std::optional<SpinLadder> up_;
    std::optional<SpinLadder> down_;
    Eigen::VectorXd diag_;
};

/// Loewdin projector onto spin S within one ms2 block:
///   P_S = prod_{S' != S} (S^2 - S'(S'+1)) / (S(S+1) - S'(S'+1)),
/// over every S' the block can hold.
class SpinProjector {
public:
    SpinProjector(const CasSpace& space, double s) : s2op_(space) {
        const int open_max = std::min(space.n_elec(), 2 * space.n_orb() - space.n_elec());
        const double target = s * (s + 1.0);
        for (int two_s = std::abs(space.ms2()); two_s <= open_max; two_s += 2) {
            const double sp = 0.5 * two_s;
            if (std::abs(sp - s) < 0.25) continue;
            shifts_.push_back(sp * (sp + 1.0));
            scales_.push_back(1.0 / (target - sp * (sp + 1.0)));
        }
    }

    [[nodiscard]] Eigen::VectorXd apply(Eigen::VectorXd v) const {
        for (std::size_t k = 0; k < shifts_.size(); ++k) v = scales_[k] * (s2op_.apply(v) - shifts_[k] * v);
        return v;
    }

    void apply_columns(Eigen::MatrixXd& m) const {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = apply(m.col(j));
    }

    [[nodiscard]] const SpinSquaredOperator& s2() const noexcept { return s2op_; }

private:
    SpinSquaredOperator s2op_;
    std::vector<double> shifts_;
    std::vector<double> scales_;
};

[[nodiscard]] inline double s_squared(const CasSpace& space, const Eigen::VectorXd& v) {
    return SpinSquaredOperator(space).expectation(v);
}

/// Spin quantum number nearest to a given <S^2>.
[[nodiscard]] inline double spin_from_s2(double s2) {
    const double s = 0.5 * (std::sqrt(1.0 + 4.0 * std::max(0.0, s2)) - 1.0);
    return std::round(2.0 * s) / 2.0;
}

struct LadderResult {
    CasSpace space;
    Eigen::VectorXd vector; // unnormalized
};

namespace detail {

inline LadderResult apply_ladder(const CasSpace& space, const Eigen::VectorXd& v, bool raise) {
    const int target = space.ms2() + (raise ? 2 : -2);
    if (!block_exists(space.n_elec(), space.n_orb(), target))
        throw InputError(std::string("spin ladder: state annihilated (") + (raise ? "M_S = S" : "M_S = -S") + ")");
    LadderResult r{CasSpace(space.n_elec(), space.n_orb(), target), {}};
    r.vector = SpinLadder(space, r.space, raise).apply(v);
    if (r.vector.norm() < 1e-8)
        throw InputError(std::string("spin ladder: state annihilated (") + (raise ? "M_S = S" : "M_S = -S") + ")");
    return r;
}

} // namespace detail

/// S- v in the ms2 - 2 block; norm^2 = S(S+1) - M(M-1) for a pure spin state.
[[nodiscard]] inline LadderResult apply_s_minus(const CasSpace& space, const Eigen::VectorXd& v) {
    return detail::apply_ladder(space, v, false);
}

[[nodiscard]] inline LadderResult apply_s_plus(const CasSpace& space, const Eigen::VectorXd& v) {
    return detail::apply_ladder(space, v, true);
}

/// Antiunitary time reversal, with T a+_{p,alpha} T^-1 = a+_{p,beta} and
/// T a+_{p,beta} T^-1 = -a+_{p,alpha}. For real coefficients:
///   T |alpha, beta> = (-1)^{N_beta (N_alpha + 1)} |beta, alpha>.
/// `target` must be the -ms2 block of `space`.
[[nodiscard]] inline Eigen::VectorXd time_reverse(const CasSpace& space, const CasSpace& target,
                                                  const Eigen::VectorXd& v) {
    if (target.ms2() != -space.ms2() || target.n_orb() != space.n_orb() || target.n_elec() != space.n_elec())
        throw InputError("time_reverse: target must be the -ms2 block");
    const int na = space.n_alpha(), nb = space.n_beta();
    const double phase = ((nb * (na + 1)) % 2) ? -1.0 : 1.0;
    Eigen::VectorXd out(v.size());
    for (std::size_t k = 0; k < space.size(); ++k) {
        const Determinant d = space.det(k);
        out[static_cast<Eigen::Index>(*target.index(spin_flipped(d)))] = phase * v[static_cast<Eigen::Index>(k)];
    }
    return out;
}

} // namespace casq
