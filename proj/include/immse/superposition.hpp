#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "immse/curve.hpp"
#include "immse/gaussian.hpp"

namespace immse {

/// Strictly increasing, positive SNR points snr_0 < ... < snr_K.
///
/// A design ladder may hold a single point (K = 0): that is the plain
/// Gaussian codebook for snr_0, which is what degenerate constraints
/// (beta = 1 everywhere, or beta = 0) collapse to.
class SnrLadder {
public:
    explicit SnrLadder(std::vector<Snr> points);

    [[nodiscard]] std::span<const Snr> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    /// Number of constrained points, K.
    [[nodiscard]] std::size_t constrained() const noexcept { return points_.size() - 1; }
    [[nodiscard]] Snr operator[](std::size_t i) const { return points_.at(i); }
    [[nodiscard]] Snr back() const noexcept { return points_.back(); }

private:
    std::vector<Snr> points_;
};

/// MMSE(snr) <= beta / (1 + beta * snr).
struct MmseConstraint {
    Snr snr;
    double beta = 1.0;

    friend bool operator==(const MmseConstraint&, const MmseConstraint&) = default;
};

enum class BetaCheck {
    /// 1 > beta_0 > ... > beta_{K-1} > 0.
    Monotone,
    /// Monotone plus sum(beta) <= 1.
    StrictSum,
};

/// Layered Gaussian superposition codebook descriptor.
///
/// Layer 0 is the common message (power 1 - beta_0); layer j carries power
/// beta_{j-1} - beta_j; the last layer carries beta_{K-1}.
class SuperpositionDesign {
public:
    [[nodiscard]] const SnrLadder& ladder() const noexcept { return ladder_; }
    [[nodiscard]] std::span<const double> betas() const noexcept { return betas_; }
    [[nodiscard]] std::span<const Rate> layer_rates() const noexcept { return layer_rates_; }
    [[nodiscard]] Rate total_rate() const noexcept { return total_rate_; }
    [[nodiscard]] std::vector<double> layer_powers() const;

private:
    friend SuperpositionDesign make_design(SnrLadder ladder, std::vector<double> betas, BetaCheck check);

    SuperpositionDesign(SnrLadder ladder, std::vector<double> betas);

    SnrLadder ladder_;
    std::vector<double> betas_;
    std::vector<Rate> layer_rates_;
    Rate total_rate_;
};

/// Builds a design; |betas| must equal ladder.constrained() and lie strictly
/// decreasing in (0, 1).
[[nodiscard]] SuperpositionDesign make_design(SnrLadder ladder, std::vector<double> betas,
                                              BetaCheck check = BetaCheck::Monotone);

/// Staircase MMSE: 1/(1+g) below snr_0, beta_i/(1+beta_i g) on
/// [snr_i, snr_{i+1}), zero from snr_K on.
[[nodiscard]] PiecewiseCurve mmse_curve(const SuperpositionDesign& design);

/// Continuous mutual information; saturates at total_rate from snr_K on.
[[nodiscard]] PiecewiseCurve mi_curve(const SuperpositionDesign& design);

/// Largest rate at snr1 under MMSE(snr0) <= beta / (1 + beta * snr0).
[[nodiscard]] Rate max_rate_single(Snr snr0, Snr snr1, double beta);

/// Maps the MMSE-constraint parameter beta to the rate parameter alpha with
/// 0.5 ln(1 + alpha snr1) equal to max_rate_single(snr0, snr1, beta).
[[nodiscard]] double beta_to_alpha(Snr snr0, Snr snr1, double beta);

/// Inverse of beta_to_alpha; 0 when alpha * snr1 <= snr0.
[[nodiscard]] double alpha_to_beta(Snr snr0, Snr snr1, double alpha);

/// Variance d with (1 + alpha snr1)/(1 + snr0) = (1 + d snr1)/(1 + d snr0).
[[nodiscard]] Variance equivalent_gaussian_variance(Snr snr0, Snr snr1, double alpha);

/// Lower bound on MMSE(snr0) of any reliable code of rate 0.5 ln(1 + alpha snr1).
[[nodiscard]] double mmse_lower_bound_asymptotic(Snr snr0, Snr snr1, double alpha);

/// Drops every constraint implied by another one at lower-or-equal SNR with
/// lower-or-equal beta. Output: SNR strictly increasing, beta strictly
/// decreasing.
[[nodiscard]] std::vector<MmseConstraint> prune_constraints(std::span<const MmseConstraint> raw);

struct MultiConstraintOptimum {
    Rate rate;
    SuperpositionDesign design;
    /// The canonical (pruned) constraint set the rate was computed from.
    std::vector<MmseConstraint> constraints;
};

/// Largest rate at snr_k under all constraints. The input is pruned first,
/// so redundant constraints never change the result.
[[nodiscard]] MultiConstraintOptimum max_rate_multi(std::span<const MmseConstraint> constraints, Snr snr_k,
                                                    BetaCheck check = BetaCheck::Monotone);

struct OptimalProfile {
    PiecewiseCurve mmse;
    PiecewiseCurve mi;
};

/// The MMSE and mutual-information curves shared by every maximum-rate code.
[[nodiscard]] OptimalProfile optimal_profile(std::span<const MmseConstraint> constraints, Snr snr_k,
                                             BetaCheck check = BetaCheck::Monotone);

}  // namespace immse
