#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "immse/gaussian.hpp"

namespace immse {

/// I(snr) <= 0.5 ln(1 + alpha * snr).
struct DisturbanceConstraint {
    Snr snr;
    double alpha = 1.0;
};

/// Mutual-information disturbance constraints, SNR strictly increasing.
class DisturbanceConstraintSet {
public:
    explicit DisturbanceConstraintSet(std::vector<DisturbanceConstraint> entries);

    [[nodiscard]] std::span<const DisturbanceConstraint> entries() const noexcept { return entries_; }

private:
    std::vector<DisturbanceConstraint> entries_;
};

struct RateDisturbancePoint {
    Rate max_rate;          // 0.5 ln(1 + alpha snr1)
    Rate min_disturbance;   // 0.5 ln(1 + alpha snr0)
};

/// Corner of the Gaussian rate-disturbance region for power fraction alpha.
[[nodiscard]] RateDisturbancePoint rate_disturbance_point(Snr snr0, Snr snr1, double alpha);

/// The single constraint that stays effective: the smallest alpha.
[[nodiscard]] double effective_alpha(const DisturbanceConstraintSet& constraints);

/// Largest rate at snr_k under all disturbance constraints, 0.5 ln(1 + alpha_eff snr_k).
[[nodiscard]] Rate disturbance_max_rate(const DisturbanceConstraintSet& constraints, Snr snr_k);

enum class Strategy { Superposition, FullPowerGaussian, ReducedPowerGaussian };

[[nodiscard]] std::string_view to_string(Strategy s) noexcept;

enum class Pairing {
    /// alpha chosen by the caller.
    Caller,
    /// alpha matched so that both codes leak the same mutual information at snr0.
    EqualDisturbance,
};

struct MeasureComparison {
    double beta = 0.0;
    double alpha = 0.0;
    Pairing pairing = Pairing::Caller;
    Rate mmse_constrained_rate;
    Strategy mmse_strategy = Strategy::Superposition;
    Rate disturbance_constrained_rate;
    Strategy disturbance_strategy = Strategy::ReducedPowerGaussian;
    /// Positive when the MMSE-constrained rate is the larger one.
    double rate_gap_nats = 0.0;
};

/// Alpha whose disturbance 0.5 ln(1 + alpha snr0) equals the mutual
/// information the beta superposition design leaks at snr0.
[[nodiscard]] double equal_disturbance_alpha(Snr snr0, Snr snr1, double beta);

/// Compares MMSE-constrained and disturbance-constrained maximum rates.
[[nodiscard]] MeasureComparison compare_measures(Snr snr0, Snr snr1, double beta, double alpha);
/// As above with alpha from equal_disturbance_alpha.
[[nodiscard]] MeasureComparison compare_measures(Snr snr0, Snr snr1, double beta);

}  // namespace immse
