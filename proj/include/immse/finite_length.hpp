#pragma once

#include "immse/gaussian.hpp"

namespace immse {

/// A code of rate 0.5 ln(1 + alpha * snr1) used at snr1 with block error
/// probability pe.
class FiniteLengthParams {
public:
    FiniteLengthParams(Snr snr1, double alpha, double pe);

    /// Same code described by its rate instead of alpha.
    static FiniteLengthParams from_rate(Snr snr1, Rate rate, double pe);

    [[nodiscard]] Snr snr1() const noexcept { return snr1_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double pe() const noexcept { return pe_; }
    [[nodiscard]] Rate rate() const noexcept;

private:
    Snr snr1_;
    double alpha_;
    double pe_;
};

/// Fano lower bound on I(snr1):
/// 0.5 ln[(1 + alpha snr1)^(1 - pe) * 2^(-2 h_b(pe))], clamped at zero.
[[nodiscard]] Rate fano_mi_lower_bound(const FiniteLengthParams& params);

struct FiniteLengthBound {
    double value = 0.0;
    /// The unclamped bound was negative; value was clamped to zero.
    bool vacuous = false;
};

/// Lower bound on the normalized MMSE at snr0 < alpha * snr1.
///
/// With G = exp(2 * fano_mi_lower_bound) the bound is
/// (G - (1 + snr0)) / ((1 + snr0)(snr1 - snr0)), clamped at zero. At pe = 0
/// it coincides bit for bit with mmse_lower_bound_asymptotic. Throws
/// OutOfValidity when snr0 >= alpha * snr1.
[[nodiscard]] FiniteLengthBound finite_length_mmse_lower_bound(const FiniteLengthParams& params, Snr snr0);

/// The same bound, unclamped, through the equivalent-Gaussian-variance route:
/// d from the Fano-adjusted rate, then d / (1 + d snr0).
[[nodiscard]] double finite_length_bound_via_variance(const FiniteLengthParams& params, Snr snr0);

/// The same bound, unclamped, evaluated as the printed closed-form ratio
/// with the 2^(2 h_b) (1 + alpha snr1)^pe factor kept in both terms.
[[nodiscard]] double finite_length_bound_printed_ratio(const FiniteLengthParams& params, Snr snr0);

}  // namespace immse
