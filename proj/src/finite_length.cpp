#include "immse/finite_length.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "immse/superposition.hpp"

namespace immse {

namespace {

// ln of the factor the Fano terms divide (1 + alpha snr1) by:
// pe * ln(1 + alpha snr1) + 2 h_b(pe) ln 2.
double fano_penalty(const FiniteLengthParams& p)
{
    return p.pe() * std::log1p(p.alpha() * p.snr1().value()) + 2.0 * binary_entropy(p.pe()) * std::numbers::ln2;
}

void require_valid(const FiniteLengthParams& p, Snr snr0)
{
    if (!(snr0.value() < p.alpha() * p.snr1().value())) {
        throw OutOfValidity("finite-length bound holds only for snr0 < alpha * snr1");
    }
}

}  // namespace

FiniteLengthParams::FiniteLengthParams(Snr snr1, double alpha, double pe) : snr1_(snr1), alpha_(alpha), pe_(pe)
{
    detail::require(snr1.value() > 0.0, "snr1 must be positive");
    detail::require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
    detail::require(std::isfinite(pe) && pe >= 0.0 && pe <= 0.5, "error probability must lie in [0, 1/2]");
}

FiniteLengthParams FiniteLengthParams::from_rate(Snr snr1, Rate rate, double pe)
{
    const double alpha = std::expm1(2.0 * rate.nats()) / snr1.value();
    if (alpha > 1.0) {
        throw OutOfValidity("rate exceeds the capacity at snr1");
    }
    return FiniteLengthParams(snr1, alpha, pe);
}

Rate FiniteLengthParams::rate() const noexcept
{
    return Rate::from_nats(0.5 * std::log1p(alpha_ * snr1_.value()));
}

Rate fano_mi_lower_bound(const FiniteLengthParams& params)
{
    const double nats = 0.5 * (std::log1p(params.alpha() * params.snr1().value()) - fano_penalty(params));
    return Rate::from_nats(std::max(nats, 0.0));
}

FiniteLengthBound finite_length_mmse_lower_bound(const FiniteLengthParams& params, Snr snr0)
{
    require_valid(params, snr0);
    const double s0 = snr0.value();
    const double s1 = params.snr1().value();
    const double alpha_snr1 = params.alpha() * s1;

    // G = (1 + alpha snr1) * exp(-penalty); write G - (1 + snr0) as
    // (alpha snr1 - snr0) - (1 + alpha snr1)(1 - exp(-penalty)) so the
    // zero-error case is exact and small pe loses no digits.
    const double deficit = -(1.0 + alpha_snr1) * std::expm1(-fano_penalty(params));
    const double raw = ((alpha_snr1 - s0) - deficit) / ((s1 - s0) * (1.0 + s0));

    if (raw < 0.0) {
        return {0.0, true};
    }
    return {raw, false};
}

double finite_length_bound_via_variance(const FiniteLengthParams& params, Snr snr0)
{
    require_valid(params, snr0);
    const double s0 = snr0.value();
    const double s1 = params.snr1().value();

    // Rate parameter of a reliable code with the Fano-adjusted mutual information.
    const double g = std::exp(2.0 * (0.5 * std::log1p(params.alpha() * s1) - 0.5 * fano_penalty(params)));
    const double adjusted_alpha = (g - 1.0) / s1;
    if (adjusted_alpha > s0 / s1 && adjusted_alpha <= 1.0) {
        const double d = equivalent_gaussian_variance(snr0, params.snr1(), adjusted_alpha).value();
        return d / (1.0 + d * s0);
    }
    // No admissible surrogate variance: evaluate d's closed form directly,
    // which goes negative exactly when the bound is vacuous.
    const double c = g / (1.0 + s0);
    const double d = (c - 1.0) / (s1 - c * s0);
    return d / (1.0 + d * s0);
}

double finite_length_bound_printed_ratio(const FiniteLengthParams& params, Snr snr0)
{
    require_valid(params, snr0);
    const double s0 = snr0.value();
    const double s1 = params.snr1().value();
    const double a = 1.0 + params.alpha() * s1;
    const double factor = std::exp2(2.0 * binary_entropy(params.pe())) * std::pow(a, params.pe());
    return (a - (1.0 + s0) * factor) / (factor * (s1 - s0 + s0 * (s1 - s0)));
}

}  // namespace immse
