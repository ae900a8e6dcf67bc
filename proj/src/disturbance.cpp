#include "immse/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "immse/superposition.hpp"

namespace immse {

namespace {

void require_alpha(double alpha)
{
    detail::require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
}

}  // namespace

DisturbanceConstraintSet::DisturbanceConstraintSet(std::vector<DisturbanceConstraint> entries)
    : entries_(std::move(entries))
{
    detail::require(!entries_.empty(), "disturbance constraint set is empty");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        require_alpha(entries_[i].alpha);
        detail::require(i == 0 || entries_[i - 1].snr < entries_[i].snr,
                        "disturbance constraint SNRs must be strictly increasing");
    }
}

RateDisturbancePoint rate_disturbance_point(Snr snr0, Snr snr1, double alpha)
{
    detail::require(snr0 < snr1, "snr0 must be strictly below snr1");
    require_alpha(alpha);
    return {Rate::from_nats(0.5 * std::log1p(alpha * snr1.value())),
            Rate::from_nats(0.5 * std::log1p(alpha * snr0.value()))};
}

double effective_alpha(const DisturbanceConstraintSet& constraints)
{
    const auto entries = constraints.entries();
    return std::min_element(entries.begin(), entries.end(),
                            [](const auto& a, const auto& b) { return a.alpha < b.alpha; })
        ->alpha;
}

Rate disturbance_max_rate(const DisturbanceConstraintSet& constraints, Snr snr_k)
{
    detail::require(constraints.entries().back().snr < snr_k, "target SNR must exceed every constraint SNR");
    return Rate::from_nats(0.5 * std::log1p(effective_alpha(constraints) * snr_k.value()));
}

std::string_view to_string(Strategy s) noexcept
{
    switch (s) {
    case Strategy::Superposition:
        return "superposition";
    case Strategy::FullPowerGaussian:
        return "full-power Gaussian";
    case Strategy::ReducedPowerGaussian:
        return "reduced-power Gaussian";
    }
    return "unknown";
}

double equal_disturbance_alpha(Snr snr0, Snr snr1, double beta)
{
    const MmseConstraint constraint{snr0, beta};
    const auto optimum = max_rate_multi(std::span(&constraint, 1), snr1);
    const double leaked = mi_curve(optimum.design)(snr0.value());
    const double alpha = std::expm1(2.0 * leaked) / snr0.value();
    // Maximum-rate designs are undecoded below snr0 and leak the full
    // 0.5 ln(1 + snr0) there, so this is 1 up to rounding.
    return std::abs(alpha - 1.0) < 1e-12 ? 1.0 : std::clamp(alpha, 0.0, 1.0);
}

MeasureComparison compare_measures(Snr snr0, Snr snr1, double beta, double alpha)
{
    MeasureComparison out;
    out.beta = beta;
    out.alpha = alpha;
    out.pairing = Pairing::Caller;
    out.mmse_constrained_rate = max_rate_single(snr0, snr1, beta);
    out.mmse_strategy = (beta == 0.0 || beta == 1.0) ? Strategy::FullPowerGaussian : Strategy::Superposition;
    out.disturbance_constrained_rate = rate_disturbance_point(snr0, snr1, alpha).max_rate;
    out.disturbance_strategy = alpha == 1.0 ? Strategy::FullPowerGaussian : Strategy::ReducedPowerGaussian;
    out.rate_gap_nats = out.mmse_constrained_rate.nats() - out.disturbance_constrained_rate.nats();
    return out;
}

MeasureComparison compare_measures(Snr snr0, Snr snr1, double beta)
{
    auto out = compare_measures(snr0, snr1, beta, equal_disturbance_alpha(snr0, snr1, beta));
    out.pairing = Pairing::EqualDisturbance;
    return out;
}

}  // namespace immse
