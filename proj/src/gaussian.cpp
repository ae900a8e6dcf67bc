#include "immse/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace immse {

double gaussian_mmse(Variance variance, Snr gamma) noexcept
{
    const double v = variance.value();
    return v / (1.0 + v * gamma.value());
}

Rate gaussian_capacity(Snr gamma) noexcept
{
    return Rate::from_nats(0.5 * std::log1p(gamma.value()));
}

double q_function(double mmse_value, Variance variance, Snr gamma) noexcept
{
    return gaussian_mmse(variance, gamma) - mmse_value;
}

double binary_entropy(double p)
{
    detail::require(p >= 0.0 && p <= 1.0, "binary_entropy: probability outside [0, 1]");

    // Evaluate on the pair (1 - s, s) with s >= 1/2. Both p and 1 - p map to
    // the same pair, so h(p) == h(1 - p) bit for bit.
    const double s = p >= 0.5 ? p : 1.0 - p;
    const double r = 1.0 - s;
    if (r == 0.0) {
        return 0.0;
    }
    const double r_term = r * std::log2(r);
    const double s_term = s * std::log1p(-r) * std::numbers::log2e;
    return -(r_term + s_term);
}

}  // namespace immse
