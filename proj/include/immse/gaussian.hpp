#pragma once

#include <cmath>
#include <compare>
#include <numbers>

#include "immse/errors.hpp"

namespace immse {

/// Linear signal-to-noise ratio. Nonnegative and finite.
class Snr {
public:
    constexpr Snr() = default;
    explicit Snr(double value) : value_(value)
    {
        detail::require(std::isfinite(value) && value >= 0.0, "SNR must be finite and nonnegative");
    }

    static Snr from_db(double db) { return Snr(std::pow(10.0, db / 10.0)); }

    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    constexpr auto operator<=>(const Snr&) const = default;

private:
    double value_ = 0.0;
};

/// Variance of a Gaussian surrogate input, in [0, 1].
class Variance {
public:
    constexpr Variance() = default;
    explicit Variance(double value) : value_(value)
    {
        detail::require(std::isfinite(value) && value >= 0.0 && value <= 1.0,
                        "Gaussian surrogate variance must lie in [0, 1]");
    }

    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    constexpr auto operator<=>(const Variance&) const = default;

private:
    double value_ = 0.0;
};

/// Information rate. Always held in nats; bits only at I/O boundaries.
class Rate {
public:
    constexpr Rate() = default;

    static Rate from_nats(double nats)
    {
        detail::require(std::isfinite(nats) && nats >= 0.0, "rate must be finite and nonnegative");
        Rate r;
        r.nats_ = nats;
        return r;
    }
    static Rate from_bits(double bits) { return from_nats(bits * std::numbers::ln2); }

    [[nodiscard]] constexpr double nats() const noexcept { return nats_; }
    [[nodiscard]] constexpr double bits() const noexcept { return nats_ * std::numbers::log2e; }

    constexpr auto operator<=>(const Rate&) const = default;

private:
    double nats_ = 0.0;
};

/// MMSE of a zero-mean Gaussian input of the given variance: v / (1 + v * gamma).
[[nodiscard]] double gaussian_mmse(Variance variance, Snr gamma) noexcept;

/// Point-to-point capacity, 0.5 * ln(1 + gamma).
[[nodiscard]] Rate gaussian_capacity(Snr gamma) noexcept;

/// Gap between the Gaussian-surrogate MMSE and a code's normalized MMSE.
[[nodiscard]] double q_function(double mmse_value, Variance variance, Snr gamma) noexcept;

/// Binary entropy in bits; exact 0 at p in {0, 1}. Throws for p outside [0, 1].
[[nodiscard]] double binary_entropy(double p);

}  // namespace immse
