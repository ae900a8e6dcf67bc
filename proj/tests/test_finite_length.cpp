#include <doctest.h>

#include <cmath>

#include "immse/finite_length.hpp"
#include "immse/superposition.hpp"
#include "support.hpp"

using namespace immse;

namespace {

const Snr kSnr1(2.5179);
const double kAlpha = 1.0 / 2.5179;

}  // namespace

TEST_CASE("fano mutual information bound")
{
    const FiniteLengthParams exact(kSnr1, kAlpha, 0.0);
    CHECK(fano_mi_lower_bound(exact).nats() == doctest::Approx(0.5 * std::log1p(kAlpha * 2.5179)).epsilon(1e-15));

    const FiniteLengthParams lossy(kSnr1, kAlpha, 1e-5);
    CHECK(fano_mi_lower_bound(lossy).nats() == doctest::Approx(0.34644499533942032).epsilon(1e-13));
    CHECK(std::exp(2.0 * fano_mi_lower_bound(lossy).nats()) == doctest::Approx(1.9994856863787552).epsilon(1e-13));

    const FiniteLengthParams half(kSnr1, kAlpha, 0.5);
    CHECK(fano_mi_lower_bound(half).nats() == 0.0);
}

TEST_CASE("finite-length bound values")
{
    const FiniteLengthParams lossy(kSnr1, kAlpha, 1e-5);
    const auto b = finite_length_mmse_lower_bound(lossy, Snr(0.5));
    CHECK_FALSE(b.vacuous);
    CHECK(b.value == doctest::Approx(0.16501831487478904).epsilon(1e-12));
    const double zero_error = mmse_lower_bound_asymptotic(Snr(0.5), kSnr1, kAlpha);
    CHECK(zero_error - b.value > 0.0);
    CHECK(zero_error - b.value < 2e-4);

    const auto vac = finite_length_mmse_lower_bound(FiniteLengthParams(kSnr1, kAlpha, 0.5), Snr(0.5));
    CHECK(vac.vacuous);
    CHECK(vac.value == 0.0);
}

TEST_CASE("finite-length bound validity and parameters")
{
    const FiniteLengthParams p(kSnr1, kAlpha, 1e-5);
    CHECK_THROWS_AS((void)finite_length_mmse_lower_bound(p, Snr(1.0)), OutOfValidity);
    CHECK_THROWS_AS((void)finite_length_mmse_lower_bound(p, Snr(2.0)), OutOfValidity);
    CHECK_THROWS_AS(FiniteLengthParams(kSnr1, 1.1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(FiniteLengthParams(kSnr1, 0.5, 0.6), InvalidArgument);
    CHECK_THROWS_AS(FiniteLengthParams(kSnr1, 0.5, -0.1), InvalidArgument);

    const auto from_rate = FiniteLengthParams::from_rate(kSnr1, Rate::from_nats(0.5 * std::log(2.0)), 1e-5);
    CHECK(from_rate.alpha() == doctest::Approx(kAlpha).epsilon(1e-15));
    CHECK(from_rate.rate().nats() == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS((void)FiniteLengthParams::from_rate(kSnr1, Rate::from_nats(1.0), 0.0), OutOfValidity);
}

TEST_CASE("property: zero error probability reproduces the asymptotic bound exactly")
{
    testing::Rng rng(31);
    for (int i = 0; i < 10000; ++i) {
        const double s1 = rng.uniform(0.1, 20.0);
        const double alpha = rng.uniform(0.0, 1.0);
        const double s0 = rng.uniform(0.0, 1.0) * alpha * s1;
        if (!(s0 < alpha * s1)) {
            continue;
        }
        const FiniteLengthParams p(Snr(s1), alpha, 0.0);
        CHECK(finite_length_mmse_lower_bound(p, Snr(s0)).value ==
              mmse_lower_bound_asymptotic(Snr(s0), Snr(s1), alpha));
    }
}

TEST_CASE("property: sandwich between zero and the uncoded mmse")
{
    testing::Rng rng(32);
    for (int i = 0; i < 10000; ++i) {
        const double s1 = rng.uniform(0.1, 20.0);
        const double alpha = rng.uniform(0.01, 1.0);
        const double pe = rng.uniform(0.0, 0.5);
        const double s0 = rng.uniform(0.0, 0.999) * alpha * s1;
        const auto b = finite_length_mmse_lower_bound(FiniteLengthParams(Snr(s1), alpha, pe), Snr(s0));
        CHECK(b.value >= 0.0);
        CHECK(b.value <= 1.0 / (1.0 + s0));
    }
}

TEST_CASE("property: three evaluation routes agree")
{
    testing::Rng rng(33);
    for (int i = 0; i < 10000; ++i) {
        const double s1 = rng.uniform(0.1, 20.0);
        const double alpha = rng.uniform(0.01, 1.0);
        const double pe = rng.uniform(0.0, 0.1);
        const double s0 = rng.uniform(0.0, 0.999) * alpha * s1;
        const FiniteLengthParams p(Snr(s1), alpha, pe);
        const auto b = finite_length_mmse_lower_bound(p, Snr(s0));
        const double via_d = finite_length_bound_via_variance(p, Snr(s0));
        const double printed = finite_length_bound_printed_ratio(p, Snr(s0));
        CHECK(std::abs(via_d - printed) <= 1e-12);
        CHECK(std::abs(std::max(via_d, 0.0) - b.value) <= 1e-12);
        if (std::abs(printed) > 1e-12) {
            CHECK(b.vacuous == (printed < 0.0));
        }
    }
}

TEST_CASE("property: bound decreases with pe and converges as pe vanishes")
{
    testing::Rng rng(34);
    for (int i = 0; i < 500; ++i) {
        const double s1 = rng.uniform(0.5, 10.0);
        const double alpha = rng.uniform(0.1, 1.0);
        const double s0 = rng.uniform(0.0, 0.9) * alpha * s1;
        double prev = finite_length_mmse_lower_bound(FiniteLengthParams(Snr(s1), alpha, 0.0), Snr(s0)).value;
        const double base = prev;
        for (double pe = 1e-12; pe < 0.05; pe *= 3.0) {
            const double v = finite_length_mmse_lower_bound(FiniteLengthParams(Snr(s1), alpha, pe), Snr(s0)).value;
            CHECK(v <= prev);
            prev = v;
        }
        const double tiny = finite_length_mmse_lower_bound(FiniteLengthParams(Snr(s1), alpha, 1e-14), Snr(s0)).value;
        CHECK(std::abs(tiny - base) < 1e-11);
    }
}
