#include <doctest.h>

#include <cmath>
#include <vector>

#include "immse/disturbance.hpp"
#include "immse/superposition.hpp"
#include "support.hpp"

using namespace immse;

TEST_CASE("rate-disturbance corner")
{
    const auto zero = rate_disturbance_point(Snr(2.0), Snr(2.5), 0.0);
    CHECK(zero.max_rate.nats() == 0.0);
    CHECK(zero.min_disturbance.nats() == 0.0);

    const auto full = rate_disturbance_point(Snr(2.0), Snr(2.5), 1.0);
    CHECK(full.max_rate == gaussian_capacity(Snr(2.5)));
    CHECK(full.min_disturbance == gaussian_capacity(Snr(2.0)));

    const auto mid = rate_disturbance_point(Snr(2.0), Snr(2.5), 0.4);
    CHECK(mid.max_rate.nats() == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
    CHECK(mid.min_disturbance.nats() == doctest::Approx(0.5 * std::log(1.8)).epsilon(1e-15));
    const double gap = 0.5 * testing::integrate([](double g) { return gaussian_mmse(Variance(0.4), Snr(g)); }, 2.0, 2.5);
    CHECK(mid.max_rate.nats() - mid.min_disturbance.nats() == doctest::Approx(gap).epsilon(1e-13));

    CHECK_THROWS_AS((void)rate_disturbance_point(Snr(2.5), Snr(2.0), 0.4), InvalidArgument);
}

TEST_CASE("effective alpha")
{
    CHECK(effective_alpha(DisturbanceConstraintSet({{Snr(1.0), 0.7}})) == 0.7);
    const DisturbanceConstraintSet two({{Snr(1.0), 0.7}, {Snr(2.0), 0.3}});
    CHECK(effective_alpha(two) == 0.3);
    // 0.3 meets both logarithmic constraints; anything larger breaks the second.
    for (const auto& c : two.entries()) {
        CHECK(0.5 * std::log1p(0.3 * c.snr.value()) <= 0.5 * std::log1p(c.alpha * c.snr.value()));
    }
    CHECK(0.5 * std::log1p(0.31 * 2.0) > 0.5 * std::log1p(0.3 * 2.0));
    CHECK(effective_alpha(DisturbanceConstraintSet({{Snr(1.0), 0.5}, {Snr(2.0), 0.5}, {Snr(3.0), 0.5}})) == 0.5);
    CHECK(disturbance_max_rate(two, Snr(3.0)).nats() == doctest::Approx(0.5 * std::log1p(0.9)).epsilon(1e-15));

    CHECK_THROWS_AS(DisturbanceConstraintSet({}), InvalidArgument);
    CHECK_THROWS_AS(DisturbanceConstraintSet({{Snr(2.0), 0.5}, {Snr(1.0), 0.5}}), InvalidArgument);
    CHECK_THROWS_AS(DisturbanceConstraintSet({{Snr(2.0), 1.5}}), InvalidArgument);
}

TEST_CASE("compare measures")
{
    const auto same = compare_measures(Snr(2.0), Snr(2.5), 1.0, 1.0);
    CHECK(same.mmse_constrained_rate == same.disturbance_constrained_rate);
    CHECK(same.mmse_constrained_rate.nats() == doctest::Approx(0.5 * std::log(3.5)).epsilon(1e-15));
    CHECK(same.mmse_strategy == Strategy::FullPowerGaussian);
    CHECK(same.disturbance_strategy == Strategy::FullPowerGaussian);

    const auto zero = compare_measures(Snr(2.0), Snr(2.5), 0.0, 0.8);
    CHECK(zero.mmse_constrained_rate.nats() == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    CHECK(zero.disturbance_constrained_rate.nats() == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));

    // Equal-disturbance pairing: the superposition design leaks I(2) = 0.5 ln 3.
    const auto eq = compare_measures(Snr(2.0), Snr(2.5), 0.4);
    CHECK(eq.pairing == Pairing::EqualDisturbance);
    const auto design = make_design(SnrLadder({Snr(2.0), Snr(2.5)}), {0.4});
    CHECK(0.5 * std::log1p(eq.alpha * 2.0) == doctest::Approx(mi_curve(design)(2.0)).epsilon(1e-14));
    CHECK(eq.mmse_strategy == Strategy::Superposition);
    CHECK(eq.mmse_constrained_rate != eq.disturbance_constrained_rate);
    CHECK(eq.rate_gap_nats == doctest::Approx(eq.mmse_constrained_rate.nats() - eq.disturbance_constrained_rate.nats()));
    CHECK(to_string(Strategy::ReducedPowerGaussian) == "reduced-power Gaussian");
}

TEST_CASE("property: effective alpha is the minimum and extra loose constraints are inert")
{
    testing::Rng rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = rng.index(1, 8);
        std::vector<DisturbanceConstraint> entries;
        double s = 0.0;
        double lowest = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            s += rng.uniform(0.01, 2.0);
            const double a = rng.uniform(0.0, 1.0);
            lowest = std::min(lowest, a);
            entries.push_back({Snr(s), a});
        }
        const DisturbanceConstraintSet set(entries);
        CHECK(effective_alpha(set) == lowest);

        entries.push_back({Snr(s + 1.0), rng.uniform(lowest, 1.0)});
        CHECK(effective_alpha(DisturbanceConstraintSet(entries)) == lowest);
    }
}

TEST_CASE("property: rate difference equals the integrated gaussian mmse")
{
    testing::Rng rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        const double s0 = rng.uniform(0.0, 10.0);
        const double s1 = s0 + rng.uniform(0.01, 10.0);
        const double alpha = rng.uniform(0.0, 1.0);
        const auto p = rate_disturbance_point(Snr(s0), Snr(s1), alpha);
        const double diff = p.max_rate.nats() - p.min_disturbance.nats();
        CHECK(diff == doctest::Approx(0.5 * std::log((1.0 + alpha * s1) / (1.0 + alpha * s0))).epsilon(1e-13));
        const double half = 0.5 * testing::integrate([&](double g) { return gaussian_mmse(Variance(alpha), Snr(g)); }, s0, s1);
        CHECK(std::abs(diff - half) <= 1e-8);
    }
}
