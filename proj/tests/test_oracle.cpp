#include <doctest.h>

#include <cmath>
#include <vector>

#include "immse/codebook.hpp"
#include "immse/oracle.hpp"
#include "immse/superposition.hpp"
#include "support.hpp"

using namespace immse;

namespace {

const std::vector<ScalarAtom> kBpsk{{1.0, 0.5}, {-1.0, 0.5}};

std::vector<Snr> snrs(std::initializer_list<double> values)
{
    std::vector<Snr> out;
    for (double v : values) {
        out.push_back(Snr(v));
    }
    return out;
}

}  // namespace

TEST_CASE("codebook construction and validation")
{
    const auto b = DiscreteCodebook::bpsk();
    CHECK(b.size() == 2);
    CHECK(b.dim() == 1);
    CHECK(b.average_power() == 1.0);
    CHECK(b.prior_variance() == 1.0);

    CHECK_THROWS_AS(DiscreteCodebook::from_rows({{1.0, 1.5}}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteCodebook::from_rows({{1.0}, {0.5, 0.5}}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteCodebook(0, {}), InvalidArgument);
    CHECK_NOTHROW(DiscreteCodebook::from_rows({{1.0, -1.0}, {std::sqrt(2.0), 0.0}}));

    const auto r = random_gaussian_codebook(16, 4, 3);
    double top = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        top = std::max(top, r.power(i));
    }
    CHECK(top == doctest::Approx(1.0).epsilon(1e-14));
    const auto again = random_gaussian_codebook(16, 4, 3);
    CHECK(std::equal(r.data().begin(), r.data().end(), again.data().begin()));
}

TEST_CASE("layered codebook")
{
    const auto l = make_layered_codebook(6, 5, 64, 0.3, 17);
    CHECK(l.combined.size() == 30);
    CHECK(l.scale <= 1.0);
    const double s2 = l.scale * l.scale;
    CHECK(l.common.average_power() / s2 == doctest::Approx(0.7).epsilon(0.15));
    CHECK(l.priv.average_power() / s2 == doctest::Approx(0.3).epsilon(0.15));

    // Identical private codewords collapse in the sum.
    const auto tiny = make_layered_codebook(3, 1, 2, 0.5, 4);
    CHECK(tiny.combined.size() == 3);

    const auto design = make_design(SnrLadder({Snr(2.0), Snr(2.5)}), {0.4});
    const auto sized = layered_codebook_for(design, 4, 1);
    CHECK(sized.common.size() == static_cast<std::size_t>(std::round(std::exp(4 * design.layer_rates()[0].nats()))));
    CHECK(sized.priv.size() == static_cast<std::size_t>(std::round(std::exp(4 * design.layer_rates()[1].nats()))));
}

TEST_CASE("conditional mean")
{
    const auto single = DiscreteCodebook::from_rows({{0.3, -0.4}});
    const auto m = conditional_mean(single, Snr(3.0), std::vector<double>{5.0, 1.0});
    CHECK(m[0] == 0.3);
    CHECK(m[1] == -0.4);

    const auto b = DiscreteCodebook::bpsk();
    for (double y : {-2.0, -0.1, 0.0, 0.7, 4.0}) {
        CHECK(conditional_mean(b, Snr(1.7), std::vector<double>{y})[0] == doctest::Approx(std::tanh(std::sqrt(1.7) * y)).epsilon(1e-14));
    }

    const auto r = random_gaussian_codebook(7, 3, 2);
    const auto avg = r.mean();
    const auto at_zero = conditional_mean(r, Snr(0.0), std::vector<double>{1.0, -2.0, 0.5});
    for (std::size_t d = 0; d < 3; ++d) {
        CHECK(at_zero[d] == doctest::Approx(avg[d]).epsilon(1e-14));
    }
    CHECK_THROWS_AS((void)conditional_mean(r, Snr(1.0), std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("scalar quadrature values")
{
    const std::vector<ScalarAtom> point{{0.4, 1.0}};
    CHECK(scalar_mmse_quadrature(point, Snr(2.0)) == 0.0);
    CHECK(scalar_mmse_quadrature(kBpsk, Snr(0.0)) == 1.0);
    CHECK(scalar_mmse_quadrature(kBpsk, Snr(1.0)) == doctest::Approx(0.44959950920667283).epsilon(1e-10));
    CHECK(scalar_mmse_quadrature(kBpsk, Snr(2.0)) == doctest::Approx(0.23101822192929562).epsilon(1e-10));
    CHECK(std::abs(scalar_mmse_quadrature(kBpsk, Snr(16.0)) - 9.8218684018198517e-05) < 1e-11);
    CHECK(scalar_mi_quadrature(kBpsk, Snr(0.0)) == 0.0);
    CHECK(scalar_mi_quadrature(kBpsk, Snr(1.0)) == doctest::Approx(0.33683082034683160).epsilon(1e-10));
    CHECK(scalar_mi_quadrature(kBpsk, Snr(2.0)) == doctest::Approx(0.50007213606684494).epsilon(1e-10));
    CHECK(scalar_mi_quadrature(kBpsk, Snr(16.0)) == doctest::Approx(0.69305364548291993).epsilon(1e-10));

    const std::vector<ScalarAtom> unnormalized{{1.0, 0.5}, {-1.0, 0.4}};
    CHECK_THROWS_AS((void)scalar_mmse_quadrature(unnormalized, Snr(1.0)), InvalidArgument);
    CHECK_THROWS_AS((void)scalar_mi_quadrature(unnormalized, Snr(1.0)), InvalidArgument);
}

TEST_CASE("scalar quadrature on a skewed constellation against adaptive integration")
{
    const std::vector<ScalarAtom> atoms{{-0.9, 0.2}, {0.1, 0.5}, {0.8, 0.3}};
    for (double g : {0.5, 3.0, 12.0}) {
        const double sg = std::sqrt(g);
        double reference = 0.0;
        for (const auto& a : atoms) {
            reference += a.probability * testing::integrate_line([&](double z) {
                const double y = sg * a.point + z;
                double top = -HUGE_VAL;
                for (const auto& b : atoms) {
                    top = std::max(top, std::log(b.probability) + sg * y * b.point - 0.5 * g * b.point * b.point);
                }
                double num = 0.0;
                double den = 0.0;
                for (const auto& b : atoms) {
                    const double w = std::exp(std::log(b.probability) + sg * y * b.point - 0.5 * g * b.point * b.point - top);
                    num += w * b.point;
                    den += w;
                }
                const double e = a.point - num / den;
                return e * e * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
            });
        }
        CHECK(std::abs(scalar_mmse_quadrature(atoms, Snr(g)) - reference) < 1e-10);
    }
}

TEST_CASE("monte carlo mmse")
{
    const auto r = random_gaussian_codebook(9, 2, 8);
    const auto zero = mmse_monte_carlo(r, Snr(0.0), 100, 1);
    CHECK(zero.value == doctest::Approx(r.prior_variance()).epsilon(1e-14));
    CHECK(zero.std_error == 0.0);

    const auto b = DiscreteCodebook::bpsk();
    const auto est = mmse_monte_carlo(b, Snr(1.0), 1000000, 77);
    CHECK(std::abs(est.value - scalar_mmse_quadrature(kBpsk, Snr(1.0))) <= 3.0 * est.std_error);
    CHECK(est.samples == 1000000);
    CHECK(est.seed == 77);

    const auto far = mmse_monte_carlo(b, Snr(200.0), 10000, 3);
    CHECK(far.value < 1e-20);

    const auto a = mmse_monte_carlo(r, Snr(1.1), 30000, 5);
    const auto a2 = mmse_monte_carlo(r, Snr(1.1), 30000, 5);
    CHECK(a.value == a2.value);
    CHECK(a.std_error == a2.std_error);
    const auto quad = mmse_monte_carlo(r, Snr(1.1), 120000, 5);
    CHECK(quad.std_error / a.std_error == doctest::Approx(0.5).epsilon(0.15));
    CHECK_THROWS_AS((void)mmse_monte_carlo(r, Snr(1.0), 0, 1), InvalidArgument);
}

TEST_CASE("monte carlo mutual information")
{
    const auto single = DiscreteCodebook::from_rows({{0.5, 0.5}});
    CHECK(mi_monte_carlo(single, Snr(3.0), 1000, 1).value == 0.0);
    const auto r = random_gaussian_codebook(9, 2, 8);
    CHECK(mi_monte_carlo(r, Snr(0.0), 1000, 1).value == 0.0);

    const auto b = DiscreteCodebook::bpsk();
    const auto est = mi_monte_carlo(b, Snr(1.0), 400000, 12);
    const double half = 0.5 * testing::integrate([](double g) { return scalar_mmse_quadrature(kBpsk, Snr(g)); }, 0.0, 1.0, 1e-11);
    CHECK(std::abs(est.value - half) <= 3.0 * est.std_error + 1e-10);

    const auto big = mi_monte_carlo(r, Snr(50.0), 20000, 4);
    CHECK(big.value >= -3.0 * big.std_error);
    CHECK(big.value <= std::log(9.0) / 2.0 + 3.0 * big.std_error);
}

TEST_CASE("crossing verdict rule")
{
    CrossingReport r;
    r.q_values = {-0.1, 0.0, 0.02, -0.001};
    r.q_errors = {0.001, 0.001, 0.001, 0.001};
    judge_crossings(r, 3.0);
    CHECK(r.pass);
    CHECK(r.first_nonnegative_index == 1u);

    r.q_values = {-0.1, 0.01, 0.02, -0.01};
    judge_crossings(r, 3.0);
    CHECK_FALSE(r.pass);
    REQUIRE(r.violation.has_value());
    CHECK(r.violation->first == 1u);
    CHECK(r.violation->second == 3u);

    r.q_values = {-0.1, -0.05, -0.01, -0.2};
    judge_crossings(r, 3.0);
    CHECK(r.pass);
    CHECK_FALSE(r.first_nonnegative_index.has_value());
}

TEST_CASE("single crossing checks")
{
    const auto grid = snrs({0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0});
    const auto q = verify_single_crossing_quadrature(kBpsk, Variance(1.0), grid);
    CHECK(q.pass);
    CHECK(q.q_values[0] == 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(q.q_values[i] > 0.0);
    }
    CHECK(q.first_nonnegative_index == 0u);

    const auto r = random_gaussian_codebook(8, 2, 21);
    const auto none = verify_single_crossing(r, Variance(0.0), grid, 20000, 3);
    CHECK(none.pass);
    for (double v : none.q_values) {
        CHECK(v <= 0.0);
    }

    const auto big = random_gaussian_codebook(16, 4, 22);
    const auto rep = verify_single_crossing(big, Variance(big.prior_variance()), grid, 20000, 4);
    CHECK(rep.pass);

    CHECK_THROWS_AS((void)verify_single_crossing(r, Variance(1.0), snrs({1.0, 0.5}), 100, 1), InvalidArgument);
    Tolerances tight;
    tight.posterior_work_budget = 1000.0;
    CHECK_THROWS_AS((void)verify_single_crossing(r, Variance(1.0), grid, 1000, 1, tight), BudgetExceeded);
}

TEST_CASE("identity checks")
{
    const auto single = DiscreteCodebook::from_rows({{0.2, -0.9}});
    const auto zero = verify_immse_identity(single, Snr(2.0), 8, 1000, 1);
    CHECK(zero.residual == 0.0);
    CHECK(zero.pass);

    const auto q = verify_immse_identity_quadrature(kBpsk, Snr(2.0), 16);
    CHECK(q.residual < 1e-3);
    CHECK(q.pass);

    const auto r = random_gaussian_codebook(8, 2, 31);
    const auto mc = verify_immse_identity(r, Snr(1.5), 16, 50000, 9);
    CHECK(mc.pass);
    const auto again = verify_immse_identity(r, Snr(1.5), 16, 50000, 9);
    CHECK(again.residual == mc.residual);
    CHECK(again.budget == mc.budget);
    CHECK(mc.nodes == 17);

    Tolerances tight;
    tight.posterior_work_budget = 1e5;
    CHECK_THROWS_AS((void)verify_immse_identity(r, Snr(1.5), 16, 50000, 9, tight), BudgetExceeded);
}

TEST_CASE("property: mmse estimates are bounded and nonincreasing")
{
    testing::Rng rng(61);
    const auto grid = snrs({0.0, 0.5, 1.0, 2.0, 4.0, 8.0});
    for (int trial = 0; trial < 20; ++trial) {
        const auto cb = random_gaussian_codebook(rng.index(1, 16), rng.index(1, 4), rng.index(0, 1u << 30));
        double prev = HUGE_VAL;
        double prev_se = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto e = mmse_monte_carlo(cb, grid[i], 20000, 100 + i);
            CHECK(e.value >= 0.0);
            CHECK(e.value <= cb.prior_variance() + 3.0 * e.std_error + 1e-15);
            CHECK(cb.prior_variance() <= 1.0 + 1e-12);
            CHECK(e.value <= prev + 3.0 * std::hypot(e.std_error, prev_se));
            prev = e.value;
            prev_se = e.std_error;
        }
    }
}

TEST_CASE("property: crossing verdicts pass on small random instances")
{
    testing::Rng rng(62);
    const auto grid = snrs({0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0});
    int passes = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        const auto cb = random_gaussian_codebook(rng.index(1, 16), rng.index(1, 4), rng.index(0, 1u << 30));
        const Variance v(rng.uniform(0.0, 1.0));
        passes += verify_single_crossing(cb, v, grid, 20000, rng.index(0, 1u << 30)).pass ? 1 : 0;
    }
    CHECK(passes >= trials - 1);
}

TEST_CASE("property: layered codebooks approach the gaussian mmse below the first threshold")
{
    // Trend only: the gap to 1/(1 + gamma) at gamma = 1 shrinks from n = 2 to n = 8.
    const auto design = make_design(SnrLadder({Snr(2.0), Snr(2.5)}), {0.4});
    double gap[3] = {};
    const std::size_t dims[3] = {2, 4, 8};
    for (int k = 0; k < 3; ++k) {
        const auto l = layered_codebook_for(design, dims[k], 40 + k);
        const auto e = mmse_monte_carlo(l.combined, Snr(1.0), 40000, 7);
        gap[k] = std::abs(e.value - 0.5);
        MESSAGE("n = " << dims[k] << ", M = " << l.combined.size() << ", mmse = " << e.value << " +- " << e.std_error);
    }
    CHECK(gap[2] < gap[0]);
}
