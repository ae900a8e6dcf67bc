#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "immse/errors.hpp"
#include "immse/oracle.hpp"
#include "rng.hpp"

namespace immse {

namespace {

void require_increasing(std::span<const Snr> grid)
{
    detail::require(!grid.empty(), "grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        detail::require(grid[i - 1] < grid[i], "grid must be strictly increasing");
    }
}

}  // namespace

void judge_crossings(CrossingReport& report, double sigmas)
{
    detail::require(report.q_values.size() == report.q_errors.size(), "one error per q value");
    report.first_nonnegative_index.reset();
    report.violation.reset();
    const auto& q = report.q_values;
    const auto& e = report.q_errors;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] >= 0.0) {
            report.first_nonnegative_index = i;
            break;
        }
    }
    for (std::size_t i = 0; i < q.size() && !report.violation; ++i) {
        if (q[i] < 0.0) {
            continue;
        }
        for (std::size_t j = i + 1; j < q.size(); ++j) {
            if (q[j] < -sigmas * std::hypot(e[i], e[j])) {
                report.violation = std::pair{i, j};
                break;
            }
        }
    }
    report.pass = !report.violation.has_value();
}

namespace {

void check_budget(std::size_t codewords, std::size_t samples, std::size_t points, const Tolerances& tol)
{
    const double work = static_cast<double>(codewords) * static_cast<double>(samples) * static_cast<double>(points);
    if (work > tol.posterior_work_budget) {
        throw BudgetExceeded("infeasible at this size: " + std::to_string(codewords) + " codewords x " +
                             std::to_string(samples) + " samples x " + std::to_string(points) +
                             " points exceeds the posterior work budget");
    }
}

struct Trapezoid {
    double value = 0.0;
    double error = 0.0;
};

}  // namespace

CrossingReport verify_single_crossing(const DiscreteCodebook& codebook, Variance variance, std::span<const Snr> grid,
                                      std::size_t samples, std::uint64_t seed, const Tolerances& tol)
{
    require_increasing(grid);
    detail::require(samples >= 1, "samples must be at least 1");
    check_budget(codebook.size(), samples, grid.size(), tol);

    CrossingReport report;
    report.method = Method::MonteCarlo;
    report.grid.assign(grid.begin(), grid.end());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto est = mmse_monte_carlo(codebook, grid[i], samples, detail::derive_seed(seed, i), tol);
        report.q_values.push_back(q_function(est.value, variance, grid[i]));
        report.q_errors.push_back(est.std_error);
    }
    judge_crossings(report, tol.significance_sigmas);
    return report;
}

CrossingReport verify_single_crossing_quadrature(std::span<const ScalarAtom> constellation, Variance variance,
                                                 std::span<const Snr> grid, const Tolerances& tol)
{
    require_increasing(grid);
    CrossingReport report;
    report.method = Method::Quadrature;
    report.grid.assign(grid.begin(), grid.end());
    for (const auto& g : grid) {
        const double mmse = scalar_mmse_quadrature(constellation, g, tol.hermite_order);
        report.q_values.push_back(q_function(mmse, variance, g));
        report.q_errors.push_back(g.value() == 0.0 ? 0.0 : tol.quadrature_floor);
    }
    judge_crossings(report, tol.significance_sigmas);
    return report;
}

IdentityReport verify_immse_identity(const DiscreteCodebook& codebook, Snr snr, std::size_t grid_density,
                                     std::size_t samples, std::uint64_t seed, const Tolerances& tol)
{
    detail::require(grid_density >= 1, "grid density must be at least 1");
    detail::require(samples >= 1, "samples must be at least 1");
    const std::size_t intervals = grid_density + (grid_density % 2);
    const std::size_t nodes = intervals + 1;
    check_budget(codebook.size(), samples, nodes + 1, tol);

    IdentityReport report;
    report.method = Method::MonteCarlo;
    report.snr = snr.value();
    report.nodes = nodes;

    const auto mi = mi_monte_carlo(codebook, snr, samples, detail::derive_seed(seed, 0), tol);
    report.mutual_information = mi.value;
    report.mi_std_error = mi.std_error;

    const double h = snr.value() / static_cast<double>(intervals);
    std::vector<double> values(nodes);
    std::vector<double> errors(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const Snr g(i == intervals ? snr.value() : h * static_cast<double>(i));
        const auto est = mmse_monte_carlo(codebook, g, samples, detail::derive_seed(seed, i + 1), tol);
        values[i] = est.value;
        errors[i] = est.std_error;
    }

    double fine = 0.0;
    double coarse = 0.0;
    double variance = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
        fine += w * values[i];
        variance += (w * h * errors[i]) * (w * h * errors[i]);
        if (i % 2 == 0) {
            coarse += w * values[i];
        }
    }
    fine *= h;
    coarse *= 2.0 * h;

    report.half_integral = 0.5 * fine;
    report.integral_std_error = 0.5 * std::sqrt(variance);
    report.quadrature_error = 0.5 * std::abs(fine - coarse) / 3.0;
    report.residual = std::abs(report.mutual_information - report.half_integral);
    report.budget = tol.significance_sigmas * std::hypot(report.mi_std_error, report.integral_std_error) +
                    report.quadrature_error;
    report.pass = report.residual <= report.budget;
    return report;
}

IdentityReport verify_immse_identity_quadrature(std::span<const ScalarAtom> constellation, Snr snr,
                                                std::size_t grid_density, const Tolerances& tol,
                                                std::size_t max_nodes)
{
    detail::require(grid_density >= 1, "grid density must be at least 1");
    detail::require(max_nodes >= grid_density + 1, "node cap is below the initial grid");

    const auto mmse = [&](double g) { return scalar_mmse_quadrature(constellation, Snr(g), tol.hermite_order); };

    struct Panel {
        double a, b, fa, fm, fb;
        double fine() const { return 0.25 * (b - a) * (fa + 2.0 * fm + fb); }
        double error() const { return std::abs(fine() - 0.5 * (b - a) * (fa + fb)) / 3.0; }
        bool operator<(const Panel& other) const { return error() < other.error(); }
    };

    IdentityReport report;
    report.method = Method::Quadrature;
    report.snr = snr.value();
    report.mutual_information = scalar_mi_quadrature(constellation, snr, tol.hermite_order);

    std::priority_queue<Panel> panels;
    const double s = snr.value();
    std::size_t nodes = 1;
    if (s > 0.0) {
        const double h = s / static_cast<double>(grid_density);
        double left = 0.0;
        double f_left = mmse(0.0);
        for (std::size_t i = 1; i <= grid_density; ++i) {
            const double right = i == grid_density ? s : h * static_cast<double>(i);
            const double f_right = mmse(right);
            const double mid = 0.5 * (left + right);
            panels.push({left, right, f_left, mmse(mid), f_right});
            left = right;
            f_left = f_right;
        }
        nodes = 2 * grid_density + 1;
    }

    constexpr double target = 1e-9;
    auto total_error = [&] {
        auto copy = panels;
        double sum = 0.0;
        while (!copy.empty()) {
            sum += copy.top().error();
            copy.pop();
        }
        return sum;
    };
    double error = total_error();
    while (!panels.empty() && error > target && nodes + 2 <= max_nodes) {
        const Panel p = panels.top();
        panels.pop();
        const double m = 0.5 * (p.a + p.b);
        const Panel left{p.a, m, p.fa, mmse(0.5 * (p.a + m)), p.fm};
        const Panel right{m, p.b, p.fm, mmse(0.5 * (m + p.b)), p.fb};
        error += left.error() + right.error() - p.error();
        panels.push(left);
        panels.push(right);
        nodes += 2;
    }

    double integral = 0.0;
    error = 0.0;
    while (!panels.empty()) {
        integral += panels.top().fine();
        error += panels.top().error();
        panels.pop();
    }

    report.nodes = nodes;
    report.half_integral = 0.5 * integral;
    report.quadrature_error = 0.5 * error;
    report.residual = std::abs(report.mutual_information - report.half_integral);
    report.budget = tol.significance_sigmas * (report.quadrature_error + tol.quadrature_floor * (1.0 + s));
    report.pass = report.residual <= report.budget;
    return report;
}

}  // namespace immse
