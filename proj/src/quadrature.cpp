#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include <gsl/gsl_integration.h>

#include "immse/errors.hpp"
#include "immse/kernels/posterior.hpp"
#include "immse/oracle.hpp"

namespace immse {

namespace {

// Gauss-Hermite rule for weight exp(-t^2), weights pre-divided by sqrt(pi)
// so that E[f(N)] = sum_m w_m f(sqrt(2) t_m) for N ~ N(0, 1).
struct HermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const HermiteRule& hermite_rule(std::size_t order)
{
    static std::mutex lock;
    static std::map<std::size_t, std::unique_ptr<HermiteRule>> cache;

    std::scoped_lock guard(lock);
    auto& slot = cache[order];
    if (!slot) {
        std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
            gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, order, 0.0, 1.0, 0.0, 0.0),
            &gsl_integration_fixed_free);
        if (!ws) {
            throw std::runtime_error("failed to build Gauss-Hermite rule");
        }
        auto rule = std::make_unique<HermiteRule>();
        const double* t = gsl_integration_fixed_nodes(ws.get());
        const double* w = gsl_integration_fixed_weights(ws.get());
        for (std::size_t m = 0; m < order; ++m) {
            rule->nodes.push_back(std::numbers::sqrt2 * t[m]);
            rule->weights.push_back(w[m] / std::sqrt(std::numbers::pi));
        }
        slot = std::move(rule);
    }
    return *slot;
}

void validate(std::span<const ScalarAtom> atoms)
{
    detail::require(!atoms.empty(), "constellation is empty");
    double total = 0.0;
    for (const auto& a : atoms) {
        detail::require(std::isfinite(a.point) && a.probability >= 0.0, "constellation atoms need finite points and p >= 0");
        total += a.probability;
    }
    detail::require(std::abs(total - 1.0) <= 1e-12, "constellation probabilities must sum to 1");
}

double prior_variance(std::span<const ScalarAtom> atoms)
{
    double mu = 0.0;
    for (const auto& a : atoms) {
        mu += a.probability * a.point;
    }
    double var = 0.0;
    for (const auto& a : atoms) {
        var += a.probability * (a.point - mu) * (a.point - mu);
    }
    return var;
}

// For every atom k and node m, the observation sqrt(gamma) x_k + sqrt(2) t_m
// is scored by the posterior kernel; `accumulate(k, m, mean, log_partition)`
// is summed with weight p_k w_m.
template <class Accumulate>
double integrate(std::span<const ScalarAtom> atoms, double gamma, std::size_t order, Accumulate&& accumulate)
{
    const auto& rule = hermite_rule(order);
    std::vector<double> points;
    std::vector<double> bias;
    std::vector<double> probs;
    for (const auto& a : atoms) {
        if (a.probability > 0.0) {
            points.push_back(a.point);
            probs.push_back(a.probability);
            bias.push_back(std::log(a.probability) - 0.5 * gamma * a.point * a.point);
        }
    }
    const double sqrt_gamma = std::sqrt(gamma);
    const std::size_t count = points.size() * order;
    std::vector<double> obs(count);
    for (std::size_t k = 0; k < points.size(); ++k) {
        for (std::size_t m = 0; m < order; ++m) {
            obs[k * order + m] = sqrt_gamma * points[k] + rule.nodes[m];
        }
    }
    std::vector<double> means(count);
    std::vector<double> log_partition(count);
    kernels::posterior(kernels::PosteriorProblem{points, bias, 1, sqrt_gamma},
                       kernels::PosteriorBatch{obs, count, means, log_partition});

    double total = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        double inner = 0.0;
        for (std::size_t m = 0; m < order; ++m) {
            const std::size_t i = k * order + m;
            inner += rule.weights[m] * accumulate(points[k], obs[i], means[i], log_partition[i]);
        }
        total += probs[k] * inner;
    }
    return total;
}

constexpr std::size_t kMaxOrder = 4096;
constexpr double kAgreement = 1e-12;

// The posterior mean switches over a width of about 1/sqrt(gamma), which a
// fixed low-order rule resolves poorly once gamma exceeds one. Doubling the
// order until two rules agree keeps the oracle at its accuracy floor.
template <class Accumulate>
double converged(std::span<const ScalarAtom> atoms, double gamma, std::size_t order, Accumulate&& accumulate)
{
    double previous = integrate(atoms, gamma, order, accumulate);
    while (order < kMaxOrder) {
        order *= 2;
        const double next = integrate(atoms, gamma, order, accumulate);
        if (std::abs(next - previous) <= kAgreement) {
            return next;
        }
        previous = next;
    }
    return previous;
}

}  // namespace

std::vector<ScalarAtom> scalar_atoms(const DiscreteCodebook& codebook)
{
    detail::require(codebook.dim() == 1, "scalar atoms need a one-dimensional codebook");
    const double p = 1.0 / static_cast<double>(codebook.size());
    std::vector<ScalarAtom> atoms;
    for (double x : codebook.data()) {
        atoms.push_back({x, p});
    }
    return atoms;
}

double scalar_mmse_quadrature(std::span<const ScalarAtom> constellation, Snr gamma, std::size_t order)
{
    validate(constellation);
    detail::require(order >= 2, "quadrature order must be at least 2");
    if (gamma.value() == 0.0) {
        return prior_variance(constellation);
    }
    return converged(constellation, gamma.value(), order, [](double x, double, double mean, double) {
        return (x - mean) * (x - mean);
    });
}

double scalar_mi_quadrature(std::span<const ScalarAtom> constellation, Snr gamma, std::size_t order)
{
    validate(constellation);
    detail::require(order >= 2, "quadrature order must be at least 2");
    if (gamma.value() == 0.0) {
        return 0.0;
    }
    const double sqrt_gamma = std::sqrt(gamma.value());
    const double half_gamma = 0.5 * gamma.value();
    return converged(constellation, gamma.value(), order, [&](double x, double y, double, double log_partition) {
        return sqrt_gamma * y * x - half_gamma * x * x - log_partition;
    });
}

}  // namespace immse
