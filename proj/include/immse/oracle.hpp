#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "immse/codebook.hpp"
#include "immse/gaussian.hpp"
#include "immse/tolerances.hpp"

namespace immse {

/// Monte Carlo estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Normalized trace of the MMSE matrix, (1/n) E|X - E[X|Y]|^2.
using MmseEstimate = Estimate;
/// Normalized mutual information in nats per dimension.
using MiEstimate = Estimate;

/// E[X | sqrt(gamma) X + N = y] under the uniform prior.
[[nodiscard]] std::vector<double> conditional_mean(const DiscreteCodebook& codebook, Snr gamma,
                                                   std::span<const double> observation);

/// Deterministic for a fixed seed: samples are drawn in fixed-size chunks,
/// each from its own engine keyed by (seed, chunk index).
[[nodiscard]] MmseEstimate mmse_monte_carlo(const DiscreteCodebook& codebook, Snr gamma, std::size_t samples,
                                            std::uint64_t seed, const Tolerances& tol = kDefaultTolerances);

[[nodiscard]] MiEstimate mi_monte_carlo(const DiscreteCodebook& codebook, Snr gamma, std::size_t samples,
                                        std::uint64_t seed, const Tolerances& tol = kDefaultTolerances);

/// One point of a scalar (n = 1) constellation.
struct ScalarAtom {
    double point = 0.0;
    double probability = 0.0;
};

/// Uniform atoms of a one-dimensional codebook.
[[nodiscard]] std::vector<ScalarAtom> scalar_atoms(const DiscreteCodebook& codebook);

/// MMSE of a scalar constellation by Gauss-Hermite quadrature of the
/// conditional squared error. Starts at `order` nodes and doubles the order
/// (up to 4096) until successive rules agree to 1e-12. Exact prior variance
/// at gamma = 0.
[[nodiscard]] double scalar_mmse_quadrature(std::span<const ScalarAtom> constellation, Snr gamma,
                                            std::size_t order = kDefaultTolerances.hermite_order);

/// Mutual information (nats) of a scalar constellation by Gauss-Hermite
/// quadrature, with the same order doubling.
[[nodiscard]] double scalar_mi_quadrature(std::span<const ScalarAtom> constellation, Snr gamma,
                                          std::size_t order = kDefaultTolerances.hermite_order);

enum class Method { MonteCarlo, Quadrature };

/// q(gamma) = sigma^2 / (1 + sigma^2 gamma) - MMSE(gamma) along a grid.
struct CrossingReport {
    Method method = Method::MonteCarlo;
    std::vector<Snr> grid;
    std::vector<double> q_values;
    /// Standard error (Monte Carlo) or accuracy floor (quadrature) per point.
    std::vector<double> q_errors;
    bool pass = true;
    std::optional<std::size_t> first_nonnegative_index;
    /// First offending (nonnegative, significantly negative) index pair.
    std::optional<std::pair<std::size_t, std::size_t>> violation;
};

/// Sets pass, first_nonnegative_index and violation from q_values and
/// q_errors: fails only if some q_i >= 0 is followed by
/// q_j < -k * sqrt(e_i^2 + e_j^2).
void judge_crossings(CrossingReport& report, double sigmas);

/// Monte Carlo q along the grid, judged with k = tol.significance_sigmas.
[[nodiscard]] CrossingReport verify_single_crossing(const DiscreteCodebook& codebook, Variance variance,
                                                    std::span<const Snr> grid, std::size_t samples,
                                                    std::uint64_t seed, const Tolerances& tol = kDefaultTolerances);

[[nodiscard]] CrossingReport verify_single_crossing_quadrature(std::span<const ScalarAtom> constellation,
                                                               Variance variance, std::span<const Snr> grid,
                                                               const Tolerances& tol = kDefaultTolerances);

/// |I(snr) - 1/2 int_0^snr MMSE| against its error budget.
struct IdentityReport {
    Method method = Method::MonteCarlo;
    double snr = 0.0;
    double mutual_information = 0.0;
    double mi_std_error = 0.0;
    double half_integral = 0.0;
    double integral_std_error = 0.0;
    /// Trapezoid error estimate (Richardson, already halved like the integral).
    double quadrature_error = 0.0;
    double residual = 0.0;
    double budget = 0.0;
    std::size_t nodes = 0;
    bool pass = false;
};

/// Monte Carlo route: uniform trapezoid grid of `grid_density` intervals
/// (rounded up to even), independent MMSE estimates per node. Throws
/// BudgetExceeded when M * samples * nodes exceeds tol.posterior_work_budget.
[[nodiscard]] IdentityReport verify_immse_identity(const DiscreteCodebook& codebook, Snr snr,
                                                   std::size_t grid_density, std::size_t samples,
                                                   std::uint64_t seed, const Tolerances& tol = kDefaultTolerances);

/// Deterministic scalar route: quadrature MMSE and mutual information,
/// trapezoid refined by bisection where the local error estimate is large,
/// capped at `max_nodes`.
[[nodiscard]] IdentityReport verify_immse_identity_quadrature(std::span<const ScalarAtom> constellation, Snr snr,
                                                              std::size_t grid_density,
                                                              const Tolerances& tol = kDefaultTolerances,
                                                              std::size_t max_nodes = 1 << 14);

}  // namespace immse
