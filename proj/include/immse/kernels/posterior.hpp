#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace immse::kernels {

/// Posterior scoring of a finite constellation under unit-variance Gaussian
/// noise. For each observation y the score of codeword j is
///
///     s_j = bias_j + sqrt_gamma * <y, x_j>
///
/// where bias_j = ln p_j - gamma/2 * |x_j|^2. The kernel returns the
/// posterior mean sum_j w_j x_j / sum_j w_j with w_j = exp(s_j) and the log
/// partition ln sum_j exp(s_j), both computed after max subtraction.
struct PosteriorProblem {
    std::span<const double> codebook;  ///< M x n, row-major
    std::span<const double> bias;      ///< M entries
    std::size_t dim = 0;               ///< n
    double sqrt_gamma = 0.0;
};

/// Observations and means are dimension-major: element (i, d) at d * count + i.
struct PosteriorBatch {
    std::span<const double> observations;
    std::size_t count = 0;
    std::span<double> means;          ///< n * count
    std::span<double> log_partition;  ///< count
};

enum class Isa { Scalar, Avx2 };

[[nodiscard]] std::string_view to_string(Isa isa) noexcept;

/// Reference implementation.
void posterior_scalar(const PosteriorProblem& problem, const PosteriorBatch& batch);

/// Four observations per AVX2 lane group; tail handled by the scalar kernel.
/// Only callable when avx2_available().
void posterior_avx2(const PosteriorProblem& problem, const PosteriorBatch& batch);

/// exp(x) for x <= 0 using the AVX2 polynomial. Exposed for testing.
void exp_nonpositive_avx2(std::span<const double> x, std::span<double> out);

[[nodiscard]] bool avx2_available() noexcept;

/// ISA used by posterior(): the best available one, unless overridden by
/// set_isa_override() or IMMSE_FORCE_SCALAR=1 in the environment.
[[nodiscard]] Isa active_isa() noexcept;
void set_isa_override(std::optional<Isa> isa);

/// Dispatches to the active kernel.
void posterior(const PosteriorProblem& problem, const PosteriorBatch& batch);

}  // namespace immse::kernels
