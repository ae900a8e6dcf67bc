#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "immse/errors.hpp"
#include "immse/kernels/posterior.hpp"
#include "immse/oracle.hpp"
#include "rng.hpp"

namespace immse {

namespace {

constexpr std::uint64_t kMmseStream = 1;
constexpr std::uint64_t kMiStream = 2;

// bias_j = ln(1/M) - gamma/2 |x_j|^2
std::vector<double> uniform_bias(const DiscreteCodebook& codebook, double gamma)
{
    const double log_prior = -std::log(static_cast<double>(codebook.size()));
    std::vector<double> bias(codebook.size());
    for (std::size_t j = 0; j < codebook.size(); ++j) {
        bias[j] = log_prior - 0.5 * gamma * codebook.power(j) * static_cast<double>(codebook.dim());
    }
    return bias;
}

// Running mean / sum of squared deviations, merged chunk by chunk in a fixed
// order (Chan et al. pairwise update).
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void merge(const Moments& other)
    {
        if (other.count == 0.0) {
            return;
        }
        const double total = count + other.count;
        const double delta = other.mean - mean;
        mean += delta * other.count / total;
        m2 += other.m2 + delta * delta * count * other.count / total;
        count = total;
    }

    [[nodiscard]] double std_error() const { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

struct ChunkView {
    std::span<const std::size_t> index;
    std::span<const double> observations;  // dimension-major
    std::span<const double> means;
    std::span<const double> log_partition;
    std::size_t count;
};

// Draws (codeword, noise) pairs chunk by chunk, runs the posterior kernel and
// hands each chunk to `per_sample`, which returns the sample's contribution.
template <class PerSample>
Estimate run_chunks(const DiscreteCodebook& codebook, double gamma, std::size_t samples, std::uint64_t seed,
                    std::uint64_t stream, const Tolerances& tol, PerSample&& per_sample)
{
    detail::require(samples >= 1, "Monte Carlo needs at least one sample");
    const std::size_t n = codebook.dim();
    const std::size_t m = codebook.size();
    const double sqrt_gamma = std::sqrt(gamma);
    const auto bias = uniform_bias(codebook, gamma);
    const kernels::PosteriorProblem problem{codebook.data(), bias, n, sqrt_gamma};
    const auto cb = codebook.data();

    const std::size_t chunk = std::max<std::size_t>(1, tol.chunk_samples);
    std::vector<std::size_t> index(chunk);
    std::vector<double> obs(chunk * n);
    std::vector<double> means(chunk * n);
    std::vector<double> log_partition(chunk);

    Moments total;
    for (std::size_t start = 0, c = 0; start < samples; start += chunk, ++c) {
        const std::size_t count = std::min(chunk, samples - start);
        auto rng = detail::make_engine(seed, stream, c);
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        std::normal_distribution<double> noise(0.0, 1.0);
        for (std::size_t i = 0; i < count; ++i) {
            index[i] = pick(rng);
            for (std::size_t d = 0; d < n; ++d) {
                obs[d * count + i] = sqrt_gamma * cb[index[i] * n + d] + noise(rng);
            }
        }

        kernels::posterior(problem, kernels::PosteriorBatch{std::span(obs).first(count * n), count,
                                                            std::span(means).first(count * n),
                                                            std::span(log_partition).first(count)});

        const ChunkView view{std::span(index).first(count), std::span(obs).first(count * n),
                             std::span(means).first(count * n), std::span(log_partition).first(count), count};
        Moments local;
        for (std::size_t i = 0; i < count; ++i) {
            const double v = per_sample(view, i);
            local.count += 1.0;
            const double delta = v - local.mean;
            local.mean += delta / local.count;
            local.m2 += delta * (v - local.mean);
        }
        total.merge(local);
    }
    return Estimate{total.mean, total.std_error(), samples, seed};
}

}  // namespace

std::vector<double> conditional_mean(const DiscreteCodebook& codebook, Snr gamma, std::span<const double> observation)
{
    detail::require(observation.size() == codebook.dim(), "observation dimension must match the codebook");
    const auto bias = uniform_bias(codebook, gamma.value());
    std::vector<double> mean(codebook.dim());
    double log_partition = 0.0;
    kernels::posterior(
        kernels::PosteriorProblem{codebook.data(), bias, codebook.dim(), std::sqrt(gamma.value())},
        kernels::PosteriorBatch{observation, 1, mean, std::span(&log_partition, 1)});
    return mean;
}

MmseEstimate mmse_monte_carlo(const DiscreteCodebook& codebook, Snr gamma, std::size_t samples, std::uint64_t seed,
                              const Tolerances& tol)
{
    detail::require(samples >= 1, "Monte Carlo needs at least one sample");
    if (gamma.value() == 0.0) {
        // The estimator is the prior mean; average over codewords exactly.
        return MmseEstimate{codebook.prior_variance(), 0.0, samples, seed};
    }
    const std::size_t n = codebook.dim();
    const auto cb = codebook.data();
    return run_chunks(codebook, gamma.value(), samples, seed, kMmseStream, tol,
                      [&](const ChunkView& v, std::size_t i) {
                          double err = 0.0;
                          for (std::size_t d = 0; d < n; ++d) {
                              const double e = cb[v.index[i] * n + d] - v.means[d * v.count + i];
                              err += e * e;
                          }
                          return err / static_cast<double>(n);
                      });
}

MiEstimate mi_monte_carlo(const DiscreteCodebook& codebook, Snr gamma, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol)
{
    detail::require(samples >= 1, "Monte Carlo needs at least one sample");
    if (gamma.value() == 0.0 || codebook.size() == 1) {
        return MiEstimate{0.0, 0.0, samples, seed};
    }
    const std::size_t n = codebook.dim();
    const auto cb = codebook.data();
    const double sqrt_gamma = std::sqrt(gamma.value());
    const double half_gamma = 0.5 * gamma.value();
    return run_chunks(codebook, gamma.value(), samples, seed, kMiStream, tol,
                      [&](const ChunkView& v, std::size_t i) {
                          // ln p(y|x_k) / p(y) = s_k - ln sum_j (1/M) exp(s_j)
                          const std::size_t k = v.index[i];
                          double dot = 0.0;
                          double energy = 0.0;
                          for (std::size_t d = 0; d < n; ++d) {
                              const double x = cb[k * n + d];
                              dot += v.observations[d * v.count + i] * x;
                              energy += x * x;
                          }
                          const double own = sqrt_gamma * dot - half_gamma * energy;
                          return (own - v.log_partition[i]) / static_cast<double>(n);
                      });
}

}  // namespace immse
