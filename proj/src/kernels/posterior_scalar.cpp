#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "immse/errors.hpp"
#include "immse/kernels/posterior.hpp"

namespace immse::kernels {

void posterior_scalar(const PosteriorProblem& problem, const PosteriorBatch& batch)
{
    const std::size_t n = problem.dim;
    const std::size_t m = problem.bias.size();
    const std::size_t count = batch.count;
    std::vector<double> scores(m);

    for (std::size_t i = 0; i < count; ++i) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            const double* x = problem.codebook.data() + j * n;
            double dot = 0.0;
            for (std::size_t d = 0; d < n; ++d) {
                dot += batch.observations[d * count + i] * x[d];
            }
            scores[j] = problem.bias[j] + problem.sqrt_gamma * dot;
            top = std::max(top, scores[j]);
        }

        double total = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            batch.means[d * count + i] = 0.0;
        }
        for (std::size_t j = 0; j < m; ++j) {
            const double w = std::exp(scores[j] - top);
            total += w;
            const double* x = problem.codebook.data() + j * n;
            for (std::size_t d = 0; d < n; ++d) {
                batch.means[d * count + i] += w * x[d];
            }
        }
        for (std::size_t d = 0; d < n; ++d) {
            batch.means[d * count + i] /= total;
        }
        batch.log_partition[i] = top + std::log(total);
    }
}

}  // namespace immse::kernels
