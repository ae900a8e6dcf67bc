#include "immse/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "immse/errors.hpp"
#include "immse/superposition.hpp"
#include "rng.hpp"

namespace immse {

namespace {

double max_power(std::span<const double> flat, std::size_t dim)
{
    double top = 0.0;
    for (std::size_t i = 0; i < flat.size(); i += dim) {
        double e = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            e += flat[i + d] * flat[i + d];
        }
        top = std::max(top, e / static_cast<double>(dim));
    }
    return top;
}

std::vector<double> gaussian_entries(std::mt19937_64& rng, std::size_t count, double variance)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance));
    std::vector<double> out(count);
    for (double& v : out) {
        v = normal(rng);
    }
    return out;
}

}  // namespace

DiscreteCodebook::DiscreteCodebook(std::size_t dim, std::vector<double> codewords, const Tolerances& tol)
    : dim_(dim), codewords_(std::move(codewords))
{
    detail::require(dim_ >= 1, "codebook dimension must be at least 1");
    detail::require(!codewords_.empty() && codewords_.size() % dim_ == 0,
                    "codebook needs at least one codeword of the stated dimension");
    for (double v : codewords_) {
        detail::require(std::isfinite(v), "codeword entries must be finite");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        detail::require(power(i) <= 1.0 + tol.power_slack, "codeword violates the average power constraint");
    }
}

DiscreteCodebook DiscreteCodebook::from_rows(const std::vector<std::vector<double>>& rows)
{
    detail::require(!rows.empty(), "codebook needs at least one codeword");
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& r : rows) {
        detail::require(r.size() == dim, "all codewords must share one dimension");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return DiscreteCodebook(dim, std::move(flat));
}

DiscreteCodebook DiscreteCodebook::bpsk()
{
    return DiscreteCodebook(1, {1.0, -1.0});
}

std::span<const double> DiscreteCodebook::codeword(std::size_t i) const
{
    detail::require(i < size(), "codeword index out of range");
    return std::span<const double>(codewords_).subspan(i * dim_, dim_);
}

double DiscreteCodebook::power(std::size_t i) const
{
    double e = 0.0;
    for (double v : codeword(i)) {
        e += v * v;
    }
    return e / static_cast<double>(dim_);
}

double DiscreteCodebook::average_power() const noexcept
{
    double e = 0.0;
    for (double v : codewords_) {
        e += v * v;
    }
    return e / static_cast<double>(codewords_.size());
}

std::vector<double> DiscreteCodebook::mean() const
{
    std::vector<double> mu(dim_, 0.0);
    for (std::size_t i = 0; i < codewords_.size(); ++i) {
        mu[i % dim_] += codewords_[i];
    }
    for (double& v : mu) {
        v /= static_cast<double>(size());
    }
    return mu;
}

double DiscreteCodebook::prior_variance() const noexcept
{
    const auto mu = mean();
    double e = 0.0;
    for (std::size_t i = 0; i < codewords_.size(); ++i) {
        const double c = codewords_[i] - mu[i % dim_];
        e += c * c;
    }
    return e / static_cast<double>(codewords_.size());
}

DiscreteCodebook random_gaussian_codebook(std::size_t size, std::size_t dim, std::uint64_t seed)
{
    detail::require(size >= 1 && dim >= 1, "random codebook needs positive size and dimension");
    auto rng = detail::make_engine(seed, 0x636f6465626f6f6bull, 0);
    auto flat = gaussian_entries(rng, size * dim, 1.0);
    const double top = max_power(flat, dim);
    if (top > 0.0) {
        const double s = 1.0 / std::sqrt(top);
        for (double& v : flat) {
            v *= s;
        }
    }
    return DiscreteCodebook(dim, std::move(flat));
}

LayeredCodebook make_layered_codebook(std::size_t common_size, std::size_t private_size, std::size_t dim,
                                      double beta, std::uint64_t seed)
{
    detail::require(common_size >= 1 && private_size >= 1 && dim >= 1, "layer sizes and dimension must be positive");
    detail::require(beta > 0.0 && beta < 1.0, "layered codebook beta must lie in (0, 1)");

    auto rng = detail::make_engine(seed, 0x6c6179657265ull, 0);
    auto u = gaussian_entries(rng, common_size * dim, 1.0 - beta);
    auto v = gaussian_entries(rng, private_size * dim, beta);

    std::vector<double> x;
    x.reserve(common_size * private_size * dim);
    std::set<std::vector<double>> seen;
    for (std::size_t a = 0; a < common_size; ++a) {
        for (std::size_t b = 0; b < private_size; ++b) {
            std::vector<double> w(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                w[d] = u[a * dim + d] + v[b * dim + d];
            }
            if (seen.insert(w).second) {
                x.insert(x.end(), w.begin(), w.end());
            }
        }
    }

    const double top = std::max({max_power(x, dim), max_power(u, dim), max_power(v, dim)});
    const double s = top > 1.0 ? 1.0 / std::sqrt(top) : 1.0;
    for (auto* layer : {&u, &v, &x}) {
        for (double& e : *layer) {
            e *= s;
        }
    }

    return LayeredCodebook{DiscreteCodebook(dim, std::move(u)), DiscreteCodebook(dim, std::move(v)),
                           DiscreteCodebook(dim, std::move(x)), beta, s};
}

LayeredCodebook layered_codebook_for(const SuperpositionDesign& design, std::size_t dim, std::uint64_t seed)
{
    detail::require(design.betas().size() == 1, "layered codebooks are built for two-layer designs");
    const auto rates = design.layer_rates();
    const double n = static_cast<double>(dim);
    const auto common = static_cast<std::size_t>(std::max(1.0, std::round(std::exp(n * rates[0].nats()))));
    const auto priv = static_cast<std::size_t>(std::max(1.0, std::round(std::exp(n * rates[1].nats()))));
    return make_layered_codebook(common, priv, dim, design.betas()[0], seed);
}

}  // namespace immse
