#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "immse/tolerances.hpp"

namespace immse {

class SuperpositionDesign;

/// M codewords of dimension n with a uniform prior. Every codeword obeys the
/// per-dimension average power constraint (1/n) sum_i x_i^2 <= 1.
class DiscreteCodebook {
public:
    /// codewords is M x n, row-major.
    DiscreteCodebook(std::size_t dim, std::vector<double> codewords, const Tolerances& tol = kDefaultTolerances);

    static DiscreteCodebook from_rows(const std::vector<std::vector<double>>& rows);
    /// {+1, -1}, n = 1.
    static DiscreteCodebook bpsk();

    [[nodiscard]] std::size_t size() const noexcept { return codewords_.size() / dim_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return codewords_; }
    [[nodiscard]] std::span<const double> codeword(std::size_t i) const;

    /// (1/n) |x_i|^2
    [[nodiscard]] double power(std::size_t i) const;
    /// (1/n) E|X|^2 under the uniform prior.
    [[nodiscard]] double average_power() const noexcept;
    /// (1/n) E|X - EX|^2: the MMSE at zero SNR.
    [[nodiscard]] double prior_variance() const noexcept;
    [[nodiscard]] std::vector<double> mean() const;

private:
    std::size_t dim_;
    std::vector<double> codewords_;
};

/// I.i.d. standard Gaussian entries, scaled by one common factor so that the
/// strongest codeword meets the power constraint with equality.
[[nodiscard]] DiscreteCodebook random_gaussian_codebook(std::size_t size, std::size_t dim, std::uint64_t seed);

/// Two-layer superposition codebook x = u + v over all (u, v) pairs.
struct LayeredCodebook {
    DiscreteCodebook common;    ///< u, Gaussian entries of variance (1 - beta) before scaling
    DiscreteCodebook priv;      ///< v, Gaussian entries of variance beta before scaling
    DiscreteCodebook combined;  ///< exact duplicates removed
    double beta = 0.0;
    /// Common amplitude factor (<= 1) applied to both layers so that every
    /// combined codeword satisfies the power constraint.
    double scale = 1.0;
};

[[nodiscard]] LayeredCodebook make_layered_codebook(std::size_t common_size, std::size_t private_size,
                                                    std::size_t dim, double beta, std::uint64_t seed);

/// Layer sizes round(exp(n R_u)) and round(exp(n R_v)) from a two-layer design.
[[nodiscard]] LayeredCodebook layered_codebook_for(const SuperpositionDesign& design, std::size_t dim,
                                                   std::uint64_t seed);

}  // namespace immse
