#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "immse/kernels/posterior.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define IMMSE_HAVE_AVX2 1
#else
#define IMMSE_HAVE_AVX2 0
#endif

namespace immse::kernels {

#if IMMSE_HAVE_AVX2

namespace {

// exp(x) for x <= 0. Cody-Waite reduction x = k ln2 + r, |r| <= ln2/2,
// Taylor polynomial through r^13 (truncation < 2e-17), then scale by 2^k.
// Inputs below -708 are clamped; their weights are negligible next to the
// max-subtracted score of 0.
inline __m256d exp_nonpositive(__m256d x)
{
    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

    x = _mm256_max_pd(x, lo);
    const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
    r = _mm256_fnmadd_pd(k, ln2_lo, r);

    __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    // 2^k through the exponent field; k is in [-1022, 0].
    const __m128i k32 = _mm256_cvtpd_epi32(k);
    __m256i bits = _mm256_cvtepi32_epi64(k32);
    bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
    bits = _mm256_slli_epi64(bits, 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

}  // namespace

void exp_nonpositive_avx2(std::span<const double> x, std::span<double> out)
{
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) {
        _mm256_storeu_pd(out.data() + i, exp_nonpositive(_mm256_loadu_pd(x.data() + i)));
    }
    if (i < x.size()) {
        alignas(32) double tail[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t t = 0; i + t < x.size(); ++t) {
            tail[t] = x[i + t];
        }
        alignas(32) double res[4];
        _mm256_store_pd(res, exp_nonpositive(_mm256_load_pd(tail)));
        for (std::size_t t = 0; i + t < x.size(); ++t) {
            out[i + t] = res[t];
        }
    }
}

void posterior_avx2(const PosteriorProblem& problem, const PosteriorBatch& batch)
{
    const std::size_t n = problem.dim;
    const std::size_t m = problem.bias.size();
    const std::size_t count = batch.count;
    const std::size_t blocked = count - count % 4;
    const double* cb = problem.codebook.data();
    const double* obs = batch.observations.data();
    const __m256d sqrt_gamma = _mm256_set1_pd(problem.sqrt_gamma);

    std::vector<double> scores(4 * m);

    for (std::size_t i = 0; i < blocked; i += 4) {
        __m256d top = _mm256_set1_pd(-HUGE_VAL);
        for (std::size_t j = 0; j < m; ++j) {
            const double* x = cb + j * n;
            __m256d dot = _mm256_setzero_pd();
            for (std::size_t d = 0; d < n; ++d) {
                dot = _mm256_fmadd_pd(_mm256_loadu_pd(obs + d * count + i), _mm256_set1_pd(x[d]), dot);
            }
            const __m256d s = _mm256_fmadd_pd(sqrt_gamma, dot, _mm256_set1_pd(problem.bias[j]));
            _mm256_storeu_pd(scores.data() + 4 * j, s);
            top = _mm256_max_pd(top, s);
        }

        __m256d total = _mm256_setzero_pd();
        for (std::size_t d = 0; d < n; ++d) {
            _mm256_storeu_pd(batch.means.data() + d * count + i, _mm256_setzero_pd());
        }
        for (std::size_t j = 0; j < m; ++j) {
            const __m256d w = exp_nonpositive(_mm256_sub_pd(_mm256_loadu_pd(scores.data() + 4 * j), top));
            total = _mm256_add_pd(total, w);
            const double* x = cb + j * n;
            for (std::size_t d = 0; d < n; ++d) {
                double* dst = batch.means.data() + d * count + i;
                _mm256_storeu_pd(dst, _mm256_fmadd_pd(w, _mm256_set1_pd(x[d]), _mm256_loadu_pd(dst)));
            }
        }
        for (std::size_t d = 0; d < n; ++d) {
            double* dst = batch.means.data() + d * count + i;
            _mm256_storeu_pd(dst, _mm256_div_pd(_mm256_loadu_pd(dst), total));
        }

        alignas(32) double tops[4];
        alignas(32) double totals[4];
        _mm256_store_pd(tops, top);
        _mm256_store_pd(totals, total);
        for (std::size_t t = 0; t < 4; ++t) {
            batch.log_partition[i + t] = tops[t] + std::log(totals[t]);
        }
    }

    if (blocked < count) {
        // The scalar kernel indexes observations by the full stride, so hand
        // it a compacted copy of the tail.
        const std::size_t rest = count - blocked;
        std::vector<double> tail_obs(n * rest);
        std::vector<double> tail_means(n * rest);
        for (std::size_t d = 0; d < n; ++d) {
            for (std::size_t t = 0; t < rest; ++t) {
                tail_obs[d * rest + t] = obs[d * count + blocked + t];
            }
        }
        posterior_scalar(problem, PosteriorBatch{tail_obs, rest, tail_means,
                                                 batch.log_partition.subspan(blocked, rest)});
        for (std::size_t d = 0; d < n; ++d) {
            for (std::size_t t = 0; t < rest; ++t) {
                batch.means[d * count + blocked + t] = tail_means[d * rest + t];
            }
        }
    }
}

#else

void exp_nonpositive_avx2(std::span<const double>, std::span<double>)
{
    throw std::logic_error("AVX2 kernels were not compiled in");
}

void posterior_avx2(const PosteriorProblem&, const PosteriorBatch&)
{
    throw std::logic_error("AVX2 kernels were not compiled in");
}

#endif

}  // namespace immse::kernels
