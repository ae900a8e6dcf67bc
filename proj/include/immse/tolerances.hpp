#pragma once

#include <cstddef>

namespace immse {

/// Numerical knobs shared across the library. One record so that every
/// tolerance a caller can observe is documented in a single place.
struct Tolerances {
    /// Width, in standard errors, of every statistical verdict.
    double significance_sigmas = 3.0;
    /// Slack allowed on the per-codeword power constraint.
    double power_slack = 1e-12;
    /// Starting Gauss-Hermite order of the scalar quadrature oracle. The
    /// order doubles until two successive rules agree (see quadrature).
    std::size_t hermite_order = 64;
    /// Accuracy floor claimed for the scalar quadrature at moderate SNR.
    double quadrature_floor = 1e-10;
    /// Upper bound on codewords x samples x grid points for one verification.
    double posterior_work_budget = 1e9;
    /// Samples per deterministic Monte Carlo chunk (seed-to-chunk mapping).
    std::size_t chunk_samples = 4096;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace immse
