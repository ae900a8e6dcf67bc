#include "immse/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace immse {

namespace {

// 0.5 * ln((1 + a x) / (1 + b x))
double half_log_ratio(double a, double b, double x) noexcept
{
    return 0.5 * (std::log1p(a * x) - std::log1p(b * x));
}

void require_pair(Snr snr0, Snr snr1)
{
    detail::require(snr0 < snr1, "snr0 must be strictly below snr1");
}

void require_unit(double value, const char* what)
{
    detail::require(std::isfinite(value) && value >= 0.0 && value <= 1.0, std::string(what) + " must lie in [0, 1]");
}

void check_sum(std::span<const double> betas)
{
    const double sum = std::accumulate(betas.begin(), betas.end(), 0.0);
    if (sum > 1.0) {
        throw OutOfValidity("strict-sum mode: betas sum to " + std::to_string(sum) + " > 1");
    }
}

}  // namespace

SnrLadder::SnrLadder(std::vector<Snr> points) : points_(std::move(points))
{
    detail::require(!points_.empty(), "SNR ladder needs at least one point");
    detail::require(points_.front().value() > 0.0, "SNR ladder points must be positive");
    detail::require(std::adjacent_find(points_.begin(), points_.end(), std::greater_equal<>{}) == points_.end(),
                    "SNR ladder must be strictly increasing");
}

SuperpositionDesign::SuperpositionDesign(SnrLadder ladder, std::vector<double> betas)
    : ladder_(std::move(ladder)), betas_(std::move(betas))
{
    const std::size_t k = betas_.size();
    const auto snr = [this](std::size_t i) { return ladder_[i].value(); };

    layer_rates_.reserve(k + 1);
    if (k == 0) {
        layer_rates_.push_back(Rate::from_nats(0.5 * std::log1p(snr(0))));
    } else {
        layer_rates_.push_back(Rate::from_nats(half_log_ratio(1.0, betas_[0], snr(0))));
        for (std::size_t j = 1; j < k; ++j) {
            layer_rates_.push_back(Rate::from_nats(half_log_ratio(betas_[j - 1], betas_[j], snr(j))));
        }
        layer_rates_.push_back(Rate::from_nats(0.5 * std::log1p(betas_[k - 1] * snr(k))));
    }

    double total = 0.0;
    for (const Rate& r : layer_rates_) {
        total += r.nats();
    }
    total_rate_ = Rate::from_nats(total);
}

std::vector<double> SuperpositionDesign::layer_powers() const
{
    std::vector<double> powers;
    powers.reserve(betas_.size() + 1);
    double above = 1.0;
    for (double b : betas_) {
        powers.push_back(above - b);
        above = b;
    }
    powers.push_back(above);
    return powers;
}

SuperpositionDesign make_design(SnrLadder ladder, std::vector<double> betas, BetaCheck check)
{
    detail::require(betas.size() == ladder.constrained(),
                    "design needs exactly one beta per constrained SNR (ladder size - 1)");
    for (std::size_t i = 0; i < betas.size(); ++i) {
        detail::require(std::isfinite(betas[i]) && betas[i] > 0.0 && betas[i] < 1.0,
                        "design betas must lie in the open interval (0, 1)");
        detail::require(i == 0 || betas[i] < betas[i - 1], "design betas must be strictly decreasing");
    }
    if (check == BetaCheck::StrictSum) {
        check_sum(betas);
    }
    return SuperpositionDesign(std::move(ladder), std::move(betas));
}

PiecewiseCurve mmse_curve(const SuperpositionDesign& design)
{
    const auto pts = design.ladder().points();
    std::vector<Segment> segments;
    segments.reserve(pts.size() + 1);
    segments.emplace_back(RationalSegment{1.0});
    for (double b : design.betas()) {
        segments.emplace_back(RationalSegment{b});
    }
    segments.emplace_back(ZeroSegment{});
    return PiecewiseCurve(CurveKind::Mmse, {pts.begin(), pts.end()}, std::move(segments));
}

PiecewiseCurve mi_curve(const SuperpositionDesign& design)
{
    const auto pts = design.ladder().points();
    const auto betas = design.betas();
    const auto rates = design.layer_rates();

    std::vector<Segment> segments;
    segments.reserve(pts.size() + 1);
    segments.emplace_back(LogSegment{0.0, 1.0});
    // On [snr_i, snr_{i+1}) the layers 0..i are decoded and layer i+1.. acts
    // like a Gaussian input of power beta_i.
    double decoded = 0.0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        decoded += rates[i].nats();
        segments.emplace_back(LogSegment{decoded, betas[i]});
    }
    segments.emplace_back(LogSegment{design.total_rate().nats(), 0.0});
    return PiecewiseCurve(CurveKind::MutualInformation, {pts.begin(), pts.end()}, std::move(segments));
}

Rate max_rate_single(Snr snr0, Snr snr1, double beta)
{
    require_pair(snr0, snr1);
    require_unit(beta, "beta");
    return Rate::from_nats(0.5 * std::log1p(beta * snr1.value()) + half_log_ratio(1.0, beta, snr0.value()));
}

double beta_to_alpha(Snr snr0, Snr snr1, double beta)
{
    require_pair(snr0, snr1);
    require_unit(beta, "beta");
    const double s0 = snr0.value();
    const double s1 = snr1.value();
    if (beta == 1.0) {
        return 1.0;
    }
    if (beta == 0.0) {
        return s0 / s1;
    }
    const double alpha = (beta * (s1 - s0) + s0 * (1.0 + beta * s1)) / (s1 * (1.0 + beta * s0));
    return std::min(alpha, 1.0);
}

double alpha_to_beta(Snr snr0, Snr snr1, double alpha)
{
    require_pair(snr0, snr1);
    require_unit(alpha, "alpha");
    const double s0 = snr0.value();
    const double s1 = snr1.value();
    if (alpha * s1 <= s0) {
        return 0.0;
    }
    if (alpha == 1.0) {
        return 1.0;
    }
    // Inverse Moebius map; the denominator is at least snr1 - snr0 > 0.
    const double beta = (alpha * s1 - s0) / ((s1 - s0) + s0 * s1 * (1.0 - alpha));
    return std::clamp(beta, 0.0, 1.0);
}

Variance equivalent_gaussian_variance(Snr snr0, Snr snr1, double alpha)
{
    require_pair(snr0, snr1);
    require_unit(alpha, "alpha");
    const double s0 = snr0.value();
    const double s1 = snr1.value();
    if (!(s0 < alpha * s1)) {
        throw OutOfValidity("equivalent Gaussian variance needs snr0 < alpha * snr1");
    }
    if (alpha == 1.0) {
        return Variance(1.0);
    }
    const double c = (1.0 + alpha * s1) / (1.0 + s0);
    const double d = (c - 1.0) / (s1 - c * s0);
    return Variance(std::clamp(d, 0.0, 1.0));
}

double mmse_lower_bound_asymptotic(Snr snr0, Snr snr1, double alpha)
{
    require_pair(snr0, snr1);
    require_unit(alpha, "alpha");
    const double s0 = snr0.value();
    const double s1 = snr1.value();
    if (alpha * s1 <= s0) {
        return 0.0;
    }
    return (alpha * s1 - s0) / ((s1 - s0) * (1.0 + s0));
}

std::vector<MmseConstraint> prune_constraints(std::span<const MmseConstraint> raw)
{
    detail::require(!raw.empty(), "constraint set is empty");
    for (const auto& c : raw) {
        detail::require(c.snr.value() > 0.0, "constraint SNRs must be positive");
        require_unit(c.beta, "constraint beta");
    }

    std::vector<MmseConstraint> sorted(raw.begin(), raw.end());
    std::sort(sorted.begin(), sorted.end(), [](const MmseConstraint& a, const MmseConstraint& b) {
        return a.snr != b.snr ? a.snr < b.snr : a.beta < b.beta;
    });

    std::vector<MmseConstraint> kept;
    for (const auto& c : sorted) {
        // Anything at higher SNR with a beta no smaller than an earlier one is
        // already implied by it (no nonnegative-to-negative crossings).
        if (kept.empty() || c.beta < kept.back().beta) {
            kept.push_back(c);
        }
    }
    return kept;
}

MultiConstraintOptimum max_rate_multi(std::span<const MmseConstraint> constraints, Snr snr_k, BetaCheck check)
{
    auto pruned = prune_constraints(constraints);
    detail::require(pruned.back().snr < snr_k, "target SNR must exceed every constraint SNR");

    std::vector<double> betas;
    betas.reserve(pruned.size());
    for (const auto& c : pruned) {
        betas.push_back(c.beta);
    }
    if (check == BetaCheck::StrictSum) {
        check_sum(betas);
    }

    const std::size_t k = pruned.size();
    double rate = half_log_ratio(1.0, betas[0], pruned[0].snr.value());
    for (std::size_t j = 1; j < k; ++j) {
        rate += half_log_ratio(betas[j - 1], betas[j], pruned[j].snr.value());
    }
    rate += 0.5 * std::log1p(betas[k - 1] * snr_k.value());

    // Collapse degenerate layers: beta = 1 means the constraint is vacuous
    // (no common layer), beta = 0 means the code must be decodable at that SNR.
    std::vector<Snr> ladder;
    std::vector<double> design_betas;
    bool decodable_early = false;
    for (const auto& c : pruned) {
        if (c.beta >= 1.0) {
            continue;
        }
        ladder.push_back(c.snr);
        if (c.beta <= 0.0) {
            decodable_early = true;
            break;
        }
        design_betas.push_back(c.beta);
    }
    if (!decodable_early) {
        ladder.push_back(snr_k);
    }

    return MultiConstraintOptimum{
        Rate::from_nats(rate),
        make_design(SnrLadder(std::move(ladder)), std::move(design_betas), BetaCheck::Monotone),
        std::move(pruned),
    };
}

OptimalProfile optimal_profile(std::span<const MmseConstraint> constraints, Snr snr_k, BetaCheck check)
{
    const auto optimum = max_rate_multi(constraints, snr_k, check);
    return OptimalProfile{mmse_curve(optimum.design), mi_curve(optimum.design)};
}

}  // namespace immse
