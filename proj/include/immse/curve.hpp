#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "immse/gaussian.hpp"

namespace immse {

/// gamma -> a / (1 + a * gamma)
struct RationalSegment {
    double a = 1.0;
};

/// gamma -> 0
struct ZeroSegment {};

/// gamma -> offset + 0.5 * ln(1 + a * gamma)
struct LogSegment {
    double offset = 0.0;
    double a = 0.0;
};

using Segment = std::variant<RationalSegment, ZeroSegment, LogSegment>;

enum class CurveKind { Mmse, MutualInformation };

[[nodiscard]] double evaluate_segment(const Segment& segment, double gamma) noexcept;
[[nodiscard]] double segment_derivative(const Segment& segment, double gamma) noexcept;

/// Closed-form piecewise function on [0, inf).
///
/// Segment 0 covers [0, breakpoints[0]); segment i covers
/// [breakpoints[i-1], breakpoints[i]); the last segment is unbounded. The
/// curve is right-continuous: at a breakpoint the segment starting there is
/// used. left_limit() gives the value approached from below.
class PiecewiseCurve {
public:
    PiecewiseCurve(CurveKind kind, std::vector<Snr> breakpoints, std::vector<Segment> segments);

    [[nodiscard]] CurveKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::span<const Snr> breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] std::span<const Segment> segments() const noexcept { return segments_; }

    [[nodiscard]] std::size_t segment_index(double gamma) const noexcept;
    [[nodiscard]] double operator()(double gamma) const;
    [[nodiscard]] double left_limit(double gamma) const;
    [[nodiscard]] double derivative(double gamma) const;

private:
    CurveKind kind_;
    std::vector<Snr> breakpoints_;
    std::vector<Segment> segments_;
};

}  // namespace immse
