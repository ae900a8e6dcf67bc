#include "immse/curve.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace immse {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double evaluate_segment(const Segment& segment, double gamma) noexcept
{
    return std::visit(Overloaded{
                          [gamma](const RationalSegment& s) { return s.a / (1.0 + s.a * gamma); },
                          [](const ZeroSegment&) { return 0.0; },
                          [gamma](const LogSegment& s) { return s.offset + 0.5 * std::log1p(s.a * gamma); },
                      },
                      segment);
}

double segment_derivative(const Segment& segment, double gamma) noexcept
{
    return std::visit(Overloaded{
                          [gamma](const RationalSegment& s) {
                              const double den = 1.0 + s.a * gamma;
                              return -s.a * s.a / (den * den);
                          },
                          [](const ZeroSegment&) { return 0.0; },
                          [gamma](const LogSegment& s) { return 0.5 * s.a / (1.0 + s.a * gamma); },
                      },
                      segment);
}

PiecewiseCurve::PiecewiseCurve(CurveKind kind, std::vector<Snr> breakpoints, std::vector<Segment> segments)
    : kind_(kind), breakpoints_(std::move(breakpoints)), segments_(std::move(segments))
{
    detail::require(segments_.size() == breakpoints_.size() + 1,
                    "piecewise curve needs exactly one more segment than breakpoints");
    detail::require(std::adjacent_find(breakpoints_.begin(), breakpoints_.end(), std::greater_equal<>{}) ==
                        breakpoints_.end(),
                    "piecewise curve breakpoints must be strictly increasing");
}

std::size_t PiecewiseCurve::segment_index(double gamma) const noexcept
{
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), gamma,
                                     [](double g, const Snr& b) { return g < b.value(); });
    return static_cast<std::size_t>(it - breakpoints_.begin());
}

double PiecewiseCurve::operator()(double gamma) const
{
    detail::require(gamma >= 0.0, "curve evaluated at negative SNR");
    return evaluate_segment(segments_[segment_index(gamma)], gamma);
}

double PiecewiseCurve::left_limit(double gamma) const
{
    detail::require(gamma >= 0.0, "curve evaluated at negative SNR");
    std::size_t idx = segment_index(gamma);
    if (idx > 0 && breakpoints_[idx - 1].value() == gamma) {
        --idx;
    }
    return evaluate_segment(segments_[idx], gamma);
}

double PiecewiseCurve::derivative(double gamma) const
{
    detail::require(gamma >= 0.0, "curve evaluated at negative SNR");
    return segment_derivative(segments_[segment_index(gamma)], gamma);
}

}  // namespace immse
