#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace magbottle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Principal value in (-pi, pi]. Exact (returns x unchanged) when x already lies in range.
inline double wrap_angle(double x)
{
    double r = std::remainder(x, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

/// Principal value in [0, 2pi).
inline double wrap_positive(double x)
{
    double r = std::remainder(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

struct WrappedAngle
{
    double value;       // in (-pi, pi]
    std::int64_t turns; // x ~= value + 2*pi*turns
};

inline WrappedAngle wrap_with_turns(double x)
{
    double w = wrap_angle(x);
    return {w, static_cast<std::int64_t>(std::llround((x - w) / kTwoPi))};
}

} // namespace magbottle
