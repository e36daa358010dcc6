#pragma once

namespace ubcov {

/// Standard normal quantile. Acklam's rational approximation followed by one
/// Halley step against std::erfc; absolute error well below 1e-12 on (0, 1).
double normal_quantile(double probability);

/// z_{0.975} to the digits the acceptance checks use.
inline constexpr double kZ975 = 1.9599639845400540;

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

/// estimate +/- z_{(1+level)/2} * se. Throws std::invalid_argument unless
/// 0 < level < 1 and se >= 0.
Interval wald_ci(double estimate, double se, double level);

}  // namespace ubcov
