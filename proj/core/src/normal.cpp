#include "ubcov/normal.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ubcov {

namespace {

constexpr std::array<double, 6> kA = {-3.969683028665376e+01, 2.209460984245205e+02,
                                      -2.759285104469687e+02, 1.383577518672690e+02,
                                      -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB = {-5.447609879822406e+01, 1.615858368580409e+02,
                                      -1.556989798598866e+02, 6.680131188771972e+01,
                                      -1.328068155288572e+01};
constexpr std::array<double, 6> kC = {-7.784894002430293e-03, -3.223964580411365e-01,
                                      -2.400758277161838e+00, -2.549732539343734e+00,
                                      4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kD = {7.784695709041462e-03, 3.224671290700398e-01,
                                      2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kLow = 0.02425;

double acklam(double p) {
    if (p < kLow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
               ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    }
    if (p > 1.0 - kLow) {
        return -acklam(1.0 - p);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
           (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double probability) {
    if (!(probability > 0.0 && probability < 1.0)) {
        throw std::invalid_argument("normal_quantile: probability must lie in (0, 1)");
    }
    double x = acklam(probability);
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - probability;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

Interval wald_ci(double estimate, double se, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("wald_ci: level must lie in (0, 1)");
    }
    if (!(se >= 0.0)) {
        throw std::invalid_argument("wald_ci: standard error must be nonnegative");
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    return {estimate - z * se, estimate + z * se};
}

}  // namespace ubcov
