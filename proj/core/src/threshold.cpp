#include "ubcov/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ubcov/error.hpp"
#include "ubcov/norms.hpp"
#include "ubcov/rng.hpp"

namespace ubcov {

namespace {

using Index = Eigen::Index;

double keep(double v, double lambda) { return std::abs(v) > lambda ? v : 0.0; }

}  // namespace

ThresholdConfig ThresholdConfig::fixed(double lambda) {
    ThresholdConfig cfg;
    cfg.rule = LambdaRule::fixed;
    cfg.lambda = lambda;
    return cfg;
}

ThresholdConfig ThresholdConfig::rate(double c_constant) {
    ThresholdConfig cfg;
    cfg.rule = LambdaRule::rate;
    cfg.c_constant = c_constant;
    return cfg;
}

ThresholdConfig ThresholdConfig::resampled(std::uint64_t seed) {
    ThresholdConfig cfg;
    cfg.rule = LambdaRule::resample;
    cfg.seed = seed;
    return cfg;
}

void ThresholdConfig::validate() const {
    if (rule == LambdaRule::fixed && !(lambda >= 0.0)) {
        throw std::invalid_argument("threshold: lambda must be nonnegative");
    }
    if (rule == LambdaRule::rate && !(c_constant > 0.0)) {
        throw std::invalid_argument("threshold: C must be positive");
    }
    if (splits < 1) {
        throw std::invalid_argument("threshold: need at least one split");
    }
    if (grid.empty() && grid_size < 2) {
        throw std::invalid_argument("threshold: grid_size must be at least 2");
    }
    for (double g : grid) {
        if (!(g >= 0.0)) throw std::invalid_argument("threshold: grid levels must be nonnegative");
    }
}

UniformBlockCoords hard_threshold_theta(const UniformBlockCoords& theta, double lambda,
                                        bool exempt_diagonal) {
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("hard_threshold_theta: lambda must be nonnegative");
    }
    if (lambda == 0.0) {
        return theta;
    }
    Eigen::VectorXd a = theta.a();
    if (!exempt_diagonal) {
        a = a.unaryExpr([lambda](double v) { return keep(v, lambda); });
    }
    const Eigen::MatrixXd b = theta.b().unaryExpr([lambda](double v) { return keep(v, lambda); });
    return {std::move(a), b, theta.partition()};
}

UniformBlockCoords hard_threshold_theta(const ThetaEstimate& theta, double lambda,
                                        bool exempt_diagonal) {
    return hard_threshold_theta(theta.coords, lambda, exempt_diagonal);
}

std::size_t surviving_count(const UniformBlockCoords& theta) {
    std::size_t count = 0;
    const auto k = static_cast<Index>(theta.communities());
    for (Index r = 0; r < k; ++r) {
        if (theta.a()(r) != 0.0) ++count;
        for (Index c = r; c < k; ++c) {
            if (theta.b()(r, c) != 0.0) ++count;
        }
    }
    return count;
}

double rate_lambda(double c_constant, std::size_t communities, std::size_t n) {
    return c_constant * std::sqrt(std::log(static_cast<double>(communities)) /
                                  static_cast<double>(n));
}

std::vector<double> lambda_grid(const UniformBlockCoords& theta, std::size_t grid_size) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    auto visit = [&](double v) {
        const double m = std::abs(v);
        if (m > 0.0) lo = std::min(lo, m);
        hi = std::max(hi, m);
    };
    const auto k = static_cast<Index>(theta.communities());
    for (Index r = 0; r < k; ++r) {
        visit(theta.a()(r));
        for (Index c = r; c < k; ++c) visit(theta.b()(r, c));
    }
    if (hi == 0.0) {
        return std::vector<double>(grid_size, 0.0);
    }
    lo *= 0.5;
    std::vector<double> grid(grid_size);
    const double step = std::log(hi / lo) / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        grid[i] = lo * std::exp(step * static_cast<double>(i));
    }
    grid.back() = hi;
    return grid;
}

SplitSizes split_sizes(std::size_t n) {
    if (n < 4) {
        throw std::invalid_argument("resampling needs n >= 4, got " + std::to_string(n));
    }
    const double nd = static_cast<double>(n);
    const auto n2 = static_cast<std::size_t>(std::ceil(nd / std::log(nd)));
    if (n2 < 2 || n2 + 2 > n) {
        throw std::invalid_argument("degenerate resampling split for n = " + std::to_string(n));
    }
    return {n - n2, n2};
}

LambdaSelection select_lambda(const DataMatrix& x, const PartitionVector& p,
                              const ThresholdConfig& cfg) {
    cfg.validate();
    const SplitSizes sizes = split_sizes(x.n());
    LambdaSelection out;
    if (!cfg.grid.empty()) {
        out.grid = cfg.grid;
        std::sort(out.grid.begin(), out.grid.end());
    } else {
        const UniformBlockCoords full = estimate_coords(block_stats_from_data(x, p, cfg.centered));
        out.grid = lambda_grid(full, cfg.grid_size);
    }
    out.risk.assign(out.grid.size(), 0.0);

    std::vector<std::size_t> order(x.n());
    for (std::size_t s = 0; s < cfg.splits; ++s) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        CounterRng rng(derive_seed(cfg.seed, s));
        shuffle(order, rng);
        const std::span<const std::size_t> all(order);
        const DataMatrix first = x.select_rows(all.first(sizes.n1));
        const DataMatrix second = x.select_rows(all.subspan(sizes.n1));
        const UniformBlockCoords fit = estimate_coords(block_stats_from_data(first, p, cfg.centered));
        const UniformBlockCoords check =
            estimate_coords(block_stats_from_data(second, p, cfg.centered));
        for (std::size_t g = 0; g < out.grid.size(); ++g) {
            const UniformBlockCoords t = hard_threshold_theta(fit, out.grid[g], cfg.exempt_diagonal);
            out.risk[g] += frobenius_ub_squared(t, check);
        }
    }
    for (double& r : out.risk) r /= static_cast<double>(cfg.splits);

    std::size_t best = 0;
    for (std::size_t g = 1; g < out.risk.size(); ++g) {
        if (out.risk[g] <= out.risk[best]) best = g;
    }
    out.lambda = out.grid[best];
    return out;
}

LargeKResult estimate_large_k(const DataMatrix& x, const PartitionVector& p,
                              const ThresholdConfig& cfg) {
    cfg.validate();
    const SampleCovariance s = sample_covariance(x, cfg.centered);
    UniformBlockCoords raw = estimate_coords(block_stats(s.matrix, p, s.size));
    std::optional<LambdaSelection> selection;
    double lambda = 0.0;
    switch (cfg.rule) {
        case LambdaRule::fixed:
            lambda = cfg.lambda;
            break;
        case LambdaRule::rate:
            lambda = rate_lambda(cfg.c_constant, p.communities(), x.n());
            break;
        case LambdaRule::resample:
            selection = select_lambda(x, p, cfg);
            lambda = selection->lambda;
            break;
    }
    UniformBlockCoords coords = hard_threshold_theta(raw, lambda, cfg.exempt_diagonal);

    std::size_t off_total = 0;
    std::size_t off_zero = 0;
    const auto k = static_cast<Index>(p.communities());
    for (Index r = 0; r < k; ++r) {
        for (Index c = r + 1; c < k; ++c) {
            ++off_total;
            if (coords.b()(r, c) == 0.0) ++off_zero;
        }
    }
    bool zeroed = false;
    for (Index r = 0; r < k; ++r) {
        if (coords.a()(r) == 0.0 && raw.a()(r) != 0.0) zeroed = true;
    }
    LargeKResult out{raw, coords, lambda, std::move(selection), surviving_count(coords),
                     off_total == 0 ? 0.0 : static_cast<double>(off_zero) / static_cast<double>(off_total),
                     zeroed, is_positive_definite(coords)};
    return out;
}

}  // namespace ubcov
