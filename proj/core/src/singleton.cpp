#include "ubcov/singleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "ubcov/error.hpp"
#include "ubcov/rng.hpp"

namespace ubcov {

namespace {

using Index = Eigen::Index;
Index idx(std::size_t i) { return static_cast<Index>(i); }

double soft(double v, double lambda) {
    const double m = std::abs(v);
    if (m <= lambda) return 0.0;
    return std::copysign(m - lambda, v);
}

double hard(double v, double lambda) { return std::abs(v) > lambda ? v : 0.0; }

std::vector<double> log_grid(double lo, double hi, std::size_t size) {
    if (hi == 0.0 || !std::isfinite(lo)) return std::vector<double>(size, 0.0);
    lo *= 0.5;
    std::vector<double> grid(size);
    const double step = std::log(hi / lo) / static_cast<double>(size - 1);
    for (std::size_t i = 0; i < size; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.back() = hi;
    return grid;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    void visit(double v) {
        const double m = std::abs(v);
        if (m > 0.0) lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
};

std::size_t argmin_prefer_larger(const std::vector<double>& risk) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < risk.size(); ++g) {
        if (risk[g] <= risk[best]) best = g;
    }
    return best;
}

// Split the shuffled observation order into the fit and check parts.
std::pair<DataMatrix, DataMatrix> split_rows(const DataMatrix& x, std::uint64_t seed,
                                             std::size_t split_index, SplitSizes sizes) {
    std::vector<std::size_t> order(x.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(derive_seed(seed, split_index));
    shuffle(order, rng);
    const std::span<const std::size_t> all(order);
    return {x.select_rows(all.first(sizes.n1)), x.select_rows(all.subspan(sizes.n1))};
}

// Columns of S that touch the singletons: S[:, p:] as a (p + d) x d block.
Eigen::MatrixXd singleton_columns(const DataMatrix& x, std::size_t community_cols, bool centered) {
    const Eigen::MatrixXd xc = centered ? center_columns(x.rows()) : x.rows();
    const auto d = xc.cols() - idx(community_cols);
    const double divisor = centered ? static_cast<double>(x.n() - 1) : static_cast<double>(x.n());
    return (xc.transpose() * xc.rightCols(d)) / divisor;
}

}  // namespace

Eigen::MatrixXd soft_threshold_dense(const Eigen::MatrixXd& m, double lambda,
                                     bool preserve_diagonal) {
    return threshold_dense(m, lambda, ThresholdMode::soft, preserve_diagonal);
}

DenseSymMatrix soft_threshold_dense(const DenseSymMatrix& m, double lambda,
                                    bool preserve_diagonal) {
    return DenseSymMatrix(soft_threshold_dense(m.matrix(), lambda, preserve_diagonal));
}

Eigen::MatrixXd hard_threshold_dense(const Eigen::MatrixXd& m, double lambda,
                                     bool preserve_diagonal) {
    return threshold_dense(m, lambda, ThresholdMode::hard, preserve_diagonal);
}

Eigen::MatrixXd threshold_dense(const Eigen::MatrixXd& m, double lambda, ThresholdMode mode,
                                bool preserve_diagonal) {
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("threshold_dense: lambda must be nonnegative");
    }
    Eigen::MatrixXd out = mode == ThresholdMode::soft
                              ? m.unaryExpr([lambda](double v) { return soft(v, lambda); }).eval()
                              : m.unaryExpr([lambda](double v) { return hard(v, lambda); }).eval();
    if (preserve_diagonal) {
        const Index n = std::min(m.rows(), m.cols());
        for (Index i = 0; i < n; ++i) out(i, i) = m(i, i);
    }
    return out;
}

AugmentedSplit split_augmented(const DenseSymMatrix& s, const PartitionVector& p, std::size_t d,
                               SampleSize size) {
    if (s.dim() != p.total() + d) {
        throw DimensionError("split_augmented: matrix dimension " + std::to_string(s.dim()) +
                             " != total(p) + d = " + std::to_string(p.total() + d));
    }
    const auto pt = idx(p.total());
    const auto dd = idx(d);
    const Eigen::MatrixXd& m = s.matrix();
    BlockStats stats = block_stats(DenseSymMatrix(m.topLeftCorner(pt, pt)), p, size);
    return {std::move(stats), m.topRightCorner(pt, dd), m.bottomRightCorner(dd, dd)};
}

Eigen::MatrixXd AugmentedCov::assemble() const {
    const auto pt = idx(theta.coords.dim());
    const auto dd = idx(d);
    Eigen::MatrixXd out(pt + dd, pt + dd);
    out.topLeftCorner(pt, pt) = expand(theta.coords).matrix();
    if (dd > 0) {
        out.topRightCorner(pt, dd) = d1;
        out.bottomLeftCorner(dd, pt) = d1.transpose();
        out.bottomRightCorner(dd, dd) = d2;
    }
    return out;
}

LambdaSelection select_singleton_lambda(const DataMatrix& x, const PartitionVector& p,
                                        std::size_t d, const AugmentedOptions& options) {
    if (options.grid_size < 2 || options.splits < 1) {
        throw std::invalid_argument("singleton lambda: need grid_size >= 2 and splits >= 1");
    }
    const std::size_t pt = p.total();
    const SplitSizes sizes = split_sizes(x.n());
    LambdaSelection out;
    {
        const Eigen::MatrixXd cols = singleton_columns(x, pt, options.centered);
        Range range;
        for (Index j = 0; j < cols.cols(); ++j) {
            for (Index i = 0; i < cols.rows(); ++i) {
                if (i != idx(pt) + j) range.visit(cols(i, j));
            }
        }
        out.grid = log_grid(range.lo, range.hi, options.grid_size);
    }
    out.risk.assign(out.grid.size(), 0.0);
    for (std::size_t s = 0; s < options.splits; ++s) {
        const auto [first, second] = split_rows(x, options.seed, s, sizes);
        const Eigen::MatrixXd fit = singleton_columns(first, pt, options.centered);
        const Eigen::MatrixXd check = singleton_columns(second, pt, options.centered);
        const auto pti = idx(pt);
        const auto dd = idx(d);
        for (std::size_t g = 0; g < out.grid.size(); ++g) {
            const double lambda = out.grid[g];
            const Eigen::MatrixXd t1 =
                threshold_dense(fit.topRows(pti), lambda, options.mode, false);
            const Eigen::MatrixXd t2 =
                threshold_dense(fit.bottomRows(dd), lambda, options.mode, true);
            out.risk[g] += 2.0 * (t1 - check.topRows(pti)).squaredNorm() +
                           (t2 - check.bottomRows(dd)).squaredNorm();
        }
    }
    for (double& r : out.risk) r /= static_cast<double>(options.splits);
    out.lambda = out.grid[argmin_prefer_larger(out.risk)];
    return out;
}

AugmentedCov estimate_augmented(const DataMatrix& x, const PartitionVector& p, std::size_t d,
                                const AugmentedOptions& options) {
    if (x.p() != p.total() + d) {
        throw DimensionError("estimate_augmented: data has " + std::to_string(x.p()) +
                             " columns, expected total(p) + d = " + std::to_string(p.total() + d));
    }
    if (d == 0) {
        const SampleCovariance s = sample_covariance(x, options.centered);
        AugmentedCov out{estimate_theta(block_stats(s.matrix, p, s.size)),
                         Eigen::MatrixXd(idx(p.total()), 0), Eigen::MatrixXd(0, 0), 0,
                         options.lambda_singleton.value_or(0.0), std::nullopt, 0.0, std::nullopt};
        out.min_eigenvalue = is_positive_definite(out.theta.coords).min_eigenvalue;
        if (options.clip_psd) out.clipped = clip_eigenvalues(out.assemble(), 1e-8);
        return out;
    }
    const SampleCovariance s = sample_covariance(x, options.centered);
    AugmentedSplit split = split_augmented(s.matrix, p, d, s.size);

    std::optional<LambdaSelection> selection;
    double lambda = 0.0;
    if (options.lambda_singleton) {
        lambda = *options.lambda_singleton;
        if (!(lambda >= 0.0)) {
            throw std::invalid_argument("estimate_augmented: lambda must be nonnegative");
        }
    } else {
        selection = select_singleton_lambda(x, p, d, options);
        lambda = selection->lambda;
    }
    AugmentedCov out{estimate_theta(split.stats),
                     threshold_dense(split.s1, lambda, options.mode, false),
                     threshold_dense(split.s2, lambda, options.mode, true),
                     d,
                     lambda,
                     std::move(selection),
                     0.0,
                     std::nullopt};
    out.d2 = 0.5 * (out.d2 + out.d2.transpose()).eval();
    const Eigen::MatrixXd full = out.assemble();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(full, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = solver.eigenvalues().minCoeff();
    if (options.clip_psd) out.clipped = clip_eigenvalues(full, 1e-8);
    return out;
}

DenseThresholdResult universal_threshold(const DataMatrix& x, ThresholdMode mode,
                                         std::size_t splits, std::size_t grid_size,
                                         std::uint64_t seed, bool centered) {
    if (grid_size < 2 || splits < 1) {
        throw std::invalid_argument("universal_threshold: need grid_size >= 2 and splits >= 1");
    }
    const SampleCovariance s = sample_covariance(x, centered);
    const Eigen::MatrixXd& m = s.matrix.matrix();
    Range range;
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < j; ++i) range.visit(m(i, j));
    }
    DenseThresholdResult out{Eigen::MatrixXd(), {}};
    out.selection.grid = log_grid(range.lo, range.hi, grid_size);
    out.selection.risk.assign(grid_size, 0.0);
    const SplitSizes sizes = split_sizes(x.n());
    for (std::size_t sp = 0; sp < splits; ++sp) {
        const auto [first, second] = split_rows(x, seed, sp, sizes);
        const Eigen::MatrixXd fit = sample_covariance(first, centered).matrix.matrix();
        const Eigen::MatrixXd check = sample_covariance(second, centered).matrix.matrix();
        for (std::size_t g = 0; g < grid_size; ++g) {
            out.selection.risk[g] +=
                (threshold_dense(fit, out.selection.grid[g], mode, true) - check).squaredNorm();
        }
    }
    for (double& r : out.selection.risk) r /= static_cast<double>(splits);
    out.selection.lambda = out.selection.grid[argmin_prefer_larger(out.selection.risk)];
    out.estimate = threshold_dense(m, out.selection.lambda, mode, true);
    return out;
}

Eigen::MatrixXd clip_eigenvalues(const Eigen::MatrixXd& m, double floor_ratio) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    Eigen::VectorXd values = solver.eigenvalues();
    const double floor = floor_ratio * std::max(values.maxCoeff(), 0.0);
    values = values.cwiseMax(floor);
    Eigen::MatrixXd out = solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

}  // namespace ubcov
