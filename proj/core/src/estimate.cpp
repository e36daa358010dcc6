#include "ubcov/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "ubcov/error.hpp"
#include "ubcov/variance.hpp"

namespace ubcov {

namespace {

using Index = Eigen::Index;
Index idx(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

BlockStats block_stats(const DenseSymMatrix& s, const PartitionVector& p, SampleSize size) {
    if (s.dim() != p.total()) {
        throw DimensionError("block_stats: matrix dimension " + std::to_string(s.dim()) +
                             " does not match partition total " + std::to_string(p.total()));
    }
    const auto k = idx(p.communities());
    BlockStats out{size, p, Eigen::VectorXd::Zero(k), Eigen::MatrixXd::Zero(k, k)};
    const Eigen::MatrixXd& m = s.matrix();
    for (std::size_t r = 0; r < p.communities(); ++r) {
        const auto br = m.middleRows(idx(p.offset(r)), idx(p.size(r)));
        out.trace_diag(idx(r)) =
            m.block(idx(p.offset(r)), idx(p.offset(r)), idx(p.size(r)), idx(p.size(r))).trace();
        for (std::size_t c = r; c < p.communities(); ++c) {
            const double sum = br.middleCols(idx(p.offset(c)), idx(p.size(c))).sum();
            out.block_sum(idx(r), idx(c)) = sum;
            out.block_sum(idx(c), idx(r)) = sum;
        }
    }
    return out;
}

BlockStats block_stats(const DenseSymMatrix& s, const PartitionVector& p, std::size_t n) {
    return block_stats(s, p, SampleSize::centered(n));
}

BlockStats block_stats_from_data(const DataMatrix& x, const PartitionVector& p, bool centered) {
    if (x.p() != p.total()) {
        throw DimensionError("block_stats_from_data: data has " + std::to_string(x.p()) +
                             " columns but partition totals " + std::to_string(p.total()));
    }
    const Eigen::MatrixXd xc = centered ? center_columns(x.rows()) : x.rows();
    const auto k = idx(p.communities());
    // Row sums per community: r_ik = sum_{j in k} x_ij, so sum(S_kl) = r_k^T r_l / divisor.
    Eigen::MatrixXd row_sums(xc.rows(), k);
    Eigen::VectorXd squares(k);
    for (std::size_t c = 0; c < p.communities(); ++c) {
        const auto cols = xc.middleCols(idx(p.offset(c)), idx(p.size(c)));
        row_sums.col(idx(c)) = cols.rowwise().sum();
        squares(idx(c)) = cols.squaredNorm();
    }
    const SampleSize size = centered ? SampleSize::centered(x.n()) : SampleSize::known_mean(x.n());
    const double divisor = centered ? static_cast<double>(x.n() - 1) : static_cast<double>(x.n());
    Eigen::MatrixXd sums = row_sums.transpose() * row_sums;
    sums = 0.5 * (sums + sums.transpose()).eval();
    return {size, p, squares / divisor, sums / divisor};
}

UniformBlockCoords estimate_coords(const BlockStats& stats) {
    const auto& p = stats.partition;
    const auto k = idx(p.communities());
    Eigen::VectorXd a(k);
    Eigen::MatrixXd b(k, k);
    for (Index r = 0; r < k; ++r) {
        const double pr = static_cast<double>(p.size(static_cast<std::size_t>(r)));
        for (Index c = 0; c < k; ++c) {
            if (r != c) {
                const double pc = static_cast<double>(p.size(static_cast<std::size_t>(c)));
                b(r, c) = stats.block_sum(r, c) / (pr * pc);
            }
        }
        b(r, r) = (stats.block_sum(r, r) - stats.trace_diag(r)) / (pr * (pr - 1.0));
        a(r) = stats.trace_diag(r) / pr - b(r, r);
    }
    return {std::move(a), b, p};
}

ThetaEstimate estimate_theta(const BlockStats& stats) {
    const auto& p = stats.partition;
    const auto k = idx(p.communities());
    Eigen::VectorXd alpha(k);
    Eigen::MatrixXd beta(k, k);
    for (Index r = 0; r < k; ++r) {
        const double pr = static_cast<double>(p.size(static_cast<std::size_t>(r)));
        alpha(r) = stats.trace_diag(r) / pr;
        for (Index c = 0; c < k; ++c) {
            const double pc = static_cast<double>(p.size(static_cast<std::size_t>(c)));
            beta(r, c) = stats.block_sum(r, c) / (pr * pc);
        }
    }
    UniformBlockCoords coords = estimate_coords(stats);
    Eigen::MatrixXd cov = exact_covariance_matrix(coords, stats.size);
    Eigen::VectorXd se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return {std::move(coords), std::move(alpha), 0.5 * (beta + beta.transpose()), stats.size,
            std::move(cov), std::move(se)};
}

ThetaEstimate theta_from_coords(const UniformBlockCoords& coords, SampleSize size) {
    const auto& p = coords.partition();
    const auto k = idx(p.communities());
    const Eigen::VectorXd pd = p.diagonal();
    Eigen::VectorXd alpha = coords.a() + coords.b().diagonal();
    Eigen::MatrixXd beta = coords.b();
    for (Index r = 0; r < k; ++r) {
        beta(r, r) += coords.a()(r) / pd(r);
    }
    Eigen::MatrixXd cov = exact_covariance_matrix(coords, size);
    Eigen::VectorXd se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return {coords, std::move(alpha), std::move(beta), size, std::move(cov), std::move(se)};
}

UniformBlockCoords plugin_covariance(const ThetaEstimate& theta) { return theta.coords; }

UniformBlockCoords plugin_precision(const ThetaEstimate& theta) {
    const PdReport pd = is_positive_definite(theta.coords);
    if (!pd.is_pd) {
        throw NotPositiveDefiniteError(
            "precision undefined: estimated covariance is not positive definite (min eigenvalue " +
                std::to_string(pd.min_eigenvalue) + ")",
            pd.min_eigenvalue);
    }
    return inverse(theta.coords);
}

ThetaEstimate estimate_correlation_mode(const DataMatrix& x, const PartitionVector& p) {
    const SampleCovariance r = sample_correlation(x);
    return estimate_theta(block_stats(r.matrix, p, r.size));
}

ThetaEstimate estimate_from_data(const DataMatrix& x, const PartitionVector& p, bool centered) {
    const SampleCovariance s = sample_covariance(x, centered);
    return estimate_theta(block_stats(s.matrix, p, s.size));
}

Eigen::VectorXd theta_vector(const UniformBlockCoords& coords) {
    const std::size_t k = coords.communities();
    Eigen::VectorXd out(idx(coords.partition().parameter_count()));
    Index pos = 0;
    for (std::size_t r = 0; r < k; ++r) out(pos++) = coords.a()(idx(r));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = r; c < k; ++c) out(pos++) = coords.b()(idx(r), idx(c));
    }
    return out;
}

UniformBlockCoords coords_from_theta(const Eigen::VectorXd& theta, const PartitionVector& p) {
    const std::size_t k = p.communities();
    if (static_cast<std::size_t>(theta.size()) != p.parameter_count()) {
        throw DimensionError("coords_from_theta: expected " + std::to_string(p.parameter_count()) +
                             " parameters, got " + std::to_string(theta.size()));
    }
    Eigen::VectorXd a = theta.head(idx(k));
    Eigen::MatrixXd b(idx(k), idx(k));
    Index pos = idx(k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = r; c < k; ++c) {
            b(idx(r), idx(c)) = theta(pos);
            b(idx(c), idx(r)) = theta(pos);
            ++pos;
        }
    }
    return {std::move(a), b, p};
}

std::vector<std::string> theta_names(std::size_t communities) {
    std::vector<std::string> names;
    names.reserve(communities + communities * (communities + 1) / 2);
    for (std::size_t r = 1; r <= communities; ++r) {
        names.push_back("a_" + std::to_string(r) + "_" + std::to_string(r));
    }
    for (std::size_t r = 1; r <= communities; ++r) {
        for (std::size_t c = r; c <= communities; ++c) {
            names.push_back("b_" + std::to_string(r) + "_" + std::to_string(c));
        }
    }
    return names;
}

std::size_t theta_index_b(std::size_t communities, std::size_t k, std::size_t l) {
    if (k > l) std::swap(k, l);
    // Rows before k contribute (K - r) entries each.
    const std::size_t before = k * communities - k * (k - 1) / 2;
    return communities + before + (l - k);
}

}  // namespace ubcov
