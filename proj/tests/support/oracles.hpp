#pragma once

// Dense reference implementations used only as test oracles. Everything
// here works on explicit p x p matrices and std::mt19937 so it shares no
// code path with the library under test.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ubcov/partition.hpp"
#include "ubcov/uniform_block.hpp"

namespace oracle {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline ubcov::PartitionVector random_partition(std::mt19937_64& gen, std::size_t max_k = 5,
                                               std::size_t max_total = 30) {
    std::uniform_int_distribution<std::size_t> kd(1, max_k);
    const std::size_t k = kd(gen);
    std::vector<std::size_t> sizes(k, 2);
    std::size_t total = 2 * k;
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::uniform_int_distribution<std::size_t> extra(0, max_total - total);
    for (std::size_t e = extra(gen); e > 0; --e) sizes[pick(gen)] += 1;
    return ubcov::PartitionVector(sizes);
}

/// Arbitrary symmetric coordinates (not necessarily PD).
inline ubcov::UniformBlockCoords random_coords(std::mt19937_64& gen,
                                               const ubcov::PartitionVector& p) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto k = static_cast<Index>(p.communities());
    VectorXd a(k);
    MatrixXd b(k, k);
    for (Index i = 0; i < k; ++i) a(i) = u(gen);
    for (Index i = 0; i < k; ++i) {
        for (Index j = i; j < k; ++j) b(i, j) = b(j, i) = u(gen);
    }
    return {a, b, p};
}

/// PD coordinates: a in (0.2, 2), B = M M^T - c I with c small enough.
inline ubcov::UniformBlockCoords random_pd_coords(std::mt19937_64& gen,
                                                  const ubcov::PartitionVector& p) {
    std::uniform_real_distribution<double> ua(0.2, 2.0);
    std::normal_distribution<double> z(0.0, 1.0);
    const auto k = static_cast<Index>(p.communities());
    VectorXd a(k);
    for (Index i = 0; i < k; ++i) a(i) = ua(gen);
    MatrixXd m(k, k);
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) m(i, j) = z(gen);
    }
    const double pmax = static_cast<double>(*std::max_element(p.sizes().begin(), p.sizes().end()));
    MatrixXd b = m * m.transpose() / static_cast<double>(k);
    b.diagonal().array() -= 0.5 * a.minCoeff() / pmax;
    return {a, b, p};
}

/// Explicit N(A, B, p), built entry by entry from community labels.
inline MatrixXd dense(const ubcov::UniformBlockCoords& c) {
    const auto& p = c.partition();
    std::vector<Index> label;
    for (std::size_t k = 0; k < p.communities(); ++k) {
        for (std::size_t i = 0; i < p.size(k); ++i) label.push_back(static_cast<Index>(k));
    }
    const auto n = static_cast<Index>(label.size());
    MatrixXd out(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            out(i, j) = c.b()(label[i], label[j]) + (i == j ? c.a()(label[i]) : 0.0);
        }
    }
    return out;
}

/// Recovers (a, b) from a dense matrix assumed to be uniform-block.
inline std::pair<VectorXd, MatrixXd> read_coords(const MatrixXd& m,
                                                 const ubcov::PartitionVector& p) {
    const auto k = static_cast<Index>(p.communities());
    VectorXd a(k);
    MatrixXd b(k, k);
    for (Index r = 0; r < k; ++r) {
        const auto ro = static_cast<Index>(p.offset(static_cast<std::size_t>(r)));
        for (Index c = 0; c < k; ++c) {
            const auto co = static_cast<Index>(p.offset(static_cast<std::size_t>(c)));
            b(r, c) = r == c ? m(ro, ro + 1) : m(ro, co);
        }
        a(r) = m(ro, ro) - b(r, r);
    }
    return {a, b};
}

inline VectorXd sorted_eigenvalues(const MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> s(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return s.eigenvalues();
}

inline double max_abs(const MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Symmetric weight matrix W with psi = tr(W S) for the block means, in the
/// canonical order alpha_11..alpha_KK, beta_11, beta_12, ..., beta_KK.
inline std::vector<MatrixXd> block_mean_weights(const ubcov::PartitionVector& p) {
    const auto n = static_cast<Index>(p.total());
    const std::size_t k = p.communities();
    std::vector<MatrixXd> out;
    for (std::size_t r = 0; r < k; ++r) {
        MatrixXd w = MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < p.size(r); ++i) {
            const auto g = static_cast<Index>(p.offset(r) + i);
            w(g, g) = 1.0 / static_cast<double>(p.size(r));
        }
        out.push_back(std::move(w));
    }
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = r; c < k; ++c) {
            MatrixXd w = MatrixXd::Zero(n, n);
            const double scale =
                1.0 / static_cast<double>(p.size(r) * p.size(c)) / (r == c ? 1.0 : 2.0);
            w.block(static_cast<Index>(p.offset(r)), static_cast<Index>(p.offset(c)),
                    static_cast<Index>(p.size(r)), static_cast<Index>(p.size(c)))
                .array() += scale;
            w.block(static_cast<Index>(p.offset(c)), static_cast<Index>(p.offset(r)),
                    static_cast<Index>(p.size(c)), static_cast<Index>(p.size(r)))
                .array() += r == c ? 0.0 : scale;
            out.push_back(std::move(w));
        }
    }
    return out;
}

/// Wishart moments: for S ~ W(Sigma, dof) / dof,
/// cov(tr(U S), tr(V S)) = 2 tr(U Sigma V Sigma) / dof for symmetric U, V.
inline MatrixXd block_mean_covariance(const MatrixXd& sigma, const ubcov::PartitionVector& p,
                                      double dof) {
    const auto w = block_mean_weights(p);
    const auto q = static_cast<Index>(w.size());
    std::vector<MatrixXd> ws;
    for (const auto& m : w) ws.push_back(m * sigma);
    MatrixXd out(q, q);
    for (Index u = 0; u < q; ++u) {
        for (Index v = 0; v < q; ++v) out(u, v) = 2.0 * (ws[u] * ws[v]).trace() / dof;
    }
    return out;
}

/// Draws n x p rows of N(0, sigma) with std::mt19937_64.
inline MatrixXd gaussian_rows(std::mt19937_64& gen, const MatrixXd& sigma, Index n) {
    const MatrixXd l = Eigen::LLT<MatrixXd>(sigma).matrixL();
    std::normal_distribution<double> z(0.0, 1.0);
    MatrixXd out(n, sigma.rows());
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < sigma.rows(); ++j) out(i, j) = z(gen);
    }
    return out * l.transpose();
}

}  // namespace oracle
