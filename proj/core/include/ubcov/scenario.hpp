#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ubcov/dense.hpp"
#include "ubcov/threshold.hpp"
#include "ubcov/uniform_block.hpp"

namespace ubcov {

enum class ScenarioKind { scenario1, scenario2, scenario3, custom };

std::string to_string(ScenarioKind kind);
/// Throws std::invalid_argument on an unknown name.
ScenarioKind scenario_kind_from_string(const std::string& name);

/// One Monte Carlo configuration. Exactly one of truth_ub / truth_dense is
/// set; a dense truth keeps its uniform-block origin in `partition` so the
/// estimator knows the communities.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::custom;
    PartitionVector partition{2, 2};
    std::optional<UniformBlockCoords> truth_ub;
    std::optional<DenseSymMatrix> truth_dense;
    std::size_t n = 100;
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    /// Wishart scale of the perturbation (scenario3).
    double sigma_perturb = 0.0;
    /// false: data treated as mean-zero (S = X^T X / n, dof = n).
    bool centered = false;
    double level = 0.95;
    /// Hard-thresholded uniform-block estimator (scenario2).
    bool threshold = false;
    ThresholdConfig threshold_config;
    /// Sample covariance and universal soft / hard thresholding.
    bool baselines = false;
    /// Losses of the plug-in precision estimate.
    bool precision = true;
    /// Per-parameter ARB / MCSD / ASE / CP table (needs a uniform-block truth).
    bool parameter_table = true;
    std::size_t threads = 1;

    std::size_t dim() const noexcept { return partition.total(); }
    /// Truth as an explicit matrix.
    DenseSymMatrix truth_matrix() const;
    /// Throws std::invalid_argument on inconsistent fields and
    /// NotPositiveDefiniteError when the truth is not positive definite.
    void validate() const;
};

/// (A_0, B_0) of the five-community design with p_ind features per community.
UniformBlockCoords scenario1_truth(std::size_t p_ind);

/// Random sparse large-K design: a_kk ~ U(0.5, 1.5), b_kk ~ U(0.3, 1),
/// each b_kk' (k < k') nonzero with probability 0.2 and magnitude
/// U(0.3, 1) / K with a random sign; B shrinks by 0.9 until the matrix is
/// positive definite.
UniformBlockCoords scenario2_truth(std::size_t communities, std::size_t p_ind, std::uint64_t seed);

/// Uniform-block truth plus sigma * G^T G (G a p x p standard normal matrix).
DenseSymMatrix scenario3_truth(std::size_t p_ind, double sigma, std::uint64_t seed);

ScenarioSpec make_scenario1(std::size_t n = 100, std::size_t replicates = 1000,
                            std::uint64_t seed = 0, std::size_t p_ind = 30);
ScenarioSpec make_scenario2(std::size_t communities = 30, std::size_t n = 30,
                            std::size_t replicates = 1000, std::uint64_t seed = 0,
                            std::size_t p_ind = 10);
ScenarioSpec make_scenario3(double sigma, std::size_t n = 50, std::size_t replicates = 1000,
                            std::uint64_t seed = 0, std::size_t p_ind = 30);

}  // namespace ubcov
