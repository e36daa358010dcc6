#include "ubcov/scenario.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "ubcov/error.hpp"
#include "ubcov/mvn.hpp"
#include "ubcov/rng.hpp"

namespace ubcov {

namespace {

constexpr std::uint64_t kPerturbationStream = std::numeric_limits<std::uint64_t>::max();

}  // namespace

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::scenario1: return "scenario1";
        case ScenarioKind::scenario2: return "scenario2";
        case ScenarioKind::scenario3: return "scenario3";
        case ScenarioKind::custom: return "custom";
    }
    return "custom";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
    if (name == "scenario1") return ScenarioKind::scenario1;
    if (name == "scenario2") return ScenarioKind::scenario2;
    if (name == "scenario3") return ScenarioKind::scenario3;
    if (name == "custom") return ScenarioKind::custom;
    throw std::invalid_argument("unknown scenario kind '" + name + "'");
}

DenseSymMatrix ScenarioSpec::truth_matrix() const {
    if (truth_dense) return *truth_dense;
    if (truth_ub) return expand(*truth_ub);
    throw std::invalid_argument("scenario: no truth set");
}

void ScenarioSpec::validate() const {
    if (truth_ub.has_value() == truth_dense.has_value()) {
        throw std::invalid_argument("scenario: set exactly one of the uniform-block or dense truth");
    }
    if (truth_ub && !(truth_ub->partition() == partition)) {
        throw std::invalid_argument("scenario: truth partition differs from the scenario partition");
    }
    if (truth_dense && truth_dense->dim() != partition.total()) {
        throw DimensionError("scenario: dense truth dimension " +
                             std::to_string(truth_dense->dim()) + " != total(p) = " +
                             std::to_string(partition.total()));
    }
    if (n < 2) throw std::invalid_argument("scenario: n must be at least 2");
    if (replicates < 1) throw std::invalid_argument("scenario: replicates must be at least 1");
    if (threads < 1) throw std::invalid_argument("scenario: threads must be at least 1");
    if (!(sigma_perturb >= 0.0)) {
        throw std::invalid_argument("scenario: sigma_perturb must be nonnegative");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("scenario: level must lie in (0, 1)");
    }
    if (threshold) {
        threshold_config.validate();
        if (threshold_config.rule == LambdaRule::resample) split_sizes(n);
    }
    if (baselines) split_sizes(n);
    if (truth_ub) {
        const PdReport pd = is_positive_definite(*truth_ub);
        if (!pd.is_pd) {
            throw NotPositiveDefiniteError("scenario: truth is not positive definite",
                                           pd.min_eigenvalue);
        }
    } else {
        const Eigen::LLT<Eigen::MatrixXd> llt(truth_dense->matrix());
        if (llt.info() != Eigen::Success) {
            throw NotPositiveDefiniteError("scenario: dense truth is not positive definite",
                                           truth_dense->eigenvalues()(0));
        }
    }
}

UniformBlockCoords scenario1_truth(std::size_t p_ind) {
    Eigen::VectorXd a(5);
    a << 0.016, 0.214, 0.749, 0.068, 0.100;
    Eigen::MatrixXd b(5, 5);
    b << 6.731, -1.690, 0.696, -2.936, 1.913,
        -1.690, 5.215, 3.815, -1.010, 0.703,
        0.696, 3.815, 4.328, -3.357, -0.269,
        -2.936, -1.010, -3.357, 6.788, 0.000,
        1.913, 0.703, -0.269, 0.000, 3.954;
    return {a, b, PartitionVector::uniform(5, p_ind)};
}

UniformBlockCoords scenario2_truth(std::size_t communities, std::size_t p_ind,
                                   std::uint64_t seed) {
    if (communities < 1) throw std::invalid_argument("scenario2: need at least one community");
    const auto k = static_cast<Eigen::Index>(communities);
    CounterRng rng(seed);
    Eigen::VectorXd a(k);
    for (Eigen::Index i = 0; i < k; ++i) a(i) = rng.uniform(0.5, 1.5);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) b(i, i) = rng.uniform(0.3, 1.0);
    const double scale = 1.0 / static_cast<double>(communities);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i + 1; j < k; ++j) {
            if (!rng.bernoulli(0.2)) continue;
            const double magnitude = rng.uniform(0.3, 1.0) * scale;
            b(i, j) = b(j, i) = rng.bernoulli(0.5) ? magnitude : -magnitude;
        }
    }
    const PartitionVector p = PartitionVector::uniform(communities, p_ind);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        UniformBlockCoords out(a, b, p);
        if (is_positive_definite(out).is_pd) return out;
        b *= 0.9;
    }
    throw NotPositiveDefiniteError("scenario2: could not produce a positive definite truth", 0.0);
}

DenseSymMatrix scenario3_truth(std::size_t p_ind, double sigma, std::uint64_t seed) {
    const UniformBlockCoords base = scenario1_truth(p_ind);
    const DenseSymMatrix m =
        wishart_perturbation(base.dim(), sigma, derive_seed(seed, kPerturbationStream));
    return DenseSymMatrix(expand(base).matrix() + m.matrix());
}

ScenarioSpec make_scenario1(std::size_t n, std::size_t replicates, std::uint64_t seed,
                            std::size_t p_ind) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::scenario1;
    spec.truth_ub = scenario1_truth(p_ind);
    spec.partition = spec.truth_ub->partition();
    spec.n = n;
    spec.replicates = replicates;
    spec.seed = seed;
    return spec;
}

ScenarioSpec make_scenario2(std::size_t communities, std::size_t n, std::size_t replicates,
                            std::uint64_t seed, std::size_t p_ind) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::scenario2;
    spec.truth_ub = scenario2_truth(communities, p_ind, derive_seed(seed, kPerturbationStream));
    spec.partition = spec.truth_ub->partition();
    spec.n = n;
    spec.replicates = replicates;
    spec.seed = seed;
    spec.threshold = true;
    spec.threshold_config = ThresholdConfig::resampled(seed);
    spec.threshold_config.centered = spec.centered;
    spec.precision = false;
    spec.parameter_table = false;
    return spec;
}

ScenarioSpec make_scenario3(double sigma, std::size_t n, std::size_t replicates,
                            std::uint64_t seed, std::size_t p_ind) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::scenario3;
    spec.truth_dense = scenario3_truth(p_ind, sigma, seed);
    spec.partition = PartitionVector::uniform(5, p_ind);
    spec.n = n;
    spec.replicates = replicates;
    spec.seed = seed;
    spec.sigma_perturb = sigma;
    spec.baselines = true;
    spec.parameter_table = false;
    return spec;
}

}  // namespace ubcov
