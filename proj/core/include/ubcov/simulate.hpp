#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ubcov/scenario.hpp"

namespace ubcov {

/// Table row for one free parameter. Scaled columns follow the usual
/// layout: MCSD and ASE are multiplied by 100, ARB and CP are percentages.
struct ParameterSummary {
    std::string name;
    double truth = 0.0;
    double mean = 0.0;
    double bias = 0.0;
    /// |mean - truth| / |truth| * 100; unset when truth == 0.
    std::optional<double> arb_percent;
    /// |mean - truth| * 100, the column reported when truth == 0.
    double abs_bias_x100 = 0.0;
    double mcsd_x100 = 0.0;
    double ase_x100 = 0.0;
    double cp_percent = 0.0;
};

/// Losses of one estimator against one target over the replicates.
/// Replicates where the estimator failed (e.g. a singular plug-in) are
/// counted in `failures` and excluded from the summaries.
struct MethodLoss {
    std::string method;
    std::string target;  ///< "covariance" or "precision"
    double mean_frobenius = 0.0;
    double median_frobenius = 0.0;
    double mean_spectral = 0.0;
    std::size_t failures = 0;
    std::vector<double> frobenius;
    std::vector<double> spectral;
};

struct SimReport {
    ScenarioKind kind = ScenarioKind::custom;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t communities = 0;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    double level = 0.95;
    double sigma_perturb = 0.0;
    std::vector<ParameterSummary> parameters;
    std::vector<MethodLoss> losses;
    /// Mean selected thresholding level (scenario2), unset otherwise.
    std::optional<double> mean_lambda;
    /// Wall-clock seconds; informative only, never serialized.
    double wall_seconds = 0.0;

    const MethodLoss* find_loss(const std::string& method, const std::string& target) const;
};

/// Runs spec.replicates independent replicates. Replicate r draws its data
/// from derive_seed(spec.seed, r) and is folded in index order, so the
/// report does not depend on spec.threads.
SimReport run_scenario(const ScenarioSpec& spec);

}  // namespace ubcov
