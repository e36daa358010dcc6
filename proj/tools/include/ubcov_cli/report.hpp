#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ubcov/estimate.hpp"
#include "ubcov/scenario.hpp"
#include "ubcov/simulate.hpp"
#include "ubcov/singleton.hpp"
#include "ubcov/threshold.hpp"

namespace ubcov::cli {

using nlohmann::json;

struct Meta {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t communities = 0;
    std::size_t q = 0;
    std::optional<std::uint64_t> seed;
};

json meta_json(const Meta& meta);

/// {"a": [...], "b": [[...], ...]}; doubles are written in shortest
/// round-trip form, so reading them back is exact.
json coords_json(const UniformBlockCoords& coords);
/// Inverse of coords_json.
UniformBlockCoords coords_from_json(const json& j, const PartitionVector& p);

/// theta, se, Wald intervals at `level`, per-parameter records and the PD report.
json theta_report(const ThetaEstimate& theta, double level);
json pd_json(const PdReport& pd);
json eigen_report(const UniformBlockCoords& coords);
json threshold_report(const LargeKResult& result, SampleSize size);
json augmented_report(const AugmentedCov& result, double level);
json sim_report_json(const SimReport& report);

/// name,estimate,se,ci_lo,ci_hi
std::string theta_csv(const ThetaEstimate& theta, double level);
/// Same columns with se and intervals left empty.
std::string coords_csv(const UniformBlockCoords& coords);
/// value,multiplicity,source
std::string eigen_csv(const UniformBlockCoords& coords);
/// Parameter table, a blank line, then the loss table.
std::string sim_report_csv(const SimReport& report);

/// Fixed-width text with 4 decimals.
std::string theta_table(const ThetaEstimate& theta, double level);
std::string sim_report_table(const SimReport& report);

/// Scenario file: JSON object with fields mirroring ScenarioSpec.
ScenarioSpec scenario_from_json(const json& j);

}  // namespace ubcov::cli
