#include "ubcov_cli/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ubcov/normal.hpp"
#include "ubcov/variance.hpp"
#include "ubcov/version.hpp"
#include "ubcov_cli/io.hpp"

namespace ubcov::cli {

namespace {

using Index = Eigen::Index;
Index idx(std::size_t i) { return static_cast<Index>(i); }

// Shortest decimal that reads back to the same double.
std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

json partition_json(const PartitionVector& p) {
    json out = json::array();
    for (std::size_t s : p.sizes()) out.push_back(s);
    return out;
}

// Splits a canonical theta vector into the {"a", "b"} layout.
json split_theta(const Eigen::VectorXd& theta, const PartitionVector& p) {
    return coords_json(coords_from_theta(theta, p));
}

struct Row {
    std::string name;
    double estimate;
    std::optional<double> se;
    std::optional<Interval> ci;
};

std::vector<Row> theta_rows(const ThetaEstimate& theta, double level) {
    const Eigen::VectorXd v = theta_vector(theta.coords);
    const auto names = theta_names(theta.coords.communities());
    std::vector<Row> rows;
    for (Index i = 0; i < v.size(); ++i) {
        rows.push_back({names[static_cast<std::size_t>(i)], v(i), theta.se(i),
                        wald_ci(v(i), theta.se(i), level)});
    }
    return rows;
}

std::string rows_csv(const std::vector<Row>& rows) {
    std::string out = "name,estimate,se,ci_lo,ci_hi\n";
    for (const Row& r : rows) {
        out += r.name + "," + number(r.estimate) + ",";
        out += r.se ? number(*r.se) : "";
        out += ",";
        out += r.ci ? number(r.ci->lower) + "," + number(r.ci->upper) : ",";
        out += "\n";
    }
    return out;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

ThresholdConfig threshold_from_json(const json& j, ThresholdConfig cfg) {
    static const std::set<std::string> known = {"rule",      "lambda", "c",
                                                "splits",    "grid_size", "grid",
                                                "exempt_diagonal"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw InputError("scenario: unknown threshold field '" + key + "'");
    }
    const std::string rule = get_or<std::string>(j, "rule", "resample");
    if (rule == "resample") {
        cfg.rule = LambdaRule::resample;
    } else if (rule == "fixed") {
        cfg.rule = LambdaRule::fixed;
    } else if (rule == "rate") {
        cfg.rule = LambdaRule::rate;
    } else {
        throw InputError("scenario: unknown threshold rule '" + rule + "'");
    }
    cfg.lambda = get_or(j, "lambda", cfg.lambda);
    cfg.c_constant = get_or(j, "c", cfg.c_constant);
    cfg.splits = get_or(j, "splits", cfg.splits);
    cfg.grid_size = get_or(j, "grid_size", cfg.grid_size);
    cfg.grid = get_or(j, "grid", cfg.grid);
    cfg.exempt_diagonal = get_or(j, "exempt_diagonal", cfg.exempt_diagonal);
    return cfg;
}

}  // namespace

json meta_json(const Meta& meta) {
    json out = {{"n", meta.n},
                {"p", meta.p},
                {"K", meta.communities},
                {"q", meta.q},
                {"seed", nullptr},
                {"version", kVersion}};
    if (meta.seed) out["seed"] = *meta.seed;
    return out;
}

json coords_json(const UniformBlockCoords& coords) {
    return {{"a", vector_json(coords.a())}, {"b", matrix_json(coords.b())}};
}

UniformBlockCoords coords_from_json(const json& j, const PartitionVector& p) {
    const auto a = j.at("a").get<std::vector<double>>();
    const auto b = j.at("b").get<std::vector<std::vector<double>>>();
    const auto k = idx(p.communities());
    if (idx(a.size()) != k || idx(b.size()) != k) {
        throw InputError("coordinates: expected " + std::to_string(k) + " communities");
    }
    Eigen::VectorXd av(k);
    Eigen::MatrixXd bm(k, k);
    for (Index i = 0; i < k; ++i) {
        av(i) = a[static_cast<std::size_t>(i)];
        if (idx(b[static_cast<std::size_t>(i)].size()) != k) {
            throw InputError("coordinates: b must be " + std::to_string(k) + "x" +
                             std::to_string(k));
        }
        for (Index c = 0; c < k; ++c) {
            bm(i, c) = b[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        }
    }
    return {av, bm, p};
}

json pd_json(const PdReport& pd) {
    return {{"is_pd", pd.is_pd},
            {"min_eig", pd.min_eigenvalue},
            {"min_a", pd.min_a},
            {"min_delta", pd.min_delta}};
}

json theta_report(const ThetaEstimate& theta, double level) {
    const PartitionVector& p = theta.coords.partition();
    const Eigen::VectorXd v = theta_vector(theta.coords);
    Eigen::VectorXd lo(v.size());
    Eigen::VectorXd hi(v.size());
    json params = json::array();
    for (const Row& r : theta_rows(theta, level)) {
        const Index i = idx(params.size());
        lo(i) = r.ci->lower;
        hi(i) = r.ci->upper;
        params.push_back({{"name", r.name},
                          {"estimate", r.estimate},
                          {"se", *r.se},
                          {"ci_lo", r.ci->lower},
                          {"ci_hi", r.ci->upper}});
    }
    return {{"partition", partition_json(p)},
            {"theta", coords_json(theta.coords)},
            {"se", split_theta(theta.se, p)},
            {"ci", {{"level", level}, {"lower", split_theta(lo, p)}, {"upper", split_theta(hi, p)}}},
            {"parameters", std::move(params)},
            {"pd", pd_json(is_positive_definite(theta.coords))}};
}

json eigen_report(const UniformBlockCoords& coords) {
    json groups = json::array();
    for (const EigenvalueGroup& g : eigenvalue_groups(coords)) {
        groups.push_back({{"value", g.value},
                          {"multiplicity", g.multiplicity},
                          {"source", g.community < 0 ? std::string("delta")
                                                     : "a_" + std::to_string(g.community + 1)}});
    }
    return {{"partition", partition_json(coords.partition())},
            {"eigenvalues", std::move(groups)},
            {"delta_condition", delta_condition(coords)},
            {"pd", pd_json(is_positive_definite(coords))}};
}

json threshold_report(const LargeKResult& result, SampleSize size) {
    const PartitionVector& p = result.coords.partition();
    const Eigen::VectorXd raw_se = exact_variance_theta(result.raw, size).cwiseMax(0.0).cwiseSqrt();
    json out = {{"partition", partition_json(p)},
                {"theta", coords_json(result.coords)},
                {"raw_theta", coords_json(result.raw)},
                {"raw_se", split_theta(raw_se, p)},
                {"lambda", result.lambda},
                {"surviving", result.surviving},
                {"offdiag_sparsity", result.offdiag_sparsity},
                {"diagonal_zeroed", result.diagonal_zeroed},
                {"pd", pd_json(result.pd)}};
    if (result.selection) {
        out["lambda_selection"] = {{"grid", result.selection->grid},
                                   {"risk", result.selection->risk}};
    }
    return out;
}

json augmented_report(const AugmentedCov& result, double level) {
    json out = theta_report(result.theta, level);
    out["singletons"] = result.d;
    out["d1"] = matrix_json(result.d1);
    out["d2"] = matrix_json(result.d2);
    out["lambda_singleton"] = result.lambda_singleton;
    out["min_eig"] = result.min_eigenvalue;
    if (result.selection) {
        out["lambda_selection"] = {{"grid", result.selection->grid},
                                   {"risk", result.selection->risk}};
    }
    if (result.clipped) out["clipped"] = matrix_json(*result.clipped);
    return out;
}

json sim_report_json(const SimReport& report) {
    json params = json::array();
    for (const ParameterSummary& s : report.parameters) {
        params.push_back({{"name", s.name},
                          {"truth", s.truth},
                          {"mean", s.mean},
                          {"bias", s.bias},
                          {"arb_percent", s.arb_percent ? json(*s.arb_percent) : json(nullptr)},
                          {"abs_bias_x100", s.abs_bias_x100},
                          {"mcsd_x100", s.mcsd_x100},
                          {"ase_x100", s.ase_x100},
                          {"cp_percent", s.cp_percent}});
    }
    json losses = json::array();
    for (const MethodLoss& m : report.losses) {
        losses.push_back({{"method", m.method},
                          {"target", m.target},
                          {"mean_frobenius", m.mean_frobenius},
                          {"median_frobenius", m.median_frobenius},
                          {"mean_spectral", m.mean_spectral},
                          {"failures", m.failures}});
    }
    const std::size_t k = report.communities;
    json out = {{"scenario", to_string(report.kind)},
                {"replicates", report.replicates},
                {"level", report.level},
                {"sigma_perturb", report.sigma_perturb},
                {"parameters", std::move(params)},
                {"losses", std::move(losses)},
                {"meta", meta_json({report.n, report.p, k, k + k * (k + 1) / 2, report.seed})}};
    if (report.mean_lambda) out["lambda"] = *report.mean_lambda;
    return out;
}

std::string theta_csv(const ThetaEstimate& theta, double level) {
    return rows_csv(theta_rows(theta, level));
}

std::string coords_csv(const UniformBlockCoords& coords) {
    const Eigen::VectorXd v = theta_vector(coords);
    const auto names = theta_names(coords.communities());
    std::vector<Row> rows;
    for (Index i = 0; i < v.size(); ++i) {
        rows.push_back({names[static_cast<std::size_t>(i)], v(i), std::nullopt, std::nullopt});
    }
    return rows_csv(rows);
}

std::string eigen_csv(const UniformBlockCoords& coords) {
    std::string out = "value,multiplicity,source\n";
    for (const EigenvalueGroup& g : eigenvalue_groups(coords)) {
        out += number(g.value) + "," + std::to_string(g.multiplicity) + ",";
        out += g.community < 0 ? std::string("delta") : "a_" + std::to_string(g.community + 1);
        out += "\n";
    }
    return out;
}

std::string sim_report_csv(const SimReport& report) {
    std::string out;
    if (!report.parameters.empty()) {
        out += "name,truth,mean,arb_percent,abs_bias_x100,mcsd_x100,ase_x100,cp_percent\n";
        for (const ParameterSummary& s : report.parameters) {
            out += s.name + "," + number(s.truth) + "," + number(s.mean) + ",";
            out += s.arb_percent ? number(*s.arb_percent) : "NA";
            out += "," + number(s.abs_bias_x100) + "," + number(s.mcsd_x100) + "," +
                   number(s.ase_x100) + "," + number(s.cp_percent) + "\n";
        }
        out += "\n";
    }
    out += "method,target,mean_frobenius,median_frobenius,mean_spectral,failures\n";
    for (const MethodLoss& m : report.losses) {
        out += m.method + "," + m.target + "," + number(m.mean_frobenius) + "," +
               number(m.median_frobenius) + "," + number(m.mean_spectral) + "," +
               std::to_string(m.failures) + "\n";
    }
    return out;
}

std::string theta_table(const ThetaEstimate& theta, double level) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %12s %12s %12s %12s\n", "name", "estimate", "se",
                  "ci_lo", "ci_hi");
    out << line;
    for (const Row& r : theta_rows(theta, level)) {
        std::snprintf(line, sizeof line, "%-10s %12s %12s %12s %12s\n", r.name.c_str(),
                      fixed4(r.estimate).c_str(), fixed4(*r.se).c_str(),
                      fixed4(r.ci->lower).c_str(), fixed4(r.ci->upper).c_str());
        out << line;
    }
    return out.str();
}

std::string sim_report_table(const SimReport& report) {
    std::ostringstream out;
    char line[200];
    if (!report.parameters.empty()) {
        std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s %10s\n", "name", "truth",
                      "ARB%", "MCSD*100", "ASE*100", "CP%");
        out << line;
        for (const ParameterSummary& s : report.parameters) {
            const std::string arb =
                s.arb_percent ? fixed4(*s.arb_percent) : "NA(" + fixed4(s.abs_bias_x100) + ")";
            std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s %10s\n", s.name.c_str(),
                          fixed4(s.truth).c_str(), arb.c_str(), fixed4(s.mcsd_x100).c_str(),
                          fixed4(s.ase_x100).c_str(), fixed4(s.cp_percent).c_str());
            out << line;
        }
        out << "\n";
    }
    std::snprintf(line, sizeof line, "%-24s %-11s %12s %12s %12s %8s\n", "method", "target",
                  "mean_F", "median_F", "mean_S", "failed");
    out << line;
    for (const MethodLoss& m : report.losses) {
        std::snprintf(line, sizeof line, "%-24s %-11s %12s %12s %12s %8zu\n", m.method.c_str(),
                      m.target.c_str(), fixed4(m.mean_frobenius).c_str(),
                      fixed4(m.median_frobenius).c_str(), fixed4(m.mean_spectral).c_str(),
                      m.failures);
        out << line;
    }
    return out.str();
}

ScenarioSpec scenario_from_json(const json& j) {
    if (!j.is_object()) throw InputError("scenario: expected a JSON object");
    static const std::set<std::string> known = {
        "kind",      "n",        "replicates", "seed",      "p_ind",
        "communities", "sigma_perturb", "centered", "level", "threshold",
        "baselines", "precision", "parameter_table", "threads", "truth"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw InputError("scenario: unknown field '" + key + "'");
    }
    if (!j.contains("kind")) throw InputError("scenario: missing field 'kind'");
    try {
        const ScenarioKind kind = scenario_kind_from_string(j.at("kind").get<std::string>());
        const auto seed = get_or<std::uint64_t>(j, "seed", 0);
        const auto p_ind = get_or<std::size_t>(j, "p_ind", kind == ScenarioKind::scenario2 ? 10 : 30);
        ScenarioSpec spec;
        switch (kind) {
            case ScenarioKind::scenario1:
                spec = make_scenario1(get_or<std::size_t>(j, "n", 100),
                                      get_or<std::size_t>(j, "replicates", 1000), seed, p_ind);
                break;
            case ScenarioKind::scenario2:
                spec = make_scenario2(get_or<std::size_t>(j, "communities", 30),
                                      get_or<std::size_t>(j, "n", 30),
                                      get_or<std::size_t>(j, "replicates", 1000), seed, p_ind);
                break;
            case ScenarioKind::scenario3:
                spec = make_scenario3(get_or<double>(j, "sigma_perturb", 0.1),
                                      get_or<std::size_t>(j, "n", 50),
                                      get_or<std::size_t>(j, "replicates", 1000), seed, p_ind);
                break;
            case ScenarioKind::custom: {
                if (!j.contains("truth")) throw InputError("scenario: custom kind needs 'truth'");
                const json& t = j.at("truth");
                spec.kind = kind;
                spec.partition = PartitionVector(t.at("partition").get<std::vector<std::size_t>>());
                if (t.contains("dense")) {
                    const auto rows = t.at("dense").get<std::vector<std::vector<double>>>();
                    const auto dim = idx(rows.size());
                    Eigen::MatrixXd m(dim, dim);
                    for (Index r = 0; r < dim; ++r) {
                        const auto& row = rows[static_cast<std::size_t>(r)];
                        if (idx(row.size()) != dim) {
                            throw InputError("scenario: dense truth must be square");
                        }
                        for (Index c = 0; c < dim; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
                    }
                    spec.truth_dense = DenseSymMatrix(m);
                    spec.parameter_table = false;
                } else {
                    spec.truth_ub = coords_from_json(t, spec.partition);
                }
                spec.n = get_or<std::size_t>(j, "n", 100);
                spec.replicates = get_or<std::size_t>(j, "replicates", 1000);
                spec.seed = seed;
                break;
            }
        }
        spec.sigma_perturb = get_or(j, "sigma_perturb", spec.sigma_perturb);
        spec.centered = get_or(j, "centered", spec.centered);
        spec.level = get_or(j, "level", spec.level);
        spec.baselines = get_or(j, "baselines", spec.baselines);
        spec.precision = get_or(j, "precision", spec.precision);
        spec.parameter_table = get_or(j, "parameter_table", spec.parameter_table);
        spec.threads = get_or(j, "threads", spec.threads);
        if (j.contains("threshold")) {
            const json& t = j.at("threshold");
            if (t.is_boolean()) {
                spec.threshold = t.get<bool>();
            } else {
                spec.threshold = true;
                spec.threshold_config = threshold_from_json(t, spec.threshold_config);
            }
        }
        spec.threshold_config.centered = spec.centered;
        return spec;
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario: ") + e.what());
    }
}

}  // namespace ubcov::cli
