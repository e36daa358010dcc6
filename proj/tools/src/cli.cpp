#include "ubcov_cli/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ubcov/error.hpp"
#include "ubcov/estimate.hpp"
#include "ubcov/singleton.hpp"
#include "ubcov/simulate.hpp"
#include "ubcov/threshold.hpp"
#include "ubcov/version.hpp"
#include "ubcov_cli/io.hpp"
#include "ubcov_cli/report.hpp"

namespace ubcov::cli {

namespace {

struct DataOptions {
    CLI::Option* data = nullptr;
    CLI::Option* partition = nullptr;
};

DataOptions add_data_options(CLI::App& sub, RunConfig& cfg) {
    DataOptions o;
    o.data = sub.add_option("--data", cfg.data_path, "CSV file, one observation per row")
                 ->required();
    o.partition =
        sub.add_option("--partition", cfg.partition_path, "community sizes (text or JSON array)")
            ->required();
    sub.add_flag("--header", cfg.header, "skip the first line of the CSV");
    sub.add_option("--permutation", cfg.permutation_path,
                   "0-based column order applied before estimation");
    sub.add_flag("--no-center", cfg.no_center, "treat the mean as known to be zero");
    sub.add_option("--level", cfg.level, "confidence level of the Wald intervals")
        ->check(CLI::Range(0.0, 1.0));
    return o;
}

const std::map<std::string, Format> kFormats = {
    {"json", Format::json}, {"csv", Format::csv}, {"table", Format::table}};

void add_output_options(CLI::App& sub, RunConfig& cfg) {
    sub.add_option("--out", cfg.output_path, "output file (default: standard output)");
    sub.add_option_function<std::string>(
           "--format", [&cfg](const std::string& name) { cfg.format = kFormats.at(name); },
           "json (default), csv or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
}

void add_lambda_options(CLI::App& sub, RunConfig& cfg) {
    auto* fixed = sub.add_option("--lambda", cfg.lambda, "fixed thresholding level")
                      ->check(CLI::NonNegativeNumber);
    auto* autos = sub.add_flag("--lambda-auto", cfg.lambda_auto,
                               "choose the level by split-sample resampling (default)");
    fixed->excludes(autos);
    autos->excludes(fixed);
}

void add_seed_option(CLI::App& sub, RunConfig& cfg) {
    sub.add_option("--seed", cfg.seed, "seed for all randomness (default 0)");
}

struct Loaded {
    DataMatrix x;
    PartitionVector p;
    std::size_t d;
};

Loaded load_inputs(const RunConfig& cfg) {
    DataMatrix x = load_data(cfg.data_path, cfg.header);
    if (!cfg.permutation_path.empty()) {
        x = permute_columns(x, load_permutation(cfg.permutation_path, x.p()));
    }
    PartitionVector p = load_partition(cfg.partition_path);
    if (p.total() + cfg.singletons != x.p()) {
        std::ostringstream msg;
        msg << "partition sums to " << p.total();
        if (cfg.singletons > 0) msg << " plus " << cfg.singletons << " singletons";
        msg << " but the data has " << x.p() << " columns";
        throw InputError(msg.str());
    }
    return {std::move(x), std::move(p), cfg.singletons};
}

Meta meta_for(const Loaded& in, std::optional<std::uint64_t> seed) {
    const std::size_t k = in.p.communities();
    return {in.x.n(), in.x.p(), k, in.p.parameter_count(), seed};
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output_path) {
        write_file(*cfg.output_path, text);
    } else {
        out << text;
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t seed_or_notice(const RunConfig& cfg, std::ostream& err) {
    if (cfg.seed) return *cfg.seed;
    err << "note: --seed not given; using seed 0 (pass --seed to make the run explicit)\n";
    return 0;
}

ThetaEstimate estimate_for(const RunConfig& cfg, const Loaded& in) {
    if (cfg.correlation) return estimate_correlation_mode(in.x, in.p);
    return estimate_from_data(in.x, in.p, !cfg.no_center);
}

int run_estimate(const RunConfig& cfg, std::ostream& out) {
    const Loaded in = load_inputs(cfg);
    const ThetaEstimate theta = estimate_for(cfg, in);
    switch (cfg.format) {
        case Format::csv: emit(cfg, out, theta_csv(theta, cfg.level)); break;
        case Format::table: emit(cfg, out, theta_table(theta, cfg.level)); break;
        case Format::json: {
            json j = theta_report(theta, cfg.level);
            j["meta"] = meta_json(meta_for(in, std::nullopt));
            emit(cfg, out, dump(j));
        }
    }
    return kOk;
}

int run_precision(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Loaded in = load_inputs(cfg);
    const ThetaEstimate theta = estimate_for(cfg, in);
    const PdReport pd = is_positive_definite(theta.coords);
    json j = theta_report(theta, cfg.level);
    j["meta"] = meta_json(meta_for(in, std::nullopt));
    std::optional<UniformBlockCoords> omega;
    std::string failure;
    try {
        omega = plugin_precision(theta);
    } catch (const NotPositiveDefiniteError& e) {
        failure = e.what();
    } catch (const SingularMatrixError& e) {
        failure = e.what();
    }
    if (!omega) {
        err << "error: no precision estimate: " << failure << " (min eigenvalue "
            << pd.min_eigenvalue << ")\n";
        const json diag = {{"error", failure},
                           {"pd", pd_json(pd)},
                           {"min_eig", pd.min_eigenvalue},
                           {"meta", j["meta"]}};
        emit(cfg, out, dump(diag));
        return kNumerical;
    }
    switch (cfg.format) {
        case Format::csv:
        case Format::table: emit(cfg, out, coords_csv(*omega)); break;
        case Format::json: {
            j["precision"] = coords_json(*omega);
            j["precision_pd"] = pd_json(is_positive_definite(*omega));
            emit(cfg, out, dump(j));
        }
    }
    return kOk;
}

int run_eigs(const RunConfig& cfg, std::ostream& out) {
    const Loaded in = load_inputs(cfg);
    const ThetaEstimate theta = estimate_for(cfg, in);
    if (cfg.format == Format::json) {
        json j = eigen_report(theta.coords);
        j["meta"] = meta_json(meta_for(in, std::nullopt));
        emit(cfg, out, dump(j));
    } else {
        emit(cfg, out, eigen_csv(theta.coords));
    }
    return kOk;
}

int run_threshold(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Loaded in = load_inputs(cfg);
    ThresholdConfig tc;
    std::optional<std::uint64_t> seed;
    if (cfg.lambda) {
        tc = ThresholdConfig::fixed(*cfg.lambda);
    } else if (cfg.lambda_rate) {
        tc = ThresholdConfig::rate(*cfg.lambda_rate);
    } else {
        seed = seed_or_notice(cfg, err);
        tc = ThresholdConfig::resampled(*seed);
    }
    tc.exempt_diagonal = cfg.exempt_diagonal;
    tc.centered = !cfg.no_center;
    const LargeKResult r = estimate_large_k(in.x, in.p, tc);
    if (r.diagonal_zeroed) {
        err << "warning: some a_kk fell below lambda and was set to zero; the estimate is "
               "singular (see --exempt-diagonal)\n";
    }
    if (cfg.format == Format::json) {
        const SampleSize size =
            tc.centered ? SampleSize::centered(in.x.n()) : SampleSize::known_mean(in.x.n());
        json j = threshold_report(r, size);
        j["meta"] = meta_json(meta_for(in, seed));
        emit(cfg, out, dump(j));
    } else {
        emit(cfg, out, coords_csv(r.coords));
    }
    return kOk;
}

int run_augmented(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Loaded in = load_inputs(cfg);
    AugmentedOptions opts;
    std::optional<std::uint64_t> seed;
    if (cfg.lambda) {
        opts.lambda_singleton = *cfg.lambda;
    } else if (in.d > 0) {
        seed = seed_or_notice(cfg, err);
        opts.seed = *seed;
    }
    opts.mode = cfg.hard ? ThresholdMode::hard : ThresholdMode::soft;
    opts.clip_psd = cfg.clip_psd;
    opts.centered = !cfg.no_center;
    const AugmentedCov r = estimate_augmented(in.x, in.p, in.d, opts);
    if (r.min_eigenvalue <= 0.0 && !cfg.clip_psd) {
        err << "warning: assembled estimate is not positive definite (min eigenvalue "
            << r.min_eigenvalue << "); --clip-psd adds a clipped copy\n";
    }
    if (cfg.format == Format::json) {
        json j = augmented_report(r, cfg.level);
        j["meta"] = meta_json(meta_for(in, seed));
        emit(cfg, out, dump(j));
    } else if (cfg.format == Format::csv) {
        emit(cfg, out, theta_csv(r.theta, cfg.level));
    } else {
        emit(cfg, out, theta_table(r.theta, cfg.level));
    }
    return kOk;
}

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    json j;
    try {
        j = json::parse(read_file(cfg.scenario_path));
    } catch (const json::exception& e) {
        throw InputError(cfg.scenario_path + ": " + e.what());
    }
    if (cfg.seed) {
        j["seed"] = *cfg.seed;
    } else if (!j.contains("seed")) {
        seed_or_notice(cfg, err);
    }
    if (cfg.reps) j["replicates"] = *cfg.reps;
    if (cfg.threads) j["threads"] = *cfg.threads;
    ScenarioSpec spec;
    try {
        spec = scenario_from_json(j);
    } catch (const InputError& e) {
        throw InputError(cfg.scenario_path + ": " + e.what());
    }
    const SimReport report = run_scenario(spec);
    err << "simulate: " << report.replicates << " replicates in " << report.wall_seconds
        << " s\n";
    switch (cfg.format) {
        case Format::json: emit(cfg, out, dump(sim_report_json(report))); break;
        case Format::csv: emit(cfg, out, sim_report_csv(report)); break;
        case Format::table: emit(cfg, out, sim_report_table(report)); break;
    }
    return kOk;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Uniform-block covariance and precision estimation", "ubcov"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);

    auto* estimate = app.add_subcommand("estimate", "covariance estimate with exact SEs and CIs");
    auto* precision = app.add_subcommand("precision", "plug-in precision matrix estimate");
    auto* eigs = app.add_subcommand("eigs", "eigenvalues and PD check of the estimate");
    auto* threshold = app.add_subcommand("threshold", "hard-thresholded estimate for large K");
    auto* augmented = app.add_subcommand("augmented", "communities plus singleton features");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo scenario from a JSON spec");

    for (CLI::App* sub : {estimate, precision, eigs, threshold, augmented}) {
        add_data_options(*sub, cfg);
        add_output_options(*sub, cfg);
    }
    for (CLI::App* sub : {estimate, precision, eigs, augmented}) {
        sub->add_flag("--correlation", cfg.correlation, "estimate from the sample correlation");
    }
    add_lambda_options(*threshold, cfg);
    threshold->add_option("--lambda-rate", cfg.lambda_rate, "lambda = C sqrt(log K / n)")
        ->check(CLI::PositiveNumber)
        ->excludes("--lambda")
        ->excludes("--lambda-auto");
    threshold->add_flag("--exempt-diagonal", cfg.exempt_diagonal, "never threshold a_kk");
    add_seed_option(*threshold, cfg);

    augmented->add_option("--singletons", cfg.singletons, "trailing singleton columns");
    add_lambda_options(*augmented, cfg);
    augmented->add_flag("--clip-psd", cfg.clip_psd, "add an eigenvalue-clipped copy");
    augmented->add_flag("--hard", cfg.hard, "hard instead of soft thresholding of singletons");
    add_seed_option(*augmented, cfg);

    simulate->add_option("--scenario", cfg.scenario_path, "scenario JSON file")->required();
    add_seed_option(*simulate, cfg);
    simulate->add_option("--reps", cfg.reps, "number of replicates")->check(CLI::PositiveNumber);
    simulate->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    add_output_options(*simulate, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), kOk);
    } catch (const CLI::CallForAllHelp&) {
        throw UsageError(app.help("", CLI::AppFormatMode::All), kOk);
    } catch (const CLI::CallForVersion&) {
        throw UsageError(std::string(kVersion) + "\n", kOk);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        msg << e.what() << "\n";
        for (CLI::App* sub : app.get_subcommands()) msg << sub->help();
        if (app.get_subcommands().empty()) msg << app.help();
        throw UsageError(msg.str());
    }
    const std::pair<CLI::App*, Command> commands[] = {
        {estimate, Command::estimate},   {precision, Command::precision},
        {eigs, Command::eigs},           {threshold, Command::threshold},
        {augmented, Command::augmented}, {simulate, Command::simulate}};
    for (const auto& [sub, command] : commands) {
        if (sub->parsed()) cfg.command = command;
    }
    if (cfg.correlation && cfg.no_center) {
        throw UsageError("--correlation and --no-center cannot be combined");
    }
    return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
            case Command::estimate: return run_estimate(config, out);
            case Command::precision: return run_precision(config, out, err);
            case Command::eigs: return run_eigs(config, out);
            case Command::threshold: return run_threshold(config, out, err);
            case Command::augmented: return run_augmented(config, out, err);
            case Command::simulate: return run_simulate(config, out, err);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const NotPositiveDefiniteError& e) {
        err << "error: " << e.what() << " (min eigenvalue " << e.min_eigenvalue() << ")\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const UsageError& e) {
        (e.code() == kOk ? out : err) << e.what();
        return e.code();
    }
    return run(cfg, out, err);
}

}  // namespace ubcov::cli
