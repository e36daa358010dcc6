#include "ubcov/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <Eigen/Cholesky>

#include "ubcov/error.hpp"
#include "ubcov/estimate.hpp"
#include "ubcov/mvn.hpp"
#include "ubcov/norms.hpp"
#include "ubcov/normal.hpp"
#include "ubcov/rng.hpp"
#include "ubcov/singleton.hpp"
#include "ubcov/variance.hpp"

namespace ubcov {

namespace {

enum class Method { ub, ub_threshold, sample, soft, hard };

struct Slot {
    Method method;
    bool precision;
    std::string name;
};

struct Loss {
    double frobenius = 0.0;
    double spectral = 0.0;
};

struct Outcome {
    Eigen::VectorXd theta;
    Eigen::VectorXd se;
    std::vector<std::optional<Loss>> losses;
    double lambda = 0.0;
};

// Truth in whichever form the losses need.
class Target {
public:
    Target(const ScenarioSpec& spec, bool precision) {
        if (spec.truth_ub) {
            ub_ = precision ? inverse(*spec.truth_ub) : *spec.truth_ub;
            dense_ = expand(*ub_).matrix();
        } else if (precision) {
            const Eigen::LLT<Eigen::MatrixXd> llt(spec.truth_dense->matrix());
            const auto dim = spec.truth_dense->matrix().rows();
            dense_ = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
            dense_ = 0.5 * (dense_ + dense_.transpose()).eval();
        } else {
            dense_ = spec.truth_dense->matrix();
        }
    }

    Loss against(const UniformBlockCoords& est) const {
        if (ub_) return {frobenius_ub(est, *ub_), spectral_ub(est, *ub_)};
        return against(expand(est).matrix());
    }

    Loss against(const Eigen::MatrixXd& est) const {
        const Eigen::MatrixXd diff = est - dense_;
        return {frobenius_dense(diff), spectral_dense_sym(diff)};
    }

private:
    std::optional<UniformBlockCoords> ub_;
    Eigen::MatrixXd dense_;
};

std::vector<Slot> method_slots(const ScenarioSpec& spec) {
    std::vector<Slot> slots;
    slots.push_back({Method::ub, false, "uniform_block"});
    if (spec.precision) slots.push_back({Method::ub, true, "uniform_block"});
    if (spec.threshold) slots.push_back({Method::ub_threshold, false, "uniform_block_threshold"});
    if (spec.baselines) {
        slots.push_back({Method::sample, false, "sample"});
        if (spec.precision) slots.push_back({Method::sample, true, "sample"});
        slots.push_back({Method::soft, false, "soft_threshold"});
        slots.push_back({Method::hard, false, "hard_threshold"});
    }
    return slots;
}

std::optional<Eigen::MatrixXd> dense_inverse(const Eigen::MatrixXd& m) {
    const Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd pivots = Eigen::MatrixXd(llt.matrixL()).diagonal().cwiseAbs2();
    if (pivots.minCoeff() < 1e-14 * m.diagonal().cwiseAbs().maxCoeff()) return std::nullopt;
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    return 0.5 * (inv + inv.transpose());
}

class Runner {
public:
    explicit Runner(const ScenarioSpec& spec)
        : spec_(spec),
          slots_(method_slots(spec)),
          sampler_(spec.truth_matrix()),
          covariance_(spec, false) {
        if (spec.precision) precision_.emplace(spec, true);
    }

    const std::vector<Slot>& slots() const noexcept { return slots_; }

    Outcome run(std::size_t replicate) const {
        const std::uint64_t seed = derive_seed(spec_.seed, replicate);
        const DataMatrix x = sampler_.draw(spec_.n, seed);
        const BlockStats stats = block_stats_from_data(x, spec_.partition, spec_.centered);
        const UniformBlockCoords est = estimate_coords(stats);

        Outcome out;
        out.losses.resize(slots_.size());
        if (spec_.parameter_table) {
            out.theta = theta_vector(est);
            out.se = exact_variance_theta(est, stats.size).cwiseMax(0.0).cwiseSqrt();
        }
        std::optional<SampleCovariance> s;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            const Slot& slot = slots_[i];
            const Target& target = slot.precision ? *precision_ : covariance_;
            switch (slot.method) {
                case Method::ub:
                    if (!slot.precision) {
                        out.losses[i] = target.against(est);
                    } else if (is_positive_definite(est).is_pd) {
                        try {
                            out.losses[i] = target.against(inverse(est));
                        } catch (const SingularMatrixError&) {
                        }
                    }
                    break;
                case Method::ub_threshold: {
                    ThresholdConfig cfg = spec_.threshold_config;
                    cfg.seed = derive_seed(seed, 1);
                    cfg.centered = spec_.centered;
                    const LargeKResult r = estimate_large_k(x, spec_.partition, cfg);
                    out.lambda = r.lambda;
                    out.losses[i] = target.against(r.coords);
                    break;
                }
                case Method::sample:
                    if (!s) s = sample_covariance(x, spec_.centered);
                    if (!slot.precision) {
                        out.losses[i] = target.against(s->matrix.matrix());
                    } else if (auto inv = dense_inverse(s->matrix.matrix())) {
                        out.losses[i] = target.against(*inv);
                    }
                    break;
                case Method::soft:
                case Method::hard: {
                    const bool soft = slot.method == Method::soft;
                    const DenseThresholdResult r =
                        universal_threshold(x, soft ? ThresholdMode::soft : ThresholdMode::hard,
                                            50, 20, derive_seed(seed, soft ? 2 : 3),
                                            spec_.centered);
                    out.losses[i] = target.against(r.estimate);
                    break;
                }
            }
        }
        return out;
    }

private:
    const ScenarioSpec& spec_;
    std::vector<Slot> slots_;
    MvnSampler sampler_;
    Target covariance_;
    std::optional<Target> precision_;
};

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double total = 0.0;
    for (double x : v) total += x;
    return total / static_cast<double>(v.size());
}

std::vector<Outcome> run_all(const Runner& runner, std::size_t replicates, std::size_t threads) {
    std::vector<Outcome> outcomes(replicates);
    std::vector<std::exception_ptr> errors(replicates);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next.fetch_add(1); r < replicates; r = next.fetch_add(1)) {
            try {
                outcomes[r] = runner.run(r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(threads, replicates);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return outcomes;
}

std::vector<ParameterSummary> summarize_parameters(const ScenarioSpec& spec,
                                                   const std::vector<Outcome>& outcomes) {
    const Eigen::VectorXd truth = theta_vector(*spec.truth_ub);
    const std::vector<std::string> names = theta_names(spec.partition.communities());
    const auto reps = static_cast<double>(outcomes.size());
    std::vector<ParameterSummary> rows;
    rows.reserve(names.size());
    for (Eigen::Index j = 0; j < truth.size(); ++j) {
        ParameterSummary row;
        row.name = names[static_cast<std::size_t>(j)];
        row.truth = truth(j);
        double sum = 0.0;
        double se_sum = 0.0;
        std::size_t covered = 0;
        for (const Outcome& o : outcomes) {
            sum += o.theta(j);
            se_sum += o.se(j);
            if (wald_ci(o.theta(j), o.se(j), spec.level).contains(row.truth)) ++covered;
        }
        row.mean = sum / reps;
        double ss = 0.0;
        for (const Outcome& o : outcomes) ss += (o.theta(j) - row.mean) * (o.theta(j) - row.mean);
        const double mcsd = outcomes.size() > 1 ? std::sqrt(ss / (reps - 1.0)) : 0.0;
        row.bias = row.mean - row.truth;
        row.abs_bias_x100 = 100.0 * std::abs(row.bias);
        if (row.truth != 0.0) row.arb_percent = 100.0 * std::abs(row.bias) / std::abs(row.truth);
        row.mcsd_x100 = 100.0 * mcsd;
        row.ase_x100 = 100.0 * se_sum / reps;
        row.cp_percent = 100.0 * static_cast<double>(covered) / reps;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

const MethodLoss* SimReport::find_loss(const std::string& method,
                                       const std::string& target) const {
    for (const MethodLoss& m : losses) {
        if (m.method == method && m.target == target) return &m;
    }
    return nullptr;
}

SimReport run_scenario(const ScenarioSpec& spec) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const Runner runner(spec);
    const std::vector<Outcome> outcomes = run_all(runner, spec.replicates, spec.threads);

    SimReport report;
    report.kind = spec.kind;
    report.n = spec.n;
    report.p = spec.dim();
    report.communities = spec.partition.communities();
    report.replicates = spec.replicates;
    report.seed = spec.seed;
    report.level = spec.level;
    report.sigma_perturb = spec.sigma_perturb;
    if (spec.parameter_table && spec.truth_ub) {
        report.parameters = summarize_parameters(spec, outcomes);
    }
    for (std::size_t i = 0; i < runner.slots().size(); ++i) {
        const Slot& slot = runner.slots()[i];
        MethodLoss m;
        m.method = slot.name;
        m.target = slot.precision ? "precision" : "covariance";
        for (const Outcome& o : outcomes) {
            if (o.losses[i]) {
                m.frobenius.push_back(o.losses[i]->frobenius);
                m.spectral.push_back(o.losses[i]->spectral);
            } else {
                ++m.failures;
            }
        }
        m.mean_frobenius = mean(m.frobenius);
        m.median_frobenius = median(m.frobenius);
        m.mean_spectral = mean(m.spectral);
        report.losses.push_back(std::move(m));
    }
    if (spec.threshold) {
        double total = 0.0;
        for (const Outcome& o : outcomes) total += o.lambda;
        report.mean_lambda = total / static_cast<double>(outcomes.size());
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace ubcov
