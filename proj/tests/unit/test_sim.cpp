#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "ubcov/error.hpp"
#include "ubcov/mvn.hpp"
#include "ubcov/rng.hpp"
#include "ubcov/scenario.hpp"
#include "ubcov/simulate.hpp"

using namespace ubcov;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("sim") {

TEST_CASE("counter generator: determinism, range, moments") {
    CounterRng a(7);
    CounterRng b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CounterRng r(3);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK_UNARY(u > 0.0);
        CHECK_UNARY(u < 1.0);
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.015);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(r.below(10));
    CHECK(seen.size() == 10);
    CHECK(*seen.rbegin() == 9);
}

TEST_CASE("shuffle produces a permutation") {
    std::vector<std::size_t> v(50);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    CounterRng r(5);
    shuffle(v, r);
    std::set<std::size_t> s(v.begin(), v.end());
    CHECK(s.size() == 50);
    CHECK(*s.rbegin() == 49);
}

TEST_CASE("multivariate normal sampling") {
    const DataMatrix big = sample_mvn(100000, DenseSymMatrix::identity(2), 1);
    const MatrixXd s = sample_covariance(big, true).matrix.matrix();
    CHECK(oracle::max_abs(s - MatrixXd::Identity(2, 2)) < 0.02);
    const UniformBlockCoords truth = scenario1_truth(3);
    CHECK(sample_mvn(20, truth, 4).rows() == sample_mvn(20, truth, 4).rows());
    CHECK(sample_mvn(20, truth, 4).rows() != sample_mvn(20, truth, 5).rows());
    MatrixXd bad = MatrixXd::Identity(3, 3);
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(MvnSampler(DenseSymMatrix(bad)), NotPositiveDefiniteError);
}

TEST_CASE("Wishart perturbation") {
    CHECK(wishart_perturbation(10, 0.0, 1).matrix().isZero());
    CHECK_THROWS_AS(wishart_perturbation(10, -0.1, 1), std::invalid_argument);
    double mean_diag = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DenseSymMatrix m = wishart_perturbation(150, 0.1, seed);
        if (seed == 0) {
            CHECK(m.matrix() == m.matrix().transpose());
            CHECK(m.eigenvalues()(0) >= -1e-9);
        }
        mean_diag += m.matrix().diagonal().mean() / 20.0;
    }
    CHECK(mean_diag == doctest::Approx(15.0).epsilon(0.1));
}

TEST_CASE("scenario truths and validation") {
    CHECK(is_positive_definite(scenario1_truth(30)).is_pd);
    for (std::size_t k : {30, 40, 50}) {
        const UniformBlockCoords t = scenario2_truth(k, 10, 11);
        CHECK(t.dim() == 10 * k);
        CHECK(is_positive_definite(t).is_pd);
    }
    const DenseSymMatrix t3 = scenario3_truth(30, 0.5, 1);
    CHECK(t3.dim() == 150);
    CHECK(t3.eigenvalues()(0) > 0.0);
    CHECK(scenario3_truth(30, 0.0, 1).matrix() == expand(scenario1_truth(30)).matrix());
    CHECK(to_string(scenario_kind_from_string("scenario3")) == "scenario3");
    CHECK_THROWS_AS(scenario_kind_from_string("nope"), std::invalid_argument);

    ScenarioSpec spec = make_scenario1(50, 2, 1, 3);
    spec.truth_ub = UniformBlockCoords(-VectorXd::Ones(5), MatrixXd::Zero(5, 5),
                                       spec.partition);
    CHECK_THROWS_AS(spec.validate(), NotPositiveDefiniteError);
    spec = make_scenario1(50, 2, 1, 3);
    spec.truth_dense = DenseSymMatrix::identity(15);
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("run_scenario: report shape and invariants") {
    ScenarioSpec spec = make_scenario1(60, 40, 3, 6);
    spec.baselines = true;
    const SimReport r = run_scenario(spec);
    CHECK(r.parameters.size() == 20);
    for (const auto& s : r.parameters) {
        CHECK(s.cp_percent >= 0.0);
        CHECK(s.cp_percent <= 100.0);
        CHECK(s.arb_percent.has_value() == (s.truth != 0.0));
    }
    for (const auto& m : r.losses) {
        CHECK(m.frobenius.size() + m.failures == 40);
        for (double v : m.frobenius) CHECK(v >= 0.0);
    }
    REQUIRE(r.find_loss("uniform_block", "covariance") != nullptr);
    REQUIRE(r.find_loss("sample", "precision") != nullptr);
    CHECK(r.find_loss("uniform_block", "covariance")->mean_frobenius <
          r.find_loss("sample", "covariance")->mean_frobenius);
}

TEST_CASE("run_scenario is independent of the thread count") {
    ScenarioSpec spec = make_scenario3(0.1, 50, 6, 9, 6);
    const SimReport one = run_scenario(spec);
    spec.threads = 4;
    const SimReport four = run_scenario(spec);
    REQUIRE(one.losses.size() == four.losses.size());
    for (std::size_t i = 0; i < one.losses.size(); ++i) {
        CHECK(one.losses[i].frobenius == four.losses[i].frobenius);
        CHECK(one.losses[i].spectral == four.losses[i].spectral);
    }
    ScenarioSpec s2 = make_scenario2(10, 30, 4, 2, 5);
    const SimReport a = run_scenario(s2);
    s2.threads = 3;
    const SimReport b = run_scenario(s2);
    CHECK(a.mean_lambda == b.mean_lambda);
    CHECK(a.losses[1].frobenius == b.losses[1].frobenius);
}

}  // TEST_SUITE
