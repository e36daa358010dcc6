#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ubcov/error.hpp"
#include "ubcov/estimate.hpp"
#include "ubcov/normal.hpp"
#include "ubcov/scenario.hpp"
#include "ubcov/variance.hpp"

using namespace ubcov;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd small_data() {
    MatrixXd x(5, 4);
    x << 1.0, 2.0, 0.5, -1.0,
        0.3, -0.2, 1.5, 2.0,
        -1.1, 0.4, 0.0, 0.7,
        2.2, 1.0, -0.6, 0.1,
        0.0, -1.3, 0.9, -0.4;
    return x;
}

}  // namespace

TEST_SUITE("estimate") {

TEST_CASE("data validation") {
    CHECK_THROWS_AS(DataMatrix(MatrixXd::Zero(1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(DataMatrix(MatrixXd::Zero(3, 1)), std::invalid_argument);
    MatrixXd bad = small_data();
    bad(2, 3) = std::nan("");
    CHECK_THROWS_AS(DataMatrix{bad}, std::invalid_argument);
}

TEST_CASE("sample covariance in both mean regimes") {
    const DataMatrix x(small_data());
    const MatrixXd raw = small_data();
    const SampleCovariance known = sample_covariance(x, false);
    CHECK(oracle::max_abs(known.matrix.matrix() - raw.transpose() * raw / 5.0) < 1e-14);
    CHECK(known.size == SampleSize{5, 5});
    const MatrixXd c = raw.rowwise() - raw.colwise().mean();
    const SampleCovariance centered = sample_covariance(x, true);
    CHECK(oracle::max_abs(centered.matrix.matrix() - c.transpose() * c / 4.0) < 1e-14);
    CHECK(centered.size == SampleSize{5, 4});
}

TEST_CASE("sample correlation has a unit diagonal and names constant columns") {
    const SampleCovariance r = sample_correlation(DataMatrix(small_data()));
    for (int i = 0; i < 4; ++i) CHECK(r.matrix(i, i) == 1.0);
    MatrixXd flat = small_data();
    flat.col(2).setConstant(3.0);
    CHECK_THROWS_WITH_AS(sample_correlation(DataMatrix(flat)), doctest::Contains("column 3"),
                         std::invalid_argument);
}

TEST_CASE("block statistics from data match those from S") {
    std::mt19937_64 gen(21);
    for (bool centered : {true, false}) {
        const PartitionVector p{3, 2, 4};
        const MatrixXd x = oracle::gaussian_rows(gen, MatrixXd::Identity(9, 9), 12);
        const DataMatrix data(x);
        const SampleCovariance s = sample_covariance(data, centered);
        const BlockStats a = block_stats(s.matrix, p, s.size);
        const BlockStats b = block_stats_from_data(data, p, centered);
        CHECK(a.size == b.size);
        CHECK((a.trace_diag - b.trace_diag).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.block_sum - b.block_sum).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("UMVUE recovers the coordinates of a population matrix exactly") {
    std::mt19937_64 gen(22);
    for (int t = 0; t < 50; ++t) {
        const auto p = oracle::random_partition(gen);
        const auto c = oracle::random_pd_coords(gen, p);
        const ThetaEstimate e = estimate_theta(block_stats(expand(c), p, 10));
        CHECK((e.coords.a() - c.a()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((e.coords.b() - c.b()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("UMVUE on the identity") {
    const PartitionVector p{2, 2};
    const UniformBlockCoords c = estimate_coords(block_stats(DenseSymMatrix::identity(4), p, 10));
    CHECK(c.a()(0) == 1.0);
    CHECK(c.b()(0, 0) == 0.0);
    CHECK(c.b()(0, 1) == 0.0);
}

TEST_CASE("correlation mode gives a_kk + b_kk = 1") {
    std::mt19937_64 gen(23);
    const PartitionVector p{3, 4};
    const auto c = oracle::random_pd_coords(gen, p);
    const DataMatrix x(oracle::gaussian_rows(gen, oracle::dense(c), 40));
    const ThetaEstimate e = estimate_correlation_mode(x, p);
    for (int k = 0; k < 2; ++k) CHECK(e.coords.a()(k) + e.coords.b()(k, k) == doctest::Approx(1.0));
}

TEST_CASE("parameter bookkeeping") {
    const auto names = theta_names(3);
    REQUIRE(names.size() == 9);
    CHECK(names[0] == "a_1_1");
    CHECK(names[3] == "b_1_1");
    CHECK(names[4] == "b_1_2");
    CHECK(names[8] == "b_3_3");
    CHECK(theta_index_b(3, 1, 2) == 7);
    CHECK(theta_index_b(3, 2, 1) == 7);
    std::mt19937_64 gen(24);
    const PartitionVector p{2, 3, 2};
    const auto c = oracle::random_coords(gen, p);
    CHECK(coords_from_theta(theta_vector(c), p) == c);
}

TEST_CASE("case-table covariance of block means equals the Wishart oracle") {
    std::mt19937_64 gen(25);
    for (int t = 0; t < 60; ++t) {
        const auto p = oracle::random_partition(gen);
        const auto c = oracle::random_pd_coords(gen, p);
        const SampleSize size = t % 2 ? SampleSize::centered(40) : SampleSize::known_mean(40);
        const MatrixXd ours = block_mean_covariance(c, size);
        const MatrixXd ref =
            oracle::block_mean_covariance(oracle::dense(c), p, static_cast<double>(size.dof));
        CHECK(oracle::max_abs(ours - ref) <= 1e-10 * oracle::max_abs(ref));
        const MatrixXd full = exact_covariance_matrix(c, size);
        const VectorXd var = exact_variance_theta(c, size);
        CHECK((full.diagonal() - var).cwiseAbs().maxCoeff() <= 1e-10 * var.cwiseAbs().maxCoeff());
        const MatrixXd phi = moment_transform(p);
        CHECK(oracle::max_abs(full - phi * ref * phi.transpose()) <=
              1e-10 * oracle::max_abs(full));
    }
}

TEST_CASE("block-mean transform maps psi to theta") {
    std::mt19937_64 gen(26);
    const PartitionVector p{3, 5};
    const auto c = oracle::random_coords(gen, p);
    const VectorXd theta = moment_transform(p) * block_mean_vector(c);
    CHECK((theta - theta_vector(c)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("exact standard errors at the five-community truth") {
    const UniformBlockCoords s = scenario1_truth(30);
    const VectorXd se = exact_variance_theta(s, std::size_t{100}).cwiseSqrt() * 100.0;
    CHECK(se(2) == doctest::Approx(1.976879597554).epsilon(1e-10));
    CHECK(se(static_cast<Eigen::Index>(theta_index_b(5, 0, 0))) ==
          doctest::Approx(95.677848599578).epsilon(1e-10));
    CHECK(se(static_cast<Eigen::Index>(theta_index_b(5, 0, 1))) ==
          doctest::Approx(61.962080783285).epsilon(1e-10));
}

TEST_CASE("Monte Carlo: unbiasedness and exact variances") {
    std::mt19937_64 gen(27);
    const PartitionVector p{3, 4};
    const auto c = oracle::random_pd_coords(gen, p);
    const MatrixXd sigma = oracle::dense(c);
    const int reps = 20000;
    const std::size_t n = 15;
    const VectorXd truth = theta_vector(c);
    VectorXd sum = VectorXd::Zero(truth.size());
    VectorXd sq = VectorXd::Zero(truth.size());
    for (int r = 0; r < reps; ++r) {
        const DataMatrix x(oracle::gaussian_rows(gen, sigma, static_cast<Eigen::Index>(n)));
        const VectorXd est = theta_vector(estimate_coords(block_stats_from_data(x, p, true)));
        sum += est;
        sq += est.cwiseAbs2();
    }
    const VectorXd mean = sum / reps;
    const VectorXd var = sq / reps - mean.cwiseAbs2();
    const VectorXd exact = exact_variance_theta(c, SampleSize::centered(n));
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        CHECK(std::abs(mean(i) - truth(i)) < 4.5 * std::sqrt(exact(i) / reps));
        CHECK(var(i) == doctest::Approx(exact(i)).epsilon(0.06));
    }
}

TEST_CASE("plug-in precision") {
    std::mt19937_64 gen(28);
    const PartitionVector p{4, 3};
    const auto c = oracle::random_pd_coords(gen, p);
    const ThetaEstimate e = estimate_theta(block_stats(expand(c), p, 50));
    const MatrixXd prod = expand(plugin_precision(e)).matrix() * expand(plugin_covariance(e)).matrix();
    CHECK(oracle::max_abs(prod - MatrixXd::Identity(7, 7)) < 1e-10);

    MatrixXd b = MatrixXd::Zero(2, 2);
    b(0, 0) = -1.0;
    const UniformBlockCoords bad(VectorXd::Ones(2), b, PartitionVector{2, 2});
    const ThetaEstimate be = estimate_theta(block_stats(expand(bad), bad.partition(), 50));
    CHECK_THROWS_AS(plugin_precision(be), NotPositiveDefiniteError);
}

TEST_CASE("normal quantile and Wald intervals") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-13));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
    CHECK(normal_quantile(0.3) == doctest::Approx(-normal_quantile(0.7)).epsilon(1e-14));
    CHECK(kZ975 == doctest::Approx(normal_quantile(0.975)).epsilon(1e-15));
    const Interval ci = wald_ci(6.731, 0.957, 0.95);
    CHECK(ci.lower == doctest::Approx(4.855314466795).epsilon(1e-12));
    CHECK(ci.upper == doctest::Approx(8.606685533205).epsilon(1e-12));
    CHECK_THROWS_AS(wald_ci(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(wald_ci(1.0, -1.0, 0.95), std::invalid_argument);
    CHECK(wald_ci(2.0, 0.0, 0.9).contains(2.0));
}

TEST_CASE("hand-computable estimation cases") {
    const PartitionVector p{2, 2};
    const ThetaEstimate j4 =
        estimate_theta(block_stats(DenseSymMatrix(MatrixXd::Ones(4, 4)), p, 10));
    CHECK(j4.coords.b()(0, 0) == doctest::Approx(1.0));
    CHECK(j4.coords.b()(0, 1) == doctest::Approx(1.0));
    CHECK(std::abs(j4.coords.a()(0)) < 1e-15);

    const UniformBlockCoords jc(VectorXd::Zero(1), MatrixXd::Ones(1, 1), PartitionVector{2});
    CHECK(expand(coords_from_theta(theta_vector(jc), jc.partition())).matrix() ==
          MatrixXd::Ones(2, 2));

    MatrixXd b(2, 2);
    b << 2.0, 1.0, 1.0, 2.0;
    const UniformBlockCoords c(VectorXd::Ones(2), b, p);
    const MatrixXd psi = block_mean_covariance(c, SampleSize::centered(101));
    CHECK(psi(0, 1) == doctest::Approx(0.02).epsilon(1e-12));

    VectorXd a(2);
    a << 0.0, 1.0;
    const VectorXd var =
        exact_variance_theta(UniformBlockCoords(a, b, p), SampleSize::centered(30));
    CHECK(var(0) == 0.0);

    const UniformBlockCoords blockdiag(VectorXd::Ones(3),
                                       (MatrixXd(3, 3) << 1, 0, 0, 0, 2, 0, 0, 0, 3).finished(),
                                       PartitionVector{2, 3, 4});
    const MatrixXd cov = exact_covariance_matrix(blockdiag, SampleSize::centered(40));
    std::vector<bool> cross(static_cast<std::size_t>(cov.rows()), false);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = k + 1; l < 3; ++l) {
            cross[theta_index_b(3, k, l)] = true;
        }
    }
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
        for (Eigen::Index j = 0; j < cov.cols(); ++j) {
            if (cross[static_cast<std::size_t>(i)] != cross[static_cast<std::size_t>(j)]) {
                CHECK(cov(i, j) == 0.0);
            }
        }
    }

    const Interval unit = wald_ci(0.0, 1.0, 0.95);
    CHECK(unit.lower == doctest::Approx(-1.959964).epsilon(1e-6));
    CHECK(unit.upper == doctest::Approx(1.959964).epsilon(1e-6));
    const Interval point = wald_ci(5.0, 0.0, 0.95);
    CHECK(point.lower == 5.0);
    CHECK(point.upper == 5.0);
}

TEST_CASE("correlation mode on a seven-community layout") {
    std::mt19937_64 gen(29);
    const PartitionVector p{34, 18, 14, 14, 13, 10, 4};
    std::normal_distribution<double> nd;
    MatrixXd x(288, static_cast<Eigen::Index>(p.total()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x.data()[i] = nd(gen);
    }
    const ThetaEstimate e = estimate_correlation_mode(DataMatrix(x), p);
    CHECK(p.total() == 107);
    CHECK(e.se.size() == 35);
    for (Eigen::Index k = 0; k < 7; ++k) {
        CHECK(e.coords.a()(k) + e.coords.b()(k, k) == doctest::Approx(1.0));
    }
}

TEST_CASE("Monte Carlo: joint covariance of the single-community estimates") {
    std::mt19937_64 gen(30);
    const PartitionVector p{5};
    const UniformBlockCoords c(VectorXd::Constant(1, 1.5), MatrixXd::Constant(1, 1, 0.7), p);
    const MatrixXd sigma = oracle::dense(c);
    const int reps = 20000;
    const std::size_t n = 20;
    double sa = 0.0;
    double sb = 0.0;
    double sab = 0.0;
    std::vector<double> av, bv;
    for (int r = 0; r < reps; ++r) {
        const DataMatrix x(oracle::gaussian_rows(gen, sigma, static_cast<Eigen::Index>(n)));
        const UniformBlockCoords est = estimate_coords(block_stats_from_data(x, p, true));
        av.push_back(est.a()(0));
        bv.push_back(est.b()(0, 0));
        sa += est.a()(0);
        sb += est.b()(0, 0);
    }
    const double ma = sa / reps;
    const double mb = sb / reps;
    std::vector<double> prod(av.size());
    for (std::size_t r = 0; r < av.size(); ++r) {
        prod[r] = (av[r] - ma) * (bv[r] - mb);
        sab += prod[r];
    }
    const double emp = sab / (reps - 1);
    double sq = 0.0;
    for (double v : prod) {
        sq += (v - emp) * (v - emp);
    }
    const double mc_se = std::sqrt(sq / (reps - 1) / reps);
    const MatrixXd exact = exact_covariance_matrix(c, SampleSize::centered(n));
    CHECK(std::abs(emp - exact(0, 1)) < 3.0 * mc_se);
}

}  // TEST_SUITE
