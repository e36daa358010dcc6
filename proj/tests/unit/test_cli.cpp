#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "ubcov/mvn.hpp"
#include "ubcov/scenario.hpp"
#include "ubcov_cli/cli.hpp"
#include "ubcov_cli/io.hpp"
#include "ubcov_cli/report.hpp"

using namespace ubcov;
using namespace ubcov::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ubcov_cli_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& contents) const {
        const std::string p = (path / name).string();
        write_file(p, contents);
        return p;
    }
    std::string at(const std::string& name) const { return (path / name).string(); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data_csv(std::size_t p_ind, std::size_t n, std::uint64_t seed, std::size_t extra = 0) {
    const UniformBlockCoords truth = scenario1_truth(p_ind);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(
        static_cast<Eigen::Index>(truth.dim() + extra), static_cast<Eigen::Index>(truth.dim() + extra));
    sigma.topLeftCorner(truth.dim(), truth.dim()) = expand(truth).matrix();
    const DataMatrix x = sample_mvn(n, DenseSymMatrix(sigma), seed);
    std::ostringstream s;
    s.precision(17);
    for (Eigen::Index i = 0; i < x.rows().rows(); ++i) {
        for (Eigen::Index j = 0; j < x.rows().cols(); ++j) s << (j ? "," : "") << x.rows()(i, j);
        s << "\n";
    }
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("CSV ingestion") {
    const DataMatrix x = parse_csv("1,2\n3,4\n5,6\n", false);
    CHECK(x.n() == 3);
    CHECK(x.p() == 2);
    CHECK(x.rows()(2, 1) == 6.0);
    CHECK(parse_csv("a,b\n1,2\n3,4\r\n\n", true).n() == 2);
    CHECK(parse_csv("\"1.5\", 2\n3,4e-1\n", false).rows()(1, 1) == 0.4);
    CHECK_THROWS_WITH_AS(parse_csv("1,2\n3,4,5\n", false), doctest::Contains("line 2"), InputError);
    CHECK_THROWS_WITH_AS(parse_csv("1,2\n3,x\n", false), doctest::Contains("line 2, column 2"),
                         InputError);
    CHECK_THROWS_AS(parse_csv("", false), InputError);
    CHECK_THROWS_AS(load_data("/nonexistent/file.csv", false), InputError);
}

TEST_CASE("partition ingestion") {
    CHECK(parse_partition("30 30 30 30 30").total() == 150);
    const PartitionVector p = parse_partition("34 18 14 14 13 10 4\n");
    CHECK(p.communities() == 7);
    CHECK(p.total() == 107);
    CHECK(parse_partition("[3, 4]").total() == 7);
    CHECK(parse_partition("3,4,\n5").total() == 12);
    CHECK_THROWS_AS(parse_partition("1 5"), InputError);
    CHECK_THROWS_AS(parse_partition("3 x"), InputError);
    CHECK_THROWS_AS(parse_partition(""), InputError);
}

TEST_CASE("argument parsing") {
    const RunConfig e = parse_args({"estimate", "--data", "x.csv", "--partition", "p.txt"});
    CHECK(e.command == Command::estimate);
    CHECK(e.data_path == "x.csv");
    const RunConfig s = parse_args({"simulate", "--scenario", "s.json", "--seed", "7", "--out", "r.json"});
    CHECK(s.command == Command::simulate);
    CHECK(s.seed == std::uint64_t{7});
    CHECK(s.output_path == std::string("r.json"));
    CHECK(call({"estimate"}).code == kUsage);
    CHECK(call({"estimate", "--data", "x", "--partition", "p", "--bogus"}).code == kUsage);
    CHECK(call({"threshold", "--data", "x", "--partition", "p", "--lambda", "1", "--lambda-auto"})
              .code == kUsage);
    CHECK(call({"estimate", "--data", "x", "--partition", "p", "--correlation", "--no-center"})
              .code == kUsage);
    CHECK(call({"estimate", "--data", "x", "--partition", "p", "--format", "xml"}).code == kUsage);
    CHECK(call({}).code == kUsage);
    CHECK(call({"--help"}).code == kOk);
}

TEST_CASE("estimate: JSON contents, CSV header, round trip") {
    TempDir dir;
    const std::string data = dir.file("x.csv", data_csv(4, 60, 1));
    const std::string part = dir.file("p.txt", "4 4 4 4 4");
    const Outcome r = call({"estimate", "--data", data, "--partition", part});
    REQUIRE(r.code == kOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["parameters"].size() == 20);
    CHECK(j["meta"]["q"] == 20);
    CHECK(j["meta"]["n"] == 60);
    CHECK(j["ci"]["level"] == 0.95);
    CHECK(j["pd"]["is_pd"].is_boolean());

    const DataMatrix x = load_data(data, false);
    const ThetaEstimate ref = estimate_from_data(x, parse_partition("4 4 4 4 4"), true);
    const UniformBlockCoords back = coords_from_json(j["theta"], ref.coords.partition());
    CHECK(back == ref.coords);

    const Outcome csv = call({"estimate", "--data", data, "--partition", part, "--format", "csv"});
    CHECK(csv.out.rfind("name,estimate,se,ci_lo,ci_hi\n", 0) == 0);

    const std::string out = dir.at("r.json");
    CHECK(call({"estimate", "--data", data, "--partition", part, "--out", out}).code == kOk);
    CHECK(fs::exists(out));
    CHECK(call({"estimate", "--data", data, "--partition", part, "--out", "/nonexistent/d/r.json"})
              .code == kIo);
    const std::string wrong = dir.file("w.txt", "4 4 4 4");
    CHECK(call({"estimate", "--data", data, "--partition", wrong}).code == kIo);
}

TEST_CASE("precision on a singular estimate exits 3 with min_eig") {
    TempDir dir;
    // The first community sums to zero in every row, so Delta is singular.
    const std::string data = dir.file("x.csv", "1,-1,0.3,0.1\n-1,1,0.2,-0.5\n2,-2,-0.1,0.4\n0.5,-0.5,0.9,0.2\n");
    const std::string part = dir.file("p.txt", "2 2");
    const Outcome r = call({"precision", "--data", data, "--partition", part});
    CHECK(r.code == kNumerical);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("min_eig"));
    CHECK(j["min_eig"].get<double>() < 1e-10);
}

TEST_CASE("other commands run") {
    TempDir dir;
    const std::string data = dir.file("x.csv", data_csv(4, 60, 2, 3));
    const std::string part = dir.file("p.txt", "4 4 4 4 4");
    const std::string data_ub = dir.file("y.csv", data_csv(4, 60, 3));
    CHECK(call({"precision", "--data", data_ub, "--partition", part}).code == kOk);
    const Outcome e = call({"eigs", "--data", data_ub, "--partition", part});
    REQUIRE(e.code == kOk);
    CHECK(nlohmann::json::parse(e.out)["eigenvalues"].size() == 10);
    const Outcome t = call({"threshold", "--data", data_ub, "--partition", part});
    CHECK(t.code == kOk);
    CHECK(t.err.find("seed 0") != std::string::npos);
    CHECK(call({"threshold", "--data", data_ub, "--partition", part, "--lambda", "0.5",
                "--exempt-diagonal"})
              .code == kOk);
    const Outcome a = call({"augmented", "--data", data, "--partition", part, "--singletons", "3",
                            "--seed", "1", "--clip-psd"});
    REQUIRE(a.code == kOk);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["d1"].size() == 20);
    CHECK(j["d2"].size() == 3);
    CHECK(j["meta"]["seed"] == 1);
    CHECK(call({"augmented", "--data", data, "--partition", part}).code == kIo);
}

TEST_CASE("simulate: determinism across thread counts and overrides") {
    TempDir dir;
    const std::string spec = dir.file("s.json", R"({"kind": "scenario1", "n": 80, "replicates": 12, "p_ind": 5})");
    const Outcome a = call({"simulate", "--scenario", spec, "--seed", "7", "--threads", "1"});
    const Outcome b = call({"simulate", "--scenario", spec, "--seed", "7", "--threads", "8"});
    REQUIRE(a.code == kOk);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["meta"]["seed"] == 7);
    CHECK(j["replicates"] == 12);
    CHECK(j["parameters"].size() == 20);
    const Outcome c = call({"simulate", "--scenario", spec, "--seed", "8"});
    CHECK(c.out != a.out);
    CHECK(nlohmann::json::parse(call({"simulate", "--scenario", spec, "--reps", "3"}).out)["replicates"] == 3);
    const std::string bad = dir.file("b.json", R"({"kind": "scenario1", "nn": 3})");
    CHECK(call({"simulate", "--scenario", bad}).code == kIo);
    const std::string custom = dir.file("c.json", R"({"kind": "custom", "n": 30, "replicates": 3, "seed": 1,
        "truth": {"partition": [3, 3], "a": [1.0, 2.0], "b": [[0.5, 0.1], [0.1, 0.3]]}})");
    const Outcome cu = call({"simulate", "--scenario", custom, "--format", "csv"});
    REQUIRE(cu.code == kOk);
    CHECK(cu.out.rfind("name,truth,", 0) == 0);
}

}  // TEST_SUITE
