#include <homoglab/config.hpp>
#include <homoglab/report.hpp>
#include <homoglab_cli/cli.hpp>

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;
using homoglab::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "homoglab");
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("homoglab_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

constexpr const char* kTinySweep =
    "k = 2\n"
    "gamma = 0\n"
    "eps = [1/2, 1/4, 1/8]\n"
    "n_per_period = 2\n"
    "layers_per_eps = 2\n"
    "limit_resolution = 16\n"
    "cell_n = 8\n";

}  // namespace

TEST(Cli, CellLaminate) {
  fs::path dir = scratch("cell");
  Result r = invoke({"cell", "--coefficient", "laminate-1-4", "--n", "64", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(homoglab::read_text_file(dir / "D0.json"));
  auto d = doc.at("D0");
  EXPECT_NEAR(d[0][0].get<double>(), 1.6, 0.016);
  EXPECT_NEAR(d[1][1].get<double>(), 2.5, 0.025);
  EXPECT_TRUE(fs::exists(dir / "run.toml"));
  fs::remove_all(dir);
}

TEST(Cli, CoefficientPrintsRegimeAndG) {
  Result r = invoke({"coefficient", "--profile", "sawtooth", "--k", "1", "--gamma", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("regime A, G = 2.236067977499789"), std::string::npos) << r.out;
  Result c = invoke({"coefficient", "--k", "1/2", "--gamma", "1/5"});
  EXPECT_NE(c.out.find("regime C"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"sweep", "--config", "missing.toml"}).code, 64);
  EXPECT_EQ(invoke({"sweep", "--bogus"}).code, 64);
  EXPECT_EQ(invoke({}).code, 64);
  EXPECT_EQ(invoke({"report"}).code, 64);
  EXPECT_EQ(invoke({"coefficient", "--k", "one"}).code, 1);
  EXPECT_EQ(invoke({"mesh", "--eps-list", "1/4,abc"}).code, 1);
}

TEST(Cli, ValidationErrorsListAssumptions) {
  fs::path dir = scratch("invalid");
  fs::create_directories(dir);
  homoglab::write_text_file(dir / "bad.toml", "h2 = arctan\nell = -2\n");
  Result r = invoke({"solve-eps", "--config", (dir / "bad.toml").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("A3.3 violated"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("ell"), std::string::npos);
  EXPECT_EQ(invoke({"coefficient", "--k", "0"}).code, 1);
  fs::remove_all(dir);
}

TEST(Cli, NumericalFailureExitCode) {
  fs::path dir = scratch("numeric");
  Result r = invoke({"solve-eps", "--eps-list", "1/4", "--tol", "1e-300", "--out", dir.string()});
  EXPECT_EQ(r.code, 2) << r.out << r.err;
  fs::remove_all(dir);
}

TEST(Cli, IoFailureExitCode) {
  fs::path blocker = scratch("blocker");
  homoglab::write_text_file(blocker, "not a directory");
  Result r = invoke({"cell", "--n", "4", "--out", (blocker / "sub").string()});
  EXPECT_EQ(r.code, 74) << r.err;
  fs::remove(blocker);
}

TEST(Cli, MeshIsDeterministic) {
  fs::path a = scratch("mesh_a"), b = scratch("mesh_b");
  ASSERT_EQ(invoke({"mesh", "--eps-list", "1/4,1/8", "--out", a.string()}).code, 0);
  ASSERT_EQ(invoke({"mesh", "--eps-list", "1/4,1/8", "--out", b.string()}).code, 0);
  for (const char* f : {"mesh_eps4.json", "mesh_eps8.json"})
    EXPECT_EQ(homoglab::read_text_file(a / f), homoglab::read_text_file(b / f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, SweepThenReport) {
  fs::path dir = scratch("sweep");
  fs::create_directories(dir);
  homoglab::write_text_file(dir / "tiny.toml", kTinySweep);
  Result r = invoke({"sweep", "--config", (dir / "tiny.toml").string(), "--out", (dir / "run").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string csv = homoglab::read_text_file(dir / "run" / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);

  // The recorded config reproduces the run.
  homoglab::RunConfig recorded = homoglab::parse_config(homoglab::read_text_file(dir / "run" / "run.toml"));
  EXPECT_EQ(recorded.eps.size(), 3u);
  EXPECT_EQ(recorded.resolution.limit_resolution, 16);

  Result again = invoke({"sweep", "--config", (dir / "run" / "run.toml").string(), "--out", (dir / "again").string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(homoglab::read_text_file(dir / "again" / "sweep.csv"), csv);
  EXPECT_EQ(homoglab::read_text_file(dir / "again" / "report.json"),
            homoglab::read_text_file(dir / "run" / "report.json"));

  Result rep = invoke({"report", "--from", (dir / "run" / "report.json").string(), "--out", (dir / "re").string()});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(homoglab::read_text_file(dir / "re" / "sweep.csv"), csv);
  EXPECT_TRUE(fs::exists(dir / "re" / "l2_error.svg"));
  fs::remove_all(dir);
}

TEST(Cli, FlagsOverrideConfig) {
  fs::path dir = scratch("override");
  fs::create_directories(dir);
  homoglab::write_text_file(dir / "c.toml", "k = 1\ngamma = 0\n");
  Result r = invoke({"coefficient", "--config", (dir / "c.toml").string(), "--k", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("regime A, G = 1\n"), std::string::npos) << r.out;
  fs::remove_all(dir);
}

TEST(Cli, LimitAndSolveEpsWriteArtifacts) {
  fs::path dir = scratch("limit");
  ASSERT_EQ(invoke({"limit", "--n", "16", "--k", "2", "--gamma", "-1", "--out", dir.string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "limit.json"));
  EXPECT_TRUE(fs::exists(dir / "limit_solve.json"));
  ASSERT_EQ(invoke({"solve-eps", "--eps-list", "1/4", "--n", "4", "--out", dir.string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "solution_eps4.json"));
  EXPECT_TRUE(fs::exists(dir / "solve_eps4.json"));
  fs::remove_all(dir);
}
