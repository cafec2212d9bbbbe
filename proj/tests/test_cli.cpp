#include <softds_cli/commands.hpp>

#include <softds/scenario.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace softds;
using namespace softds::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = SOFTDS_SCENARIO_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("softds_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_scenario(const std::string& name, const json& doc) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump(2);
    return p;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    return static_cast<std::size_t>(std::find(columns.begin(), columns.end(), name) - columns.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv read_csv(const fs::path& p) {
  Csv csv;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      csv.comments.push_back(line);
    } else if (csv.columns.empty()) {
      csv.columns = split(line);
    } else {
      csv.rows.push_back(split(line));
    }
  }
  return csv;
}

json plain_scenario() {
  return json::parse(R"({
    "metadata": {"name": "plain"},
    "ds": {"kind": "linear", "attractor": [0, 0], "gain_matrix": [[-1, 2], [-2, -1]]},
    "obstacles": [],
    "workspace": {"min": [-2, -1], "max": [2, 1]},
    "starts": {"points": [[1, 1]]}
  })");
}

}  // namespace

TEST_F(CliTest, SimulateWritesTrajectoriesAndSummary) {
  SimulateOptions o;
  o.common.scenario = kScenarios / "table1_a1.json";
  o.common.out = dir_ / "run";
  ASSERT_EQ(cmd_simulate(o, out_, err_), kSuccess) << err_.str();
  const json summary = read_json(dir_ / "run" / "summary.json");
  ASSERT_EQ(summary.at("runs").size(), 3u);
  EXPECT_EQ(summary.at("totals").at("converged").get<int>(), 3);
  const json& first = summary.at("runs")[0];
  EXPECT_TRUE(first.at("soft_region_speed").is_object());
  EXPECT_GT(first.at("soft_region_speed").at("mean").get<double>(), 0.0);
  EXPECT_EQ(summary.at("header").at("scenario_hash").get<std::string>(),
            scenario_hash(load_scenario(kScenarios / "table1_a1.json")));

  const Csv csv = read_csv(dir_ / "run" / first.at("csv").get<std::string>());
  ASSERT_EQ(csv.comments.size(), 3u);
  EXPECT_EQ(csv.comments[0].rfind("# tool: softds ", 0), 0u);
  EXPECT_EQ(csv.comments[1].rfind("# scenario_hash: ", 0), 0u);
  EXPECT_EQ(csv.comments[2].rfind("# resolved: ", 0), 0u);
  const std::vector<std::string> expected{"t", "x0", "x1", "v0", "v1", "gamma_0", "gamma_k_0", "region_0", "intersection"};
  EXPECT_EQ(csv.columns, expected);
  EXPECT_EQ(csv.rows.size(), first.at("steps").get<std::size_t>() + 1);
}

TEST_F(CliTest, StartInsideHardCoreExitsTwoWithIndex) {
  json doc = plain_scenario();
  doc["obstacles"] = {{{"center", {1, 0}}, {"hard_semi_axes", {0.3, 0.3}}}};
  doc["starts"]["points"] = {{-1, 0.5}, {1.1, 0.0}};
  SimulateOptions o;
  o.common.scenario = write_scenario("inside.json", doc);
  o.common.out = dir_ / "run";
  EXPECT_EQ(cmd_simulate(o, out_, err_), kValidationFailure);
  const json e = json::parse(err_.str()).at("error");
  EXPECT_EQ(e.at("kind"), "setup_error");
  EXPECT_EQ(e.at("start_index").get<int>(), 1);
}

TEST_F(CliTest, InvalidScenarioExitsTwoWithPath) {
  json doc = plain_scenario();
  doc["obstacles"] = {{{"center", {1, 0}}, {"hard_semi_axes", {0.3, 0.3}}, {"soft_ratio", 0.9}}};
  SimulateOptions o;
  o.common.scenario = write_scenario("bad.json", doc);
  o.common.out = dir_ / "run";
  EXPECT_EQ(cmd_simulate(o, out_, err_), kValidationFailure);
  EXPECT_EQ(json::parse(err_.str()).at("error").at("path"), "obstacles[0].soft_ratio");
}

TEST_F(CliTest, OverridesAreValidated) {
  SimulateOptions o;
  o.common.scenario = kScenarios / "table1_a1.json";
  o.common.out = dir_ / "run";
  o.common.dt = -0.1;
  EXPECT_EQ(cmd_simulate(o, out_, err_), kValidationFailure);
  o.common.dt.reset();
  o.common.starts_grid = "8x";
  EXPECT_EQ(cmd_simulate(o, out_, err_), kValidationFailure);
}

TEST_F(CliTest, StartsGridProducesOneFilePerStartOrOneConcatenated) {
  // 8x8 nodes over [-2, 2] x [-1, 1] stay at least 0.19 from (0.1, 0.1).
  json doc = plain_scenario();
  doc["obstacles"] = {{{"center", {0.1, 0.1}}, {"hard_semi_axes", {0.12, 0.12}}, {"soft_ratio", 1.25}}};
  SimulateOptions o;
  o.common.scenario = write_scenario("grid.json", doc);
  o.common.out = dir_ / "split";
  o.common.starts_grid = "8x8";
  o.common.max_steps = 200;
  ASSERT_EQ(cmd_simulate(o, out_, err_), kSuccess) << err_.str();
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "split")) csvs += e.path().extension() == ".csv";
  EXPECT_EQ(csvs, 64u);

  o.common.out = dir_ / "joined";
  o.concat = true;
  ASSERT_EQ(cmd_simulate(o, out_, err_), kSuccess) << err_.str();
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "joined")) files += e.path().extension() == ".csv";
  EXPECT_EQ(files, 1u);
  const Csv csv = read_csv(dir_ / "joined" / "trajectories.csv");
  EXPECT_EQ(csv.columns.front(), "run");
  EXPECT_EQ(csv.rows.back().front(), "63");
}

TEST_F(CliTest, IdenticalInputsGiveIdenticalBytes) {
  SimulateOptions o;
  o.common.scenario = kScenarios / "table1_b1.json";
  o.common.out = dir_ / "a";
  ASSERT_EQ(cmd_simulate(o, out_, err_), kSuccess);
  o.common.out = dir_ / "b";
  o.workers = 3;
  ASSERT_EQ(cmd_simulate(o, out_, err_), kSuccess);
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / e.path().filename())) << e.path().filename();
  }
}

TEST_F(CliTest, FieldWithoutObstaclesIsTheBareDs) {
  FieldOptions o;
  o.common.scenario = write_scenario("plain.json", plain_scenario());
  o.common.out = dir_ / "field.csv";
  o.grid = "5x3";
  ASSERT_EQ(cmd_field(o, out_, err_), kSuccess) << err_.str();
  const Csv csv = read_csv(o.common.out);
  const std::vector<std::string> expected{"x0", "x1", "v0", "v1", "masked"};
  EXPECT_EQ(csv.columns, expected);
  ASSERT_EQ(csv.rows.size(), 15u);
  for (const auto& row : csv.rows) {
    const double x = std::stod(row[0]), y = std::stod(row[1]);
    EXPECT_DOUBLE_EQ(std::stod(row[2]), -x + 2 * y);
    EXPECT_DOUBLE_EQ(std::stod(row[3]), -2 * x - y);
    EXPECT_EQ(row[4], "0");
  }
}

TEST_F(CliTest, FieldMasksHardCorePoints) {
  json doc = plain_scenario();
  doc["obstacles"] = {{{"center", {0, 0}}, {"hard_semi_axes", {0.6, 0.6}}, {"soft_ratio", 1.5}}};
  doc["starts"]["points"] = {{1.9, 0.9}};
  FieldOptions o;
  o.common.scenario = write_scenario("disc.json", doc);
  o.common.out = dir_ / "field.csv";
  o.grid = "21x11";
  ASSERT_EQ(cmd_field(o, out_, err_), kSuccess) << err_.str();
  const Csv csv = read_csv(o.common.out);
  std::size_t masked = 0;
  for (const auto& row : csv.rows) {
    const double r = std::hypot(std::stod(row[0]), std::stod(row[1]));
    const bool is_masked = row[csv.col("masked")] == "1";
    masked += is_masked;
    if (r < 0.6 - 1e-9) {
      EXPECT_TRUE(is_masked);
      EXPECT_EQ(row[csv.col("v0")], "nan");
    } else if (r > 0.6 + 1e-9) {
      EXPECT_FALSE(is_masked);
    }
  }
  EXPECT_GT(masked, 0u);

  o.grid = "1x5";
  EXPECT_EQ(cmd_field(o, out_, err_), kValidationFailure);
}

TEST_F(CliTest, SweepReportsOneRowPerStiffness) {
  SweepOptions o;
  o.common.scenario = kScenarios / "headon_sweep.json";
  o.common.out = dir_ / "sweep.json";
  o.common.starts_grid = "2x2";
  ASSERT_EQ(cmd_sweep(o, out_, err_), kSuccess) << err_.str();
  const json doc = read_json(o.common.out);
  ASSERT_EQ(doc.at("sweep").size(), 3u);
  EXPECT_DOUBLE_EQ(doc.at("sweep")[1].at("k").get<double>(), std::exp(0.25));
  EXPECT_DOUBLE_EQ(doc.at("reduction").at("k").get<double>(), std::exp(0.5));
  EXPECT_EQ(doc.at("reduction").at("entries").size(), 4u);
}

TEST_F(CliTest, SweepAtUnitStiffnessHasZeroReductions) {
  SweepOptions o;
  o.common.scenario = kScenarios / "headon_sweep.json";
  o.common.out = dir_ / "sweep.json";
  o.common.starts_grid = "2x2";
  o.k_values = "1";
  ASSERT_EQ(cmd_sweep(o, out_, err_), kSuccess) << err_.str();
  for (const auto& e : read_json(o.common.out).at("reduction").at("entries")) {
    ASSERT_TRUE(e.at("reduction").is_number());
    EXPECT_EQ(e.at("reduction").get<double>(), 0.0);
  }
}

TEST_F(CliTest, SweepRejectsStiffnessBelowOne) {
  SweepOptions o;
  o.common.scenario = kScenarios / "headon_sweep.json";
  o.common.out = dir_ / "sweep.json";
  o.k_values = "1,0.5";
  EXPECT_EQ(cmd_sweep(o, out_, err_), kValidationFailure);
  EXPECT_FALSE(fs::exists(o.common.out));
}

TEST_F(CliTest, SweepNeedsATarget) {
  SweepOptions o;
  o.common.scenario = write_scenario("plain.json", plain_scenario());
  o.common.out = dir_ / "sweep.json";
  EXPECT_EQ(cmd_sweep(o, out_, err_), kValidationFailure);
}

TEST_F(CliTest, ValidatePassesAndFailsWithComponent) {
  ValidateOptions o;
  o.ds = kScenarios / "ds" / "linear_identity.json";
  EXPECT_EQ(cmd_validate(o, out_, err_), kSuccess);
  EXPECT_TRUE(json::parse(out_.str()).at("passed").get<bool>());

  out_.str("");
  o.ds = kScenarios / "ds" / "lpv_unstable.json";
  EXPECT_EQ(cmd_validate(o, out_, err_), kValidationFailure);
  const json report = json::parse(out_.str());
  EXPECT_EQ(report.at("failing_components"), json::array({1}));

  out_.str("");
  o.ds = kScenarios / "lpv_soft.json";
  o.out = dir_ / "report.json";
  EXPECT_EQ(cmd_validate(o, out_, err_), kSuccess);
  EXPECT_TRUE(read_json(*o.out).at("passed").get<bool>());
}

TEST_F(CliTest, ValidateReportsIndefiniteLyapunovMatrix) {
  json ds = read_json(kScenarios / "ds" / "lpv_two_component.json");
  ds["P"] = {{1.0, 0.0}, {0.0, -0.5}};
  ValidateOptions o;
  o.ds = write_scenario("indef.json", ds);
  EXPECT_EQ(cmd_validate(o, out_, err_), kValidationFailure);
  const json report = json::parse(out_.str());
  bool found = false;
  for (const auto& c : report.at("checks")) {
    if (c.at("name") == "P.positive_definite") {
      found = true;
      EXPECT_FALSE(c.at("passed").get<bool>());
      EXPECT_DOUBLE_EQ(c.at("value").get<double>(), -0.5);
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, MissingFilesAreValidationFailures) {
  ValidateOptions v;
  v.ds = dir_ / "nope.json";
  EXPECT_EQ(cmd_validate(v, out_, err_), kValidationFailure);
  SimulateOptions s;
  s.common.scenario = dir_ / "nope.json";
  s.common.out = dir_ / "run";
  EXPECT_EQ(cmd_simulate(s, out_, err_), kValidationFailure);
}

TEST(CliParsing, GridCounts) {
  EXPECT_EQ(parse_grid_counts("8x8"), (std::vector<int>{8, 8}));
  EXPECT_EQ(parse_grid_counts("5x3x2"), (std::vector<int>{5, 3, 2}));
  for (const char* bad : {"", "8x", "x8", "0x4", "axb", "4x-1", "3.5x2"}) {
    EXPECT_THROW(parse_grid_counts(bad), DomainError) << bad;
  }
}

TEST(CliParsing, StiffnessLists) {
  const auto ks = parse_k_list("1, e^0.25 ,e^{0.5},e,2");
  ASSERT_EQ(ks.size(), 5u);
  EXPECT_EQ(ks[0], 1.0);
  EXPECT_DOUBLE_EQ(ks[1], std::exp(0.25));
  EXPECT_DOUBLE_EQ(ks[2], std::exp(0.5));
  EXPECT_DOUBLE_EQ(ks[3], std::exp(1.0));
  EXPECT_EQ(ks[4], 2.0);
  EXPECT_THROW(parse_k_list("1,,2"), DomainError);
  EXPECT_THROW(parse_k_list("e^x"), DomainError);
  EXPECT_THROW(parse_k_list(""), DomainError);
}
