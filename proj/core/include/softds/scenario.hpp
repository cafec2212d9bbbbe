#ifndef SOFTDS_SCENARIO_HPP
#define SOFTDS_SCENARIO_HPP

#include <softds/sim.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace softds {

/// Parse or validation failure, tagged with the JSON path of the field.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct Box {
  Vector min;
  Vector max;
};

struct GridSpec {
  Vector min;
  Vector max;
  std::vector<int> counts;
};

struct ScenarioMetadata {
  std::string name;
  long seed = 0;
  std::string notes;
  std::string units;
};

/// A fully validated scenario. `starts` holds the explicit points followed
/// by the expanded grid, if any.
struct Scenario {
  Model model;
  IntegrationSettings integration;
  std::vector<Vector> start_points;
  std::optional<GridSpec> start_grid;
  std::vector<Vector> starts;
  Box workspace;
  bool workspace_explicit = false;
  ScenarioMetadata metadata;
  /// How "auto" values were resolved, plus any provenance block read back
  /// from a previously emitted scenario.
  nlohmann::json provenance = nlohmann::json::object();
};

/// Loads and validates a scenario file. DS file references are resolved
/// relative to the scenario's directory.
Scenario load_scenario(const std::filesystem::path& path);

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Normalized, fully resolved form; parse_scenario accepts it back.
nlohmann::json scenario_to_json(const Scenario& scenario);

DynamicalSystem load_ds(const std::filesystem::path& path);
DynamicalSystem parse_ds(const nlohmann::json& doc, const std::string& path = "ds");
nlohmann::json ds_to_json(const DynamicalSystem& ds);

nlohmann::json obstacle_to_json(const Obstacle& obs);

/// Box spanning the attractor, all starts and every obstacle's inflated
/// soft shell.
Box derived_workspace(const Scenario& scenario);

/// Index of the first start inside a (safety-scaled) hard core at t = 0.
std::optional<std::size_t> first_start_inside_obstacle(const Scenario& scenario);

/// FNV-1a over the normalized scenario JSON, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

}  // namespace softds

#endif  // SOFTDS_SCENARIO_HPP
