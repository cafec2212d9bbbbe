#ifndef SOFTDS_EXPORT_HPP
#define SOFTDS_EXPORT_HPP

#include <softds/scenario.hpp>

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace softds {

std::string_view version();

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double value);

/// Identifies the producing tool and the exact scenario behind an output.
struct OutputHeader {
  std::string tool_version;
  std::string scenario_hash;
  nlohmann::json resolved = nlohmann::json::object();
};

OutputHeader make_header(const Scenario& scenario);

/// '#'-prefixed comment lines.
void write_csv_header(std::ostream& out, const OutputHeader& header);
nlohmann::json header_json(const OutputHeader& header);

/// Columns: [run,] t, x0.., v0.., then gamma_i, gamma_k_i, region_i per
/// obstacle, then intersection (0/1). `run` appears only when
/// `run_index >= 0`, which is how concatenated batches are written.
void write_trajectory_columns(std::ostream& out, int dim, std::size_t n_obstacles, bool with_run);
void write_trajectory_rows(std::ostream& out, const TrajectoryRecord& record, long run_index = -1);

/// One point of an exported vector field.
struct FieldSample {
  Vector position;
  Vector velocity;  // NaN when masked
  std::vector<double> gamma;
  std::vector<RegionLabel> region;
  bool masked = false;
};

/// Evaluates the total field at each point. Points inside a hard core are
/// masked instead of raising.
std::vector<FieldSample> evaluate_field(const Scene& scene, const std::vector<Vector>& points);

/// Columns: x0.., v0.., gamma_i, region_i per obstacle, masked (0/1).
void write_field_csv(std::ostream& out, const std::vector<FieldSample>& field, int dim, std::size_t n_obstacles);

nlohmann::json speed_stats_json(const std::optional<SpeedStats>& stats);
nlohmann::json trajectory_summary_json(const TrajectoryRecord& record, const Vector& start);
nlohmann::json sweep_json(const SweepReport& report);
nlohmann::json reduction_json(const ReductionReport& report);
nlohmann::json stability_json(const StabilityReport& report);

/// Doubles become numbers; non-finite values become null.
nlohmann::json number_or_null(double value);

}  // namespace softds

#endif  // SOFTDS_EXPORT_HPP
