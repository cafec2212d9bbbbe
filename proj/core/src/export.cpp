#include <softds/export.hpp>

#include <charconv>
#include <cmath>

namespace softds {

std::string_view version() { return SOFTDS_VERSION; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

nlohmann::json number_or_null(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

OutputHeader make_header(const Scenario& scenario) {
  const StrategyConfig& cfg = scenario.model.scene.strategy;
  nlohmann::json resolved{{"c", cfg.c},
                          {"dt", scenario.integration.dt},
                          {"max_steps", scenario.integration.max_steps},
                          {"eps_conv", scenario.integration.eps_conv},
                          {"blend", std::string(to_string(cfg.blend))},
                          {"hard_core_guard", cfg.hard_core_guard},
                          {"pose_sampling",
                           scenario.integration.pose_sampling == PoseSampling::PerStage ? "per_stage" : "per_step"}};
  return {std::string(version()), scenario_hash(scenario), resolved};
}

void write_csv_header(std::ostream& out, const OutputHeader& header) {
  out << "# tool: softds " << header.tool_version << '\n';
  out << "# scenario_hash: " << header.scenario_hash << '\n';
  out << "# resolved: " << header.resolved.dump() << '\n';
}

nlohmann::json header_json(const OutputHeader& header) {
  return {{"tool", "softds"},
          {"tool_version", header.tool_version},
          {"scenario_hash", header.scenario_hash},
          {"resolved", header.resolved}};
}

void write_trajectory_columns(std::ostream& out, int dim, std::size_t n_obstacles, bool with_run) {
  if (with_run) out << "run,";
  out << 't';
  for (int i = 0; i < dim; ++i) out << ",x" << i;
  for (int i = 0; i < dim; ++i) out << ",v" << i;
  for (std::size_t i = 0; i < n_obstacles; ++i) out << ",gamma_" << i << ",gamma_k_" << i << ",region_" << i;
  out << ",intersection\n";
}

void write_trajectory_rows(std::ostream& out, const TrajectoryRecord& record, long run_index) {
  for (const auto& s : record.samples) {
    if (run_index >= 0) out << run_index << ',';
    out << format_double(s.t);
    for (Eigen::Index i = 0; i < s.position.size(); ++i) out << ',' << format_double(s.position(i));
    for (Eigen::Index i = 0; i < s.velocity.size(); ++i) out << ',' << format_double(s.velocity(i));
    for (std::size_t i = 0; i < s.gamma.size(); ++i) {
      out << ',' << format_double(s.gamma[i]) << ',' << format_double(s.gamma_soft[i]) << ',' << to_string(s.region[i]);
    }
    out << ',' << (s.intersection ? 1 : 0) << '\n';
  }
}

std::vector<FieldSample> evaluate_field(const Scene& scene, const std::vector<Vector>& points) {
  std::vector<FieldSample> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    FieldSample fs;
    fs.position = x;
    for (const auto& obs : scene.obstacles) {
      fs.gamma.push_back(gamma(obs, x));
      fs.region.push_back(classify_region(obs, x));
      if (fs.gamma.back() < 1.0 - kInteriorTolerance) fs.masked = true;
    }
    if (!fs.masked) {
      try {
        fs.velocity = total_velocity(scene, x);
      } catch (const InteriorError&) {
        // Inside a safety-inflated core: still a masked point, not a failure.
        fs.masked = true;
      }
    }
    if (fs.masked) fs.velocity = Vector::Constant(x.size(), std::numeric_limits<double>::quiet_NaN());
    out.push_back(std::move(fs));
  }
  return out;
}

void write_field_csv(std::ostream& out, const std::vector<FieldSample>& field, int dim, std::size_t n_obstacles) {
  for (int i = 0; i < dim; ++i) out << (i ? "," : "") << 'x' << i;
  for (int i = 0; i < dim; ++i) out << ",v" << i;
  for (std::size_t i = 0; i < n_obstacles; ++i) out << ",gamma_" << i << ",region_" << i;
  out << ",masked\n";
  for (const auto& fs : field) {
    for (Eigen::Index i = 0; i < fs.position.size(); ++i) out << (i ? "," : "") << format_double(fs.position(i));
    for (Eigen::Index i = 0; i < fs.velocity.size(); ++i) out << ',' << format_double(fs.velocity(i));
    for (std::size_t i = 0; i < fs.gamma.size(); ++i) out << ',' << format_double(fs.gamma[i]) << ',' << to_string(fs.region[i]);
    out << ',' << (fs.masked ? 1 : 0) << '\n';
  }
}

nlohmann::json speed_stats_json(const std::optional<SpeedStats>& stats) {
  if (!stats) return nullptr;
  return {{"mean", stats->mean}, {"max", stats->max}, {"count", stats->count}};
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return number_or_null(*v);
}

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_or_null(v(i)));
  return out;
}

}  // namespace

nlohmann::json trajectory_summary_json(const TrajectoryRecord& record, const Vector& start) {
  nlohmann::json out{{"start", vector_json(start)},
                     {"converged", record.converged},
                     {"steps", record.steps},
                     {"navigation_time", optional_number(record.navigation_time)},
                     {"min_gamma", number_or_null(record.min_gamma)},
                     {"soft_region_speed", speed_stats_json(record.speeds.soft_region)},
                     {"intersection_speed", speed_stats_json(record.speeds.intersection)},
                     {"theta2_fallbacks", record.theta2_fallbacks},
                     {"final_position", vector_json(record.final_position)}};
  out["failure"] = record.failure ? nlohmann::json(*record.failure) : nlohmann::json(nullptr);
  return out;
}

nlohmann::json sweep_json(const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json times = nlohmann::json::array();
    for (const auto& t : row.navigation_times) times.push_back(optional_number(t));
    rows.push_back({{"k", row.k},
                    {"median_time", optional_number(row.median_time)},
                    {"mean_time", optional_number(row.mean_time)},
                    {"convergence_rate", row.convergence_rate},
                    {"target_rate", row.target_rate},
                    {"navigation_times", times}});
  }
  return rows;
}

nlohmann::json reduction_json(const ReductionReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"start", vector_json(e.start)},
                       {"baseline_time", optional_number(e.baseline_time)},
                       {"soft_time", optional_number(e.soft_time)},
                       {"reduction", optional_number(e.reduction)},
                       {"baseline_min_gamma", number_or_null(e.baseline_min_gamma)}});
  }
  return {{"k", report.k}, {"entries", entries}};
}

nlohmann::json stability_json(const StabilityReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", number_or_null(c.value)}, {"detail", c.detail}});
  }
  return {{"passed", report.passed}, {"checks", checks}, {"failing_components", report.failing_components}};
}

}  // namespace softds
