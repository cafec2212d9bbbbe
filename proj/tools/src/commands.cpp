#include <softds_cli/commands.hpp>

#include <softds/export.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace softds::cli {
namespace {

using nlohmann::json;

// Setup failure tied to one start point.
class StartError : public std::invalid_argument {
 public:
  StartError(std::size_t index, const std::string& msg) : std::invalid_argument(msg), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

void emit_error(std::ostream& err, const std::string& command, const std::string& kind, const std::string& message,
                json extra = json::object()) {
  json doc{{"command", command}, {"kind", kind}, {"message", message}};
  doc.update(extra);
  err << json{{"error", doc}}.dump() << '\n';
}

template <class Body>
int guarded(const std::string& command, std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ScenarioError& e) {
    emit_error(err, command, "scenario_error", e.what(), {{"path", e.path()}});
    return kValidationFailure;
  } catch (const StartError& e) {
    emit_error(err, command, "setup_error", e.what(), {{"start_index", e.index()}});
    return kValidationFailure;
  } catch (const SetupError& e) {
    emit_error(err, command, "setup_error", e.what());
    return kValidationFailure;
  } catch (const DomainError& e) {
    emit_error(err, command, "domain_error", e.what());
    return kValidationFailure;
  } catch (const InteriorError& e) {
    emit_error(err, command, "interior_error", e.what(), {{"obstacle", e.obstacle()}});
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    emit_error(err, command, "runtime_error", e.what());
    return kRuntimeFailure;
  }
}

Scenario load_with_overrides(const CommonOptions& opts) {
  if (opts.scenario.empty()) throw DomainError("--scenario is required");
  Scenario s = load_scenario(opts.scenario);
  if (opts.dt) s.integration.dt = *opts.dt;
  if (opts.max_steps) s.integration.max_steps = *opts.max_steps;
  if (opts.seed) s.metadata.seed = *opts.seed;
  try {
    validate(s.integration, static_cast<int>(dim(s.model.scene.ds)));
  } catch (const DomainError& e) {
    throw DomainError(std::string("command-line override: ") + e.what());
  }
  if (opts.starts_grid) {
    const auto counts = parse_grid_counts(*opts.starts_grid);
    if (static_cast<Eigen::Index>(counts.size()) != s.workspace.min.size()) {
      throw DomainError("--starts-grid: expected one count per workspace axis");
    }
    s.start_points.clear();
    s.start_grid = GridSpec{s.workspace.min, s.workspace.max, counts};
    s.starts = grid_points(s.workspace.min, s.workspace.max, counts);
  }
  return s;
}

void check_starts(const Scenario& s) {
  if (s.starts.empty()) throw DomainError("scenario has no start points");
  if (const auto idx = first_start_inside_obstacle(s)) {
    throw StartError(*idx, "start " + std::to_string(*idx) + " lies inside a hard core");
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  auto f = open_output(path);
  f << doc.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string trajectory_name(std::size_t index, std::size_t count) {
  const int width = std::max<int>(3, static_cast<int>(std::to_string(count ? count - 1 : 0).size()));
  std::ostringstream os;
  os << "trajectory_" << std::setw(width) << std::setfill('0') << index << ".csv";
  return os.str();
}

double parse_k(std::string token) {
  token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }), token.end());
  if (token.empty()) throw DomainError("k list: empty entry");
  try {
    std::size_t used = 0;
    if (token == "e") return std::exp(1.0);
    if (token.rfind("e^", 0) == 0) {
      std::string expo = token.substr(2);
      if (expo.size() >= 2 && expo.front() == '{' && expo.back() == '}') expo = expo.substr(1, expo.size() - 2);
      const double x = std::stod(expo, &used);
      if (used != expo.size()) throw std::invalid_argument(token);
      return std::exp(x);
    }
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::logic_error&) {
    throw DomainError("k list: cannot parse '" + token + "'");
  }
}

}  // namespace

std::vector<int> parse_grid_counts(const std::string& spec) {
  std::vector<int> counts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(part, &used);
      if (used != part.size() || n < 1) throw std::invalid_argument(part);
      counts.push_back(n);
    } catch (const std::logic_error&) {
      throw DomainError("grid spec '" + spec + "': expected positive integers such as 8x8");
    }
  }
  if (counts.empty() || spec.back() == 'x') throw DomainError("grid spec '" + spec + "': expected AxB");
  return counts;
}

std::vector<double> parse_k_list(const std::string& spec) {
  std::vector<double> ks;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) ks.push_back(parse_k(token));
  if (ks.empty()) throw DomainError("k list is empty");
  return ks;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("simulate", err, [&]() -> int {
    Scenario s = load_with_overrides(opts.common);
    check_starts(s);
    if (opts.common.out.empty()) throw DomainError("--out is required");
    const OutputHeader header = make_header(s);
    const auto records = batch_run(s.model, s.starts, s.integration, opts.workers);
    const int d = static_cast<int>(dim(s.model.scene.ds));
    const std::size_t n_obs = s.model.scene.obstacles.size();

    std::filesystem::create_directories(opts.common.out);
    json runs = json::array();
    std::size_t converged = 0;
    std::size_t failures = 0;
    bool setup_failure = false;
    if (opts.concat) {
      auto f = open_output(opts.common.out / "trajectories.csv");
      write_csv_header(f, header);
      write_trajectory_columns(f, d, n_obs, true);
      for (std::size_t i = 0; i < records.size(); ++i) write_trajectory_rows(f, records[i], static_cast<long>(i));
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& rec = records[i];
      json entry = trajectory_summary_json(rec, s.starts[i]);
      entry["index"] = i;
      if (opts.concat) {
        entry["csv"] = "trajectories.csv";
      } else {
        const std::string name = trajectory_name(i, records.size());
        auto f = open_output(opts.common.out / name);
        write_csv_header(f, header);
        write_trajectory_columns(f, d, n_obs, false);
        write_trajectory_rows(f, rec);
        entry["csv"] = name;
      }
      converged += rec.converged ? 1 : 0;
      if (rec.failure) {
        ++failures;
        setup_failure = setup_failure || rec.failure->rfind("setup: ", 0) == 0;
      }
      runs.push_back(std::move(entry));
    }
    json summary{{"header", header_json(header)},
                 {"scenario", {{"name", s.metadata.name}, {"seed", s.metadata.seed}, {"units", s.metadata.units}}},
                 {"totals", {{"runs", records.size()}, {"converged", converged}, {"failures", failures}}},
                 {"runs", runs}};
    write_json_file(opts.common.out / "summary.json", summary);
    out << "simulate: " << records.size() << " run(s), " << converged << " converged, " << failures
        << " failed -> " << opts.common.out.string() << '\n';
    if (failures == 0) return kSuccess;
    emit_error(err, "simulate", setup_failure ? "setup_error" : "interior_error",
               std::to_string(failures) + " run(s) failed; see summary.json");
    return setup_failure ? kValidationFailure : kRuntimeFailure;
  });
}

int cmd_field(const FieldOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("field", err, [&]() -> int {
    Scenario s = load_with_overrides(opts.common);
    if (opts.common.out.empty()) throw DomainError("--out is required");
    const auto counts = parse_grid_counts(opts.grid);
    const auto d = dim(s.model.scene.ds);
    if (counts.size() != static_cast<std::size_t>(d)) throw DomainError("--grid: expected one count per axis");
    for (int c : counts) {
      if (c < 2) throw DomainError("--grid: resolution must be >= 2 per axis");
    }
    const auto points = grid_points(s.workspace.min, s.workspace.max, counts);
    const auto field = evaluate_field(s.model.scene, points);
    auto f = open_output(opts.common.out);
    write_csv_header(f, make_header(s));
    write_field_csv(f, field, static_cast<int>(d), s.model.scene.obstacles.size());
    const auto masked = std::count_if(field.begin(), field.end(), [](const FieldSample& fs) { return fs.masked; });
    out << "field: " << field.size() << " point(s), " << masked << " masked -> " << opts.common.out.string() << '\n';
    return kSuccess;
  });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("sweep", err, [&]() -> int {
    const auto ks = parse_k_list(opts.k_values);
    for (double k : ks) {
      if (!(k >= 1.0)) throw DomainError("stiffness values must be >= 1, got " + format_double(k));
    }
    const double red_k = opts.reduction_k ? parse_k(*opts.reduction_k) : *std::max_element(ks.begin(), ks.end());
    Scenario s = load_with_overrides(opts.common);
    check_starts(s);
    if (opts.common.out.empty()) throw DomainError("--out is required");
    const auto sweep = k_sweep(s.model, ks, s.starts, s.integration, opts.workers);
    const auto reduction = time_reduction_map(s.model, red_k, s.starts, s.integration, opts.workers);
    json ks_json = json::array();
    for (double k : ks) ks_json.push_back(k);
    json doc{{"header", header_json(make_header(s))},
             {"scenario", {{"name", s.metadata.name}, {"seed", s.metadata.seed}}},
             {"k_values", ks_json},
             {"starts", s.starts.size()},
             {"sweep", sweep_json(sweep)},
             {"reduction", reduction_json(reduction)}};
    write_json_file(opts.common.out, doc);
    out << "sweep:";
    for (const auto& row : sweep.rows) {
      out << " k=" << format_double(row.k) << " median=" << (row.median_time ? format_double(*row.median_time) : "n/a");
    }
    out << " -> " << opts.common.out.string() << '\n';
    return kSuccess;
  });
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("validate", err, [&]() -> int {
    if (opts.ds.empty()) throw DomainError("--ds is required");
    std::ifstream in(opts.ds);
    if (!in) throw ScenarioError("", "cannot open '" + opts.ds.string() + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ScenarioError("", std::string("parse error: ") + e.what());
    }
    // A scenario file is accepted too; its DS is validated.
    const DynamicalSystem ds = doc.is_object() && doc.contains("ds") ? parse_scenario(doc, opts.ds.parent_path()).model.scene.ds
                                                                   : parse_ds(doc, "");
    const StabilityReport report = validate_stability(ds);
    json result = stability_json(report);
    result["kind"] = std::holds_alternative<LinearDS>(ds) ? "linear" : "lpv";
    result["tool_version"] = std::string(version());
    if (opts.out) write_json_file(*opts.out, result);
    out << result.dump(2) << '\n';
    return report.passed ? kSuccess : kValidationFailure;
  });
}

}  // namespace softds::cli
