#include <softds/scenario.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace softds {
namespace {

using nlohmann::json;

// Strict object reader: every key must be consumed or finish() throws.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ScenarioError(path_, "expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& need(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ScenarioError(at(key), "missing required field");
    return *v;
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) throw ScenarioError(at(item.key()), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError(path, "expected a number");
  const double out = v.get<double>();
  if (!std::isfinite(out)) throw ScenarioError(path, "expected a finite number");
  return out;
}

long as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ScenarioError(path, "expected an integer");
  return v.get<long>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ScenarioError(path, "expected a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ScenarioError(path, "expected a string");
  return v.get<std::string>();
}

Vector as_vector(const json& v, const std::string& path, Eigen::Index dim = -1) {
  if (!v.is_array() || v.empty()) throw ScenarioError(path, "expected a non-empty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = as_number(v[i], path + "[" + std::to_string(i) + "]");
  }
  if (dim >= 0 && out.size() != dim) {
    throw ScenarioError(path, "expected " + std::to_string(dim) + " components, got " + std::to_string(out.size()));
  }
  return out;
}

Matrix as_matrix(const json& v, const std::string& path, Eigen::Index dim) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim) {
    throw ScenarioError(path, "expected " + std::to_string(dim) + " rows (row-major nested arrays)");
  }
  Matrix out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    out.row(r) = as_vector(v[static_cast<std::size_t>(r)], path + "[" + std::to_string(r) + "]", dim).transpose();
  }
  return out;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

// Re-tags a DomainError "field: message" as a ScenarioError under `prefix`.
[[noreturn]] void rethrow_domain(const DomainError& e, const std::string& prefix) {
  const std::string msg = e.what();
  const auto pos = msg.find(": ");
  if (pos == std::string::npos) throw ScenarioError(prefix, msg);
  throw ScenarioError(prefix.empty() ? msg.substr(0, pos) : prefix + "." + msg.substr(0, pos), msg.substr(pos + 2));
}

Obstacle parse_obstacle(const json& v, const std::string& path, Eigen::Index dim) {
  ObjectReader r(v, path);
  Obstacle obs;
  obs.center = as_vector(r.need("center"), r.at("center"), dim);
  obs.hard_semi_axes = as_vector(r.need("hard_semi_axes"), r.at("hard_semi_axes"), dim);
  if (const json* s = r.find("soft_ratio")) obs.soft_ratio = as_number(*s, r.at("soft_ratio"));
  if (const json* o = r.find("orientation_rad")) obs.orientation = as_number(*o, r.at("orientation_rad"));
  if (const json* p = r.find("exponent")) obs.exponent = static_cast<int>(as_integer(*p, r.at("exponent")));
  obs.reference_point = obs.center;
  if (const json* p = r.find("reference_point")) obs.reference_point = as_vector(*p, r.at("reference_point"), dim);
  obs.safety_factor = Vector::Ones(dim);
  if (const json* p = r.find("safety_factor")) obs.safety_factor = as_vector(*p, r.at("safety_factor"), dim);
  obs.linear_velocity = Vector::Zero(dim);
  if (const json* p = r.find("linear_velocity")) obs.linear_velocity = as_vector(*p, r.at("linear_velocity"), dim);
  if (const json* p = r.find("angular_velocity")) obs.angular_velocity = as_number(*p, r.at("angular_velocity"));
  r.finish();
  try {
    validate(obs);
  } catch (const DomainError& e) {
    rethrow_domain(e, path);
  }
  return obs;
}

IntegrationSettings parse_integration(const json& v, const std::string& path, Eigen::Index dim) {
  ObjectReader r(v, path);
  IntegrationSettings s;
  if (const json* p = r.find("dt")) s.dt = as_number(*p, r.at("dt"));
  if (const json* p = r.find("max_steps")) s.max_steps = as_integer(*p, r.at("max_steps"));
  if (const json* p = r.find("eps_conv")) s.eps_conv = as_number(*p, r.at("eps_conv"));
  if (const json* p = r.find("pose_sampling")) {
    const std::string mode = as_string(*p, r.at("pose_sampling"));
    if (mode == "per_step") {
      s.pose_sampling = PoseSampling::PerStep;
    } else if (mode == "per_stage") {
      s.pose_sampling = PoseSampling::PerStage;
    } else {
      throw ScenarioError(r.at("pose_sampling"), "expected \"per_step\" or \"per_stage\"");
    }
  }
  if (const json* p = r.find("target")) {
    ObjectReader t(*p, r.at("target"));
    TargetBall target;
    target.center = as_vector(t.need("center"), t.at("center"), dim);
    target.radius = as_number(t.need("radius"), t.at("radius"));
    t.finish();
    s.target = target;
  }
  r.finish();
  try {
    validate(s, static_cast<int>(dim));
  } catch (const DomainError& e) {
    rethrow_domain(e, "");
  }
  return s;
}

GridSpec parse_grid(const json& v, const std::string& path, Eigen::Index dim) {
  ObjectReader r(v, path);
  GridSpec g;
  g.min = as_vector(r.need("min"), r.at("min"), dim);
  g.max = as_vector(r.need("max"), r.at("max"), dim);
  const json& counts = r.need("counts");
  if (!counts.is_array() || static_cast<Eigen::Index>(counts.size()) != dim) {
    throw ScenarioError(r.at("counts"), "expected one count per axis");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const long c = as_integer(counts[i], r.at("counts") + "[" + std::to_string(i) + "]");
    if (c < 1) throw ScenarioError(r.at("counts") + "[" + std::to_string(i) + "]", "must be >= 1");
    g.counts.push_back(static_cast<int>(c));
  }
  r.finish();
  return g;
}

Box parse_box(const json& v, const std::string& path, Eigen::Index dim) {
  ObjectReader r(v, path);
  Box b{as_vector(r.need("min"), r.at("min"), dim), as_vector(r.need("max"), r.at("max"), dim)};
  r.finish();
  if (!(b.max.array() > b.min.array()).all()) throw ScenarioError(path, "max must exceed min on every axis");
  return b;
}

MotionScript parse_script(const json& v, const std::string& path, Eigen::Index dim, std::size_t n_obstacles) {
  ObjectReader r(v, path);
  MotionScript script;
  const long idx = as_integer(r.need("obstacle"), r.at("obstacle"));
  if (idx < 0 || static_cast<std::size_t>(idx) >= n_obstacles) {
    throw ScenarioError(r.at("obstacle"), "obstacle index out of range");
  }
  script.obstacle = static_cast<std::size_t>(idx);
  const json& wps = r.need("waypoints");
  if (!wps.is_array() || wps.empty()) throw ScenarioError(r.at("waypoints"), "expected a non-empty array");
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string wp_path = r.at("waypoints") + "[" + std::to_string(i) + "]";
    ObjectReader w(wps[i], wp_path);
    Waypoint wp;
    wp.t = as_number(w.need("t"), w.at("t"));
    wp.center = as_vector(w.need("center"), w.at("center"), dim);
    if (const json* o = w.find("orientation_rad")) wp.orientation = as_number(*o, w.at("orientation_rad"));
    w.finish();
    if (i > 0 && !(wp.t > script.waypoints.back().t)) {
      throw ScenarioError(w.at("t"), "waypoint times must be strictly increasing");
    }
    script.waypoints.push_back(std::move(wp));
  }
  r.finish();
  return script;
}

struct StrategyDraft {
  StrategyConfig cfg;
  bool c_auto = true;
  bool pairs_auto = true;
};

StrategyDraft parse_strategy(const json* v, const std::string& path, std::size_t n_obstacles) {
  StrategyDraft draft;
  if (!v) return draft;
  ObjectReader r(*v, path);
  if (const json* c = r.find("c")) {
    if (c->is_string()) {
      if (c->get<std::string>() != "auto") throw ScenarioError(r.at("c"), "expected a number or \"auto\"");
    } else {
      draft.c_auto = false;
      draft.cfg.c = as_number(*c, r.at("c"));
    }
  }
  if (const json* t = r.find("theta2_policy")) {
    if (t->is_string()) {
      if (t->get<std::string>() != "follow_velocity") {
        throw ScenarioError(r.at("theta2_policy"), "expected \"follow_velocity\" or {\"fixed\": angle}");
      }
      draft.cfg.theta2 = Theta2Policy::follow_velocity();
    } else {
      ObjectReader f(*t, r.at("theta2_policy"));
      draft.cfg.theta2 = Theta2Policy::fixed(as_number(f.need("fixed"), f.at("fixed")));
      f.finish();
    }
  }
  if (const json* s = r.find("sgn_zero_value")) draft.cfg.sgn_zero_value = as_number(*s, r.at("sgn_zero_value"));
  if (const json* p = r.find("intersection_pairs")) {
    if (p->is_string()) {
      if (p->get<std::string>() != "auto") throw ScenarioError(r.at("intersection_pairs"), "expected \"auto\" or a list of pairs");
    } else {
      if (!p->is_array()) throw ScenarioError(r.at("intersection_pairs"), "expected \"auto\" or a list of pairs");
      draft.pairs_auto = false;
      for (std::size_t i = 0; i < p->size(); ++i) {
        const std::string ip = r.at("intersection_pairs") + "[" + std::to_string(i) + "]";
        const json& pair = (*p)[i];
        if (!pair.is_array() || pair.size() != 2) throw ScenarioError(ip, "expected a pair of obstacle indices");
        const long a = as_integer(pair[0], ip + "[0]");
        const long b = as_integer(pair[1], ip + "[1]");
        if (a < 0 || b < 0) throw ScenarioError(ip, "indices must be non-negative");
        draft.cfg.intersection_pairs.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      }
    }
  }
  if (const json* g = r.find("hard_core_guard")) draft.cfg.hard_core_guard = as_bool(*g, r.at("hard_core_guard"));
  if (const json* b = r.find("blend")) {
    try {
      draft.cfg.blend = blend_rule_from_string(as_string(*b, r.at("blend")));
    } catch (const DomainError& e) {
      throw ScenarioError(r.at("blend"), e.what());
    }
  }
  r.finish();
  try {
    validate(draft.cfg, n_obstacles);
  } catch (const DomainError& e) {
    rethrow_domain(e, "");
  }
  return draft;
}

json theta2_to_json(const Theta2Policy& p) {
  if (p.kind == Theta2Policy::Kind::FollowVelocity) return "follow_velocity";
  return json{{"fixed", p.angle}};
}

}  // namespace

DynamicalSystem parse_ds(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  const std::string kind = as_string(r.need("kind"), r.at("kind"));
  const Vector attractor_pt = as_vector(r.need("attractor"), r.at("attractor"));
  const auto d = attractor_pt.size();
  try {
    if (kind == "linear") {
      LinearDS ds{as_matrix(r.need("gain_matrix"), r.at("gain_matrix"), d), attractor_pt};
      r.finish();
      validate(ds);
      return ds;
    }
    if (kind == "lpv") {
      LpvDS ds;
      ds.attractor = attractor_pt;
      ds.lyapunov = as_matrix(r.need("P"), r.at("P"), d);
      const json& comps = r.need("components");
      if (!comps.is_array() || comps.empty()) throw ScenarioError(r.at("components"), "expected a non-empty array");
      for (std::size_t k = 0; k < comps.size(); ++k) {
        ObjectReader c(comps[k], r.at("components") + "[" + std::to_string(k) + "]");
        LpvComponent comp;
        comp.prior = as_number(c.need("prior"), c.at("prior"));
        comp.mean = as_vector(c.need("mean"), c.at("mean"), d);
        comp.covariance = as_matrix(c.need("covariance"), c.at("covariance"), d);
        comp.gain = as_matrix(c.need("A"), c.at("A"), d);
        comp.offset = as_vector(c.need("b"), c.at("b"), d);
        c.finish();
        ds.components.push_back(std::move(comp));
      }
      bool reproject = false;
      if (const json* p = r.find("reproject_b")) reproject = as_bool(*p, r.at("reproject_b"));
      r.finish();
      validate(ds);
      if (reproject) reproject_offsets(ds);
      return ds;
    }
  } catch (const DomainError& e) {
    rethrow_domain(e, path);
  }
  throw ScenarioError(r.at("kind"), "expected \"linear\" or \"lpv\"");
}

DynamicalSystem load_ds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open DS file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", "parse error in '" + path.string() + "': " + e.what());
  }
  return parse_ds(doc, "");
}

json ds_to_json(const DynamicalSystem& ds) {
  if (const auto* lin = std::get_if<LinearDS>(&ds)) {
    return json{{"kind", "linear"}, {"attractor", to_json(lin->attractor)}, {"gain_matrix", to_json(lin->gain)}};
  }
  const auto& lpv = std::get<LpvDS>(ds);
  json comps = json::array();
  for (const auto& c : lpv.components) {
    comps.push_back(json{{"prior", c.prior},
                         {"mean", to_json(c.mean)},
                         {"covariance", to_json(c.covariance)},
                         {"A", to_json(c.gain)},
                         {"b", to_json(c.offset)}});
  }
  return json{{"kind", "lpv"}, {"attractor", to_json(lpv.attractor)}, {"P", to_json(lpv.lyapunov)}, {"components", comps}};
}

json obstacle_to_json(const Obstacle& obs) {
  return json{{"center", to_json(obs.center)},
              {"hard_semi_axes", to_json(obs.hard_semi_axes)},
              {"soft_ratio", obs.soft_ratio},
              {"orientation_rad", obs.orientation},
              {"exponent", obs.exponent},
              {"reference_point", to_json(obs.reference_point)},
              {"safety_factor", to_json(obs.safety_factor)},
              {"linear_velocity", to_json(obs.linear_velocity)},
              {"angular_velocity", obs.angular_velocity}};
}

Box derived_workspace(const Scenario& scenario) {
  const Vector& goal = attractor(scenario.model.scene.ds);
  Box box{goal, goal};
  const auto grow = [&box](const Vector& lo, const Vector& hi) {
    box.min = box.min.cwiseMin(lo);
    box.max = box.max.cwiseMax(hi);
  };
  for (const auto& s : scenario.starts) grow(s, s);
  for (const auto& obs : scenario.model.scene.obstacles) {
    const double reach = obs.hard_semi_axes.maxCoeff() * obs.soft_ratio * obs.safety_factor.maxCoeff();
    grow(obs.center.array() - reach, obs.center.array() + reach);
  }
  for (const auto& script : scenario.model.scripts) {
    const Obstacle& obs = scenario.model.scene.obstacles[script.obstacle];
    const double reach = obs.hard_semi_axes.maxCoeff() * obs.soft_ratio * obs.safety_factor.maxCoeff();
    for (const auto& wp : script.waypoints) grow(wp.center.array() - reach, wp.center.array() + reach);
  }
  return box;
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  ObjectReader r(doc, "");
  Scenario s;

  if (const json* m = r.find("metadata")) {
    ObjectReader mr(*m, "metadata");
    if (const json* v = mr.find("name")) s.metadata.name = as_string(*v, mr.at("name"));
    if (const json* v = mr.find("seed")) s.metadata.seed = as_integer(*v, mr.at("seed"));
    if (const json* v = mr.find("notes")) s.metadata.notes = as_string(*v, mr.at("notes"));
    if (const json* v = mr.find("units")) s.metadata.units = as_string(*v, mr.at("units"));
    mr.finish();
  }

  const json& ds_doc = r.need("ds");
  if (ds_doc.is_string()) {
    const std::filesystem::path ds_path = base_dir / ds_doc.get<std::string>();
    if (!std::filesystem::exists(ds_path)) throw ScenarioError("ds", "DS file '" + ds_path.string() + "' not found");
    try {
      s.model.scene.ds = load_ds(ds_path);
    } catch (const ScenarioError& e) {
      throw ScenarioError(e.path().empty() ? "ds" : "ds." + e.path(), e.what());
    }
  } else {
    s.model.scene.ds = parse_ds(ds_doc, "ds");
  }
  const auto d = static_cast<Eigen::Index>(dim(s.model.scene.ds));

  if (const json* obs = r.find("obstacles")) {
    if (!obs->is_array()) throw ScenarioError("obstacles", "expected an array");
    for (std::size_t i = 0; i < obs->size(); ++i) {
      s.model.scene.obstacles.push_back(parse_obstacle((*obs)[i], "obstacles[" + std::to_string(i) + "]", d));
    }
  }
  const auto n_obs = s.model.scene.obstacles.size();

  if (const json* integ = r.find("integration")) {
    s.integration = parse_integration(*integ, "integration", d);
  }

  if (const json* st = r.find("starts")) {
    ObjectReader sr(*st, "starts");
    if (const json* pts = sr.find("points")) {
      if (!pts->is_array()) throw ScenarioError("starts.points", "expected an array");
      for (std::size_t i = 0; i < pts->size(); ++i) {
        s.start_points.push_back(as_vector((*pts)[i], "starts.points[" + std::to_string(i) + "]", d));
      }
    }
    if (const json* g = sr.find("grid")) s.start_grid = parse_grid(*g, "starts.grid", d);
    sr.finish();
  }
  s.starts = s.start_points;
  if (s.start_grid) {
    for (auto& p : grid_points(s.start_grid->min, s.start_grid->max, s.start_grid->counts)) s.starts.push_back(std::move(p));
  }

  if (const json* ms = r.find("motion_scripts")) {
    if (!ms->is_array()) throw ScenarioError("motion_scripts", "expected an array");
    std::set<std::size_t> scripted;
    for (std::size_t i = 0; i < ms->size(); ++i) {
      const std::string path = "motion_scripts[" + std::to_string(i) + "]";
      auto script = parse_script((*ms)[i], path, d, n_obs);
      if (!scripted.insert(script.obstacle).second) throw ScenarioError(path + ".obstacle", "obstacle already scripted");
      s.model.scripts.push_back(std::move(script));
    }
  }

  if (const json* ws = r.find("workspace")) {
    s.workspace = parse_box(*ws, "workspace", d);
    s.workspace_explicit = true;
  } else {
    s.workspace = derived_workspace(s);
  }

  StrategyDraft draft = parse_strategy(r.find("strategy"), "strategy", n_obs);
  StrategyConfig& cfg = draft.cfg;
  if (draft.c_auto) cfg.c = auto_modulation_factor(s.model.scene.ds, s.workspace.min, s.workspace.max);
  if (draft.pairs_auto) cfg.intersection_pairs = discover_intersection_pairs(s.model.scene.obstacles);
  cfg.gate_center = attractor(s.model.scene.ds);
  cfg.gate_radius = 10.0 * s.integration.eps_conv;
  if (cfg.c > 0.0 && d != 2 && n_obs > 0) {
    throw ScenarioError("strategy.c", "adaptive strategy terms require a planar workspace; set c to 0");
  }
  s.model.scene.strategy = cfg;

  if (const json* p = r.find("provenance")) {
    if (!p->is_object()) throw ScenarioError("provenance", "expected an object");
    s.provenance = *p;
  } else {
    s.provenance = json{{"c", cfg.c},
                        {"c_source", draft.c_auto ? "auto: 5% of max DS speed over the workspace" : "explicit"},
                        {"intersection_pairs_source", draft.pairs_auto ? "auto: soft-shell overlap" : "explicit"},
                        {"attractor_gate_radius", cfg.gate_radius},
                        {"multi_obstacle_blend", std::string(to_string(cfg.blend)) +
                                                     " (implementation choice; per-obstacle weights "
                                                     "proportional to prod_{m != n} (Gamma_m - 1))"},
                        {"workspace_source", s.workspace_explicit ? "explicit" : "derived"}};
  }
  r.finish();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", "parse error in '" + path.string() + "': " + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

json scenario_to_json(const Scenario& s) {
  const StrategyConfig& cfg = s.model.scene.strategy;
  json obstacles = json::array();
  for (const auto& obs : s.model.scene.obstacles) obstacles.push_back(obstacle_to_json(obs));
  json pairs = json::array();
  for (const auto& [a, b] : cfg.intersection_pairs) pairs.push_back(json::array({a, b}));

  json integration{{"dt", s.integration.dt},
                   {"max_steps", s.integration.max_steps},
                   {"eps_conv", s.integration.eps_conv},
                   {"pose_sampling", s.integration.pose_sampling == PoseSampling::PerStage ? "per_stage" : "per_step"}};
  if (s.integration.target) {
    integration["target"] = json{{"center", to_json(s.integration.target->center)}, {"radius", s.integration.target->radius}};
  }

  json starts{{"points", json::array()}};
  for (const auto& p : s.start_points) starts["points"].push_back(to_json(p));
  if (s.start_grid) {
    starts["grid"] = json{{"min", to_json(s.start_grid->min)}, {"max", to_json(s.start_grid->max)}, {"counts", s.start_grid->counts}};
  }

  json scripts = json::array();
  for (const auto& script : s.model.scripts) {
    json wps = json::array();
    for (const auto& wp : script.waypoints) {
      wps.push_back(json{{"t", wp.t}, {"center", to_json(wp.center)}, {"orientation_rad", wp.orientation}});
    }
    scripts.push_back(json{{"obstacle", script.obstacle}, {"waypoints", wps}});
  }

  json out{{"metadata", json{{"name", s.metadata.name}, {"seed", s.metadata.seed}, {"notes", s.metadata.notes}, {"units", s.metadata.units}}},
           {"ds", ds_to_json(s.model.scene.ds)},
           {"obstacles", obstacles},
           {"strategy", json{{"c", cfg.c},
                             {"theta2_policy", theta2_to_json(cfg.theta2)},
                             {"sgn_zero_value", cfg.sgn_zero_value},
                             {"intersection_pairs", pairs},
                             {"hard_core_guard", cfg.hard_core_guard},
                             {"blend", std::string(to_string(cfg.blend))}}},
           {"integration", integration},
           {"starts", starts},
           {"motion_scripts", scripts},
           {"provenance", s.provenance}};
  if (s.workspace_explicit) out["workspace"] = json{{"min", to_json(s.workspace.min)}, {"max", to_json(s.workspace.max)}};
  return out;
}

std::optional<std::size_t> first_start_inside_obstacle(const Scenario& scenario) {
  const auto obstacles = obstacles_at(scenario.model, 0.0);
  for (std::size_t i = 0; i < scenario.starts.size(); ++i) {
    for (const auto& obs : obstacles) {
      const Vector scaled = to_obstacle_frame(obs, scenario.starts[i]).cwiseQuotient(obs.safety_factor);
      if (detail::local_gamma(obs.hard_semi_axes, obs.exponent, scaled) < 1.0 - kInteriorTolerance) return i;
    }
  }
  return std::nullopt;
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string text = scenario_to_json(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace softds
