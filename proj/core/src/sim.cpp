#include <softds/sim.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace softds {
namespace {

class SpeedAccumulator {
 public:
  void add(double speed) {
    sum_ += speed;
    max_ = std::max(max_, speed);
    ++count_;
  }

  std::optional<SpeedStats> stats() const {
    if (count_ == 0) return std::nullopt;
    return SpeedStats{sum_ / static_cast<double>(count_), max_, count_};
  }

 private:
  double sum_ = 0.0;
  double max_ = 0.0;
  std::size_t count_ = 0;
};

bool has_motion(const Model& model) {
  if (!model.scripts.empty()) return true;
  return std::any_of(model.scene.obstacles.begin(), model.scene.obstacles.end(),
                     [](const Obstacle& o) { return o.is_moving(); });
}

bool any_intersection(const std::vector<Obstacle>& obstacles, const Vector& x) {
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (obstacles[i].is_rigid()) continue;
    for (std::size_t j = i + 1; j < obstacles.size(); ++j) {
      if (!obstacles[j].is_rigid() && in_intersection(obstacles[i], obstacles[j], x)) return true;
    }
  }
  return false;
}

template <typename Stage>
Vector call_stage(const Stage& stage, int index, const Vector& x) {
  try {
    return stage(x);
  } catch (const InteriorError& e) {
    throw InteriorError("rk4 stage " + std::to_string(index) + ": " + e.what(), e.obstacle(), e.gamma());
  } catch (const std::exception& e) {
    throw std::runtime_error("rk4 stage " + std::to_string(index) + ": " + e.what());
  }
}

// RK4 where stage s evaluates field_at(time_offset_s)(x); k1 may be supplied.
template <typename FieldAt>
Vector rk4_timed(const FieldAt& field_at, const Vector& x, double dt, const Vector* k1_given) {
  const Vector k1 = k1_given ? *k1_given : call_stage(field_at(0.0), 1, x);
  const Vector k2 = call_stage(field_at(0.5 * dt), 2, x + 0.5 * dt * k1);
  const Vector k3 = call_stage(field_at(0.5 * dt), 3, x + 0.5 * dt * k2);
  const Vector k4 = call_stage(field_at(dt), 4, x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

bool Sample::in_soft_region() const {
  return std::find(region.begin(), region.end(), RegionLabel::SoftRegion) != region.end();
}

void validate(const IntegrationSettings& settings, int dim) {
  if (!(settings.dt > 0.0)) throw DomainError("integration.dt: must be > 0");
  if (settings.max_steps < 1) throw DomainError("integration.max_steps: must be >= 1");
  if (!(settings.eps_conv > 0.0)) throw DomainError("integration.eps_conv: must be > 0");
  if (settings.target) {
    if (settings.target->center.size() != dim) throw DomainError("integration.target.center: dimension mismatch");
    if (!(settings.target->radius > 0.0)) throw DomainError("integration.target.radius: must be > 0");
  }
}

std::vector<Obstacle> obstacles_at(const Model& model, double t) {
  std::vector<Obstacle> out = model.scene.obstacles;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Obstacle& base = model.scene.obstacles[i];
    if (!base.is_moving()) continue;
    ObstaclePose pose;
    pose.center = base.center + t * base.linear_velocity;
    pose.orientation = base.orientation + t * base.angular_velocity;
    pose.linear_velocity = base.linear_velocity;
    pose.angular_velocity = base.angular_velocity;
    out[i] = posed(base, pose);
  }
  for (const MotionScript& script : model.scripts) {
    out[script.obstacle] = posed(model.scene.obstacles[script.obstacle], pose_at(script, t));
  }
  return out;
}

Vector rk4_step(const VelocityField& field, const Vector& x, double dt) {
  if (!(dt > 0.0)) throw DomainError("rk4_step: dt must be > 0");
  return rk4_timed([&field](double) -> const VelocityField& { return field; }, x, dt, nullptr);
}

TrajectoryRecord integrate(const Model& model, const Vector& start, const IntegrationSettings& settings) {
  const int d = dim(model.scene.ds);
  validate(settings, d);
  if (start.size() != d) throw SetupError("start: dimension mismatch");
  const Vector& goal = attractor(model.scene.ds);
  const bool moving = has_motion(model);

  Scene scene = model.scene;
  if (moving) scene.obstacles = obstacles_at(model, 0.0);
  for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
    const Obstacle& obs = scene.obstacles[i];
    const Vector scaled = to_obstacle_frame(obs, start).cwiseQuotient(obs.safety_factor);
    const double g = detail::local_gamma(obs.hard_semi_axes, obs.exponent, scaled);
    if (g < 1.0 - kInteriorTolerance) {
      throw SetupError("start lies inside the hard core of obstacle " + std::to_string(i));
    }
  }

  TrajectoryRecord record;
  SpeedAccumulator soft_acc;
  SpeedAccumulator inter_acc;
  Vector x = start;
  for (long step = 0;; ++step) {
    const double t = static_cast<double>(step) * settings.dt;
    if (moving && step > 0) scene.obstacles = obstacles_at(model, t);

    VelocityBreakdown vel;
    try {
      vel = velocity_breakdown(scene, x);
    } catch (const std::exception& e) {
      record.failure = e.what();
      break;
    }
    if (vel.theta2.fallback) ++record.theta2_fallbacks;

    Sample s;
    s.t = t;
    s.position = x;
    s.velocity = vel.total;
    const auto n = scene.obstacles.size();
    s.gamma.resize(n);
    s.gamma_soft.resize(n);
    s.region.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.gamma[i] = gamma(scene.obstacles[i], x);
      s.gamma_soft[i] = gamma_soft(scene.obstacles[i], x);
      s.region[i] = classify_region(scene.obstacles[i], x);
      record.min_gamma = std::min(record.min_gamma, s.gamma[i]);
    }
    s.intersection = any_intersection(scene.obstacles, x);
    const double speed = s.velocity.norm();
    if (s.in_soft_region()) soft_acc.add(speed);
    if (s.intersection) inter_acc.add(speed);
    if (settings.target && !record.navigation_time &&
        (x - settings.target->center).norm() <= settings.target->radius) {
      record.navigation_time = t;
    }
    record.steps = step;
    if (settings.keep_samples) record.samples.push_back(std::move(s));

    if ((x - goal).norm() < settings.eps_conv) {
      record.converged = true;
      break;
    }
    if (step >= settings.max_steps) break;

    try {
      if (moving && settings.pose_sampling == PoseSampling::PerStage) {
        const auto field_at = [&model, &scene, t](double offset) {
          return [&model, &scene, time = t + offset](const Vector& p) {
            Scene staged = scene;
            staged.obstacles = obstacles_at(model, time);
            return total_velocity(staged, p);
          };
        };
        x = rk4_timed(field_at, x, settings.dt, &vel.total);
      } else {
        const auto field_at = [&scene](double) { return [&scene](const Vector& p) { return total_velocity(scene, p); }; };
        x = rk4_timed(field_at, x, settings.dt, &vel.total);
      }
    } catch (const std::exception& e) {
      record.failure = e.what();
      break;
    }
  }
  record.final_position = x;
  record.speeds = {soft_acc.stats(), inter_acc.stats()};
  return record;
}

std::vector<TrajectoryRecord> batch_run(const Model& model, const std::vector<Vector>& starts,
                                        const IntegrationSettings& settings, unsigned workers) {
  std::vector<TrajectoryRecord> out(starts.size());
  if (starts.empty()) return out;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(starts.size()));

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < starts.size(); i = next++) {
      try {
        out[i] = integrate(model, starts[i], settings);
      } catch (const std::exception& e) {
        out[i].failure = std::string("setup: ") + e.what();
        out[i].final_position = starts[i];
      }
    }
  };
  if (workers == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

RegionalSpeeds regional_speed_stats(const TrajectoryRecord& record) {
  SpeedAccumulator soft_acc;
  SpeedAccumulator inter_acc;
  for (const Sample& s : record.samples) {
    const double speed = s.velocity.norm();
    if (s.in_soft_region()) soft_acc.add(speed);
    if (s.intersection) inter_acc.add(speed);
  }
  return {soft_acc.stats(), inter_acc.stats()};
}

Model with_uniform_stiffness(const Model& model, double k) {
  Model out = model;
  for (auto& obs : out.scene.obstacles) obs = with_stiffness(obs, k);
  return out;
}

SweepReport k_sweep(const Model& model, const std::vector<double>& k_values, const std::vector<Vector>& starts,
                    const IntegrationSettings& settings, unsigned workers) {
  if (!settings.target) throw DomainError("k_sweep: integration.target is required for navigation times");
  for (double k : k_values) {
    if (!(k >= 1.0)) throw DomainError("k_sweep: stiffness values must be >= 1, got " + std::to_string(k));
  }
  IntegrationSettings lean = settings;
  lean.keep_samples = false;

  SweepReport report;
  for (double k : k_values) {
    const auto records = batch_run(with_uniform_stiffness(model, k), starts, lean, workers);
    SweepRow row;
    row.k = k;
    std::vector<double> times;
    std::size_t converged = 0;
    for (const auto& rec : records) {
      row.navigation_times.push_back(rec.navigation_time);
      if (rec.navigation_time) times.push_back(*rec.navigation_time);
      if (rec.converged) ++converged;
    }
    if (!records.empty()) {
      row.convergence_rate = static_cast<double>(converged) / static_cast<double>(records.size());
      row.target_rate = static_cast<double>(times.size()) / static_cast<double>(records.size());
    }
    if (!times.empty()) {
      row.mean_time = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
    }
    row.median_time = median(std::move(times));
    report.rows.push_back(std::move(row));
  }
  return report;
}

ReductionReport time_reduction_map(const Model& model, double k, const std::vector<Vector>& starts,
                                   const IntegrationSettings& settings, unsigned workers) {
  if (!(k >= 1.0)) throw DomainError("time_reduction_map: stiffness must be >= 1, got " + std::to_string(k));
  if (!settings.target) throw DomainError("time_reduction_map: integration.target is required");
  IntegrationSettings lean = settings;
  lean.keep_samples = false;
  const auto baseline = batch_run(with_uniform_stiffness(model, 1.0), starts, lean, workers);
  const auto soft = batch_run(with_uniform_stiffness(model, k), starts, lean, workers);

  ReductionReport report;
  report.k = k;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    ReductionEntry e;
    e.start = starts[i];
    e.baseline_time = baseline[i].navigation_time;
    e.soft_time = soft[i].navigation_time;
    e.baseline_min_gamma = baseline[i].min_gamma;
    if (e.baseline_time && e.soft_time && baseline[i].converged && soft[i].converged) {
      const double tb = *e.baseline_time;
      const double ts = *e.soft_time;
      if (tb > 0.0) {
        e.reduction = (tb - ts) / tb;
      } else if (ts == 0.0) {
        e.reduction = 0.0;
      }
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::vector<Vector> grid_points(const Vector& lo, const Vector& hi, const std::vector<int>& counts) {
  const auto d = lo.size();
  if (hi.size() != d || static_cast<Eigen::Index>(counts.size()) != d) {
    throw DomainError("grid: min, max and counts must share a dimension");
  }
  long total = 1;
  for (int c : counts) {
    if (c < 1) throw DomainError("grid: counts must be >= 1");
    total *= c;
  }
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    Vector p(d);
    long rem = idx;
    for (Eigen::Index i = 0; i < d; ++i) {
      const int c = counts[static_cast<std::size_t>(i)];
      const long j = rem % c;
      rem /= c;
      p(i) = c == 1 ? 0.5 * (lo(i) + hi(i)) : lo(i) + (hi(i) - lo(i)) * static_cast<double>(j) / (c - 1);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace softds
