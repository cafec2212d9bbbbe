#ifndef SOFTDS_SIM_HPP
#define SOFTDS_SIM_HPP

#include <softds/motion_script.hpp>
#include <softds/strategy.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace softds {

/// Raised before integration starts (e.g. a start inside a hard core).
class SetupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TargetBall {
  Vector center;
  double radius = 0.0;
};

/// When obstacle poses are sampled from their motion.
enum class PoseSampling {
  PerStep,   // frozen over the four RK4 stages
  PerStage,  // re-posed at every stage time
};

struct IntegrationSettings {
  double dt = 0.01;
  long max_steps = 50000;
  double eps_conv = 1e-3;
  std::optional<TargetBall> target;
  PoseSampling pose_sampling = PoseSampling::PerStep;
  /// Keep per-step samples; summaries are computed either way.
  bool keep_samples = true;
};

void validate(const IntegrationSettings& settings, int dim);

/// A scene plus the motion of its obstacles. Obstacles without a script but
/// with a nonzero velocity move rigidly at that constant velocity.
struct Model {
  Scene scene;
  std::vector<MotionScript> scripts;
};

/// Obstacles of `model` posed at time t.
std::vector<Obstacle> obstacles_at(const Model& model, double t);

struct Sample {
  double t = 0.0;
  Vector position;
  Vector velocity;
  std::vector<double> gamma;
  std::vector<double> gamma_soft;
  std::vector<RegionLabel> region;
  bool intersection = false;

  bool in_soft_region() const;
};

struct SpeedStats {
  double mean = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct RegionalSpeeds {
  std::optional<SpeedStats> soft_region;
  std::optional<SpeedStats> intersection;
};

struct TrajectoryRecord {
  std::vector<Sample> samples;
  bool converged = false;
  long steps = 0;
  std::optional<double> navigation_time;
  double min_gamma = std::numeric_limits<double>::infinity();
  RegionalSpeeds speeds;
  std::size_t theta2_fallbacks = 0;
  std::optional<std::string> failure;
  Vector final_position;
};

using VelocityField = std::function<Vector(const Vector&)>;

/// Classical fourth-order Runge-Kutta step. Exceptions raised by `field`
/// are rethrown with the stage number (1-4) in the message.
Vector rk4_step(const VelocityField& field, const Vector& x, double dt);

TrajectoryRecord integrate(const Model& model, const Vector& start, const IntegrationSettings& settings);

/// Runs every start independently, using up to `workers` threads
/// (0 = hardware concurrency). Output order matches `starts`.
std::vector<TrajectoryRecord> batch_run(const Model& model, const std::vector<Vector>& starts,
                                        const IntegrationSettings& settings, unsigned workers = 0);

/// Mean and max speed over soft-region and intersection samples.
RegionalSpeeds regional_speed_stats(const TrajectoryRecord& record);

/// All obstacles rebuilt with stiffness k.
Model with_uniform_stiffness(const Model& model, double k);

struct SweepRow {
  double k = 1.0;
  std::vector<std::optional<double>> navigation_times;
  std::optional<double> median_time;
  std::optional<double> mean_time;
  double convergence_rate = 0.0;
  double target_rate = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

/// Median and mean navigation time per stiffness value. Requires a target.
SweepReport k_sweep(const Model& model, const std::vector<double>& k_values, const std::vector<Vector>& starts,
                    const IntegrationSettings& settings, unsigned workers = 0);

struct ReductionEntry {
  Vector start;
  std::optional<double> baseline_time;
  std::optional<double> soft_time;
  /// (t_baseline - t_soft) / t_baseline; absent unless both runs reached
  /// the target and converged.
  std::optional<double> reduction;
  /// Smallest hard-core Γ along the rigid baseline path.
  double baseline_min_gamma = 0.0;
};

struct ReductionReport {
  double k = 1.0;
  std::vector<ReductionEntry> entries;
};

ReductionReport time_reduction_map(const Model& model, double k, const std::vector<Vector>& starts,
                                   const IntegrationSettings& settings, unsigned workers = 0);

/// Regular grid over [lo, hi] with counts[i] points per axis (first axis
/// fastest).
std::vector<Vector> grid_points(const Vector& lo, const Vector& hi, const std::vector<int>& counts);

}  // namespace softds

#endif  // SOFTDS_SIM_HPP
