#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "npsl/lure.hpp"
#include "npsl/parallel.hpp"

namespace npsl {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Time-varying scalar nonlinearity w = φ(t, y) with a declared sector class
/// (lo·y² ≤ φy ≤ hi·y²) and slope class (difference quotients in [lo, hi]).
/// Declarations are checked on a dense grid when the object is built.
class Nonlinearity {
 public:
  enum class Kind { linear_gain, saturation, deadzone, scaled_tanh, pw_linear, switched, transformed };

  static Nonlinearity linear_gain(double k);
  /// clamp(gain·y, −level, level)
  static Nonlinearity saturation(double level, double gain = 1.0);
  /// 0 on |y| ≤ width, slope·(y ∓ width) outside
  static Nonlinearity deadzone(double width, double slope);
  /// gain·tanh(y)
  static Nonlinearity scaled_tanh(double gain);
  /// Piecewise-linear interpolation through (y, w) knots sorted by y,
  /// extended linearly with the end slopes.
  static Nonlinearity pw_linear(std::vector<std::pair<double, double>> knots);
  /// members[k] is active on [switch_times[k-1], switch_times[k]).
  static Nonlinearity switched(std::vector<Nonlinearity> members, std::vector<double> switch_times);
  /// a·y + b·inner(t, y)
  static Nonlinearity transformed(const Nonlinearity& inner, double a, double b);

  double operator()(double t, double y) const;

  Kind kind() const { return kind_; }
  std::string name() const;
  const Bounds& sector() const { return sector_; }
  const Bounds& slope() const { return slope_; }
  bool has_slope() const { return has_slope_; }

  /// Narrower or wider claims are re-validated; throws hypothesis if the grid disagrees.
  Nonlinearity with_declared(Bounds sector, std::optional<Bounds> slope) const;

  /// True when the declared class fits inside the sector [lo, hi].
  bool sector_within(double lo, double hi) const { return sector_.lo >= lo && sector_.hi <= hi; }
  bool slope_within(double lo, double hi) const { return has_slope_ && slope_.lo >= lo && slope_.hi <= hi; }

 private:
  Nonlinearity() = default;
  void validate() const;
  std::vector<double> sample_times() const;

  Kind kind_ = Kind::linear_gain;
  std::vector<double> params_;
  std::vector<std::pair<double, double>> knots_;
  std::vector<Nonlinearity> members_;
  std::vector<double> times_;
  Bounds sector_;
  Bounds slope_;
  bool has_slope_ = false;
};

/// Grid samples of a trajectory; column k of each matrix belongs to ts(k).
struct Trajectory {
  Vector ts;
  Matrix states;   // d×N
  Matrix rates;    // d×N, ż = Az + Bw at the grid points
  Matrix inputs;   // m×N, w
  Matrix outputs;  // m×N, y
  bool blew_up = false;

  Eigen::Index size() const { return ts.size(); }
  Vector state(Eigen::Index k) const { return states.col(k); }
};

/// Classical fixed-step RK4 on ż = Az + Bφ(t, Cz), one nonlinearity per channel.
/// A non-finite (or > 1e150) state ends the run with blew_up set.
Trajectory integrate(const LureSystem& sys, const std::vector<Nonlinearity>& phi, const Vector& z0, double horizon,
                     double dt);

struct SimRun {
  std::vector<Nonlinearity> phi;
  Vector z0;
};

/// Independent runs; the parallel variant produces the same trajectories.
std::vector<Trajectory> integrate_batch(const LureSystem& sys, const std::vector<SimRun>& runs, double horizon,
                                        double dt, Execution exec = Execution::serial);

/// max_t ‖z(t)‖ e^{ct} / ‖z(0)‖ (0 when z(0) = 0).
double check_decay(const Trajectory& traj, const NormSpec& spec, double c);

/// max_t ‖z₁(t) − z₂(t)‖ e^{ct} / ‖z₁(0) − z₂(0)‖ (0 for identical starts).
double check_contraction(const Trajectory& a, const Trajectory& b, const NormSpec& spec, double c);

/// max over steps of |Δ‖z‖²/Δt − 2⟦ż, z⟧|. For p = 1 steps where a coordinate of Rz
/// changes sign (or is zero) are skipped, for p = ∞ steps where the active set changes.
struct DiniReport {
  double residual = 0.0;
  int steps_used = 0;
  int steps_skipped = 0;
};
DiniReport dini_residual(const Trajectory& traj, const NormSpec& spec);

/// Columns t, z_1..z_d, w_1..w_m, y_1..y_m.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace npsl
