#include "npsl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "npsl/error.hpp"

namespace npsl {

namespace {

Bounds hull(Bounds a, Bounds b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Bounds affine(Bounds in, double a, double b) {
  const double x = a + b * in.lo;
  const double y = a + b * in.hi;
  return {std::min(x, y), std::max(x, y)};
}

std::vector<double> y_grid() {
  std::vector<double> ys;
  for (int k = 0; k <= 2000; ++k) ys.push_back(-10.0 + 0.01 * k);
  for (int k = 0; k <= 120; ++k) {
    const double v = std::pow(10.0, -6.0 + 0.1 * k);
    ys.push_back(v);
    ys.push_back(-v);
  }
  std::sort(ys.begin(), ys.end());
  // Near-duplicates would turn difference quotients into rounding noise.
  ys.erase(std::unique(ys.begin(), ys.end(),
                       [](double a, double b) { return b - a < 1e-9 * std::max(1.0, std::abs(b)); }),
           ys.end());
  return ys;
}

}  // namespace

Nonlinearity Nonlinearity::linear_gain(double k) {
  require(std::isfinite(k), ErrorCode::invalid_argument, "linear_gain: gain must be finite");
  Nonlinearity n;
  n.kind_ = Kind::linear_gain;
  n.params_ = {k};
  n.sector_ = n.slope_ = {k, k};
  n.has_slope_ = true;
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::saturation(double level, double gain) {
  require(level > 0.0 && gain >= 0.0 && std::isfinite(level) && std::isfinite(gain), ErrorCode::invalid_argument,
          "saturation: level > 0 and gain >= 0 required");
  Nonlinearity n;
  n.kind_ = Kind::saturation;
  n.params_ = {level, gain};
  n.sector_ = n.slope_ = {0.0, gain};
  n.has_slope_ = true;
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::deadzone(double width, double slope) {
  require(width >= 0.0 && slope >= 0.0 && std::isfinite(width) && std::isfinite(slope), ErrorCode::invalid_argument,
          "deadzone: width >= 0 and slope >= 0 required");
  Nonlinearity n;
  n.kind_ = Kind::deadzone;
  n.params_ = {width, slope};
  n.sector_ = n.slope_ = {0.0, slope};
  n.has_slope_ = true;
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::scaled_tanh(double gain) {
  require(std::isfinite(gain), ErrorCode::invalid_argument, "scaled_tanh: gain must be finite");
  Nonlinearity n;
  n.kind_ = Kind::scaled_tanh;
  n.params_ = {gain};
  n.sector_ = n.slope_ = {std::min(0.0, gain), std::max(0.0, gain)};
  n.has_slope_ = true;
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::pw_linear(std::vector<std::pair<double, double>> knots) {
  require(knots.size() >= 2, ErrorCode::invalid_argument, "pw_linear: at least two knots required");
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 1; i < knots.size(); ++i)
    require(knots[i].first > knots[i - 1].first, ErrorCode::invalid_argument, "pw_linear: knot abscissae must be distinct");
  Nonlinearity n;
  n.kind_ = Kind::pw_linear;
  n.knots_ = std::move(knots);
  require(std::abs(n(0.0, 0.0)) <= 1e-12, ErrorCode::invalid_argument, "pw_linear: φ(0) must be 0 for a sector class");
  Bounds slope{kInf, -kInf};
  for (std::size_t i = 1; i < n.knots_.size(); ++i) {
    const double s = (n.knots_[i].second - n.knots_[i - 1].second) / (n.knots_[i].first - n.knots_[i - 1].first);
    slope = hull(slope, {s, s});
  }
  Bounds sector{kInf, -kInf};
  const double s_left = (n.knots_[1].second - n.knots_[0].second) / (n.knots_[1].first - n.knots_[0].first);
  const std::size_t e = n.knots_.size() - 1;
  const double s_right = (n.knots_[e].second - n.knots_[e - 1].second) / (n.knots_[e].first - n.knots_[e - 1].first);
  sector = hull(sector, {s_left, s_left});
  sector = hull(sector, {s_right, s_right});
  for (const auto& [y, w] : n.knots_)
    if (y != 0.0) sector = hull(sector, {w / y, w / y});
  // The segment through the origin sets φ/y near 0.
  for (std::size_t i = 1; i < n.knots_.size(); ++i)
    if (n.knots_[i - 1].first < 0.0 && n.knots_[i].first > 0.0) {
      const double s = (n.knots_[i].second - n.knots_[i - 1].second) / (n.knots_[i].first - n.knots_[i - 1].first);
      sector = hull(sector, {s, s});
    }
  n.sector_ = sector;
  n.slope_ = slope;
  n.has_slope_ = true;
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::switched(std::vector<Nonlinearity> members, std::vector<double> switch_times) {
  require(!members.empty() && switch_times.size() + 1 == members.size(), ErrorCode::invalid_argument,
          "switched: need one more member than switch times");
  require(std::is_sorted(switch_times.begin(), switch_times.end()), ErrorCode::invalid_argument,
          "switched: switch times must be increasing");
  Nonlinearity n;
  n.kind_ = Kind::switched;
  n.sector_ = members.front().sector_;
  n.slope_ = members.front().slope_;
  n.has_slope_ = true;
  for (const auto& m : members) {
    n.sector_ = hull(n.sector_, m.sector_);
    n.slope_ = hull(n.slope_, m.slope_);
    n.has_slope_ = n.has_slope_ && m.has_slope_;
  }
  n.members_ = std::move(members);
  n.times_ = std::move(switch_times);
  n.validate();
  return n;
}

Nonlinearity Nonlinearity::transformed(const Nonlinearity& inner, double a, double b) {
  require(std::isfinite(a) && std::isfinite(b), ErrorCode::invalid_argument, "transformed: coefficients must be finite");
  Nonlinearity n;
  n.kind_ = Kind::transformed;
  n.params_ = {a, b};
  n.members_ = {inner};
  n.sector_ = affine(inner.sector_, a, b);
  n.slope_ = affine(inner.slope_, a, b);
  n.has_slope_ = inner.has_slope_;
  n.validate();
  return n;
}

double Nonlinearity::operator()(double t, double y) const {
  switch (kind_) {
    case Kind::linear_gain: return params_[0] * y;
    case Kind::saturation: return std::clamp(params_[1] * y, -params_[0], params_[0]);
    case Kind::deadzone: {
      const double w = params_[0];
      if (y > w) return params_[1] * (y - w);
      if (y < -w) return params_[1] * (y + w);
      return 0.0;
    }
    case Kind::scaled_tanh: return params_[0] * std::tanh(y);
    case Kind::pw_linear: {
      std::size_t i = 1;
      while (i + 1 < knots_.size() && y > knots_[i].first) ++i;
      const auto& [y0, w0] = knots_[i - 1];
      const auto& [y1, w1] = knots_[i];
      return w0 + (w1 - w0) * (y - y0) / (y1 - y0);
    }
    case Kind::switched: {
      const auto k = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
      return members_[k](t, y);
    }
    case Kind::transformed: return params_[0] * y + params_[1] * members_[0](t, y);
  }
  return 0.0;
}

std::string Nonlinearity::name() const {
  switch (kind_) {
    case Kind::linear_gain: return "linear_gain(" + std::to_string(params_[0]) + ")";
    case Kind::saturation: return "saturation(" + std::to_string(params_[0]) + "," + std::to_string(params_[1]) + ")";
    case Kind::deadzone: return "deadzone(" + std::to_string(params_[0]) + "," + std::to_string(params_[1]) + ")";
    case Kind::scaled_tanh: return "scaled_tanh(" + std::to_string(params_[0]) + ")";
    case Kind::pw_linear: return "pw_linear(" + std::to_string(knots_.size()) + " knots)";
    case Kind::switched: return "switched(" + std::to_string(members_.size()) + " members)";
    case Kind::transformed: return "transformed(" + members_[0].name() + ")";
  }
  return "unknown";
}

Nonlinearity Nonlinearity::with_declared(Bounds sector, std::optional<Bounds> slope) const {
  Nonlinearity n = *this;
  n.sector_ = sector;
  n.has_slope_ = slope.has_value();
  if (slope) n.slope_ = *slope;
  n.validate();
  return n;
}

std::vector<double> Nonlinearity::sample_times() const {
  std::vector<double> ts{0.0};
  std::vector<const Nonlinearity*> stack{this};
  while (!stack.empty()) {
    const Nonlinearity* n = stack.back();
    stack.pop_back();
    for (double s : n->times_) {
      ts.push_back(s);
      ts.push_back(s - 1e-9);
    }
    for (const auto& m : n->members_) stack.push_back(&m);
  }
  if (!ts.empty()) ts.push_back(*std::max_element(ts.begin(), ts.end()) + 1.0);
  return ts;
}

void Nonlinearity::validate() const {
  require(sector_.lo <= sector_.hi, ErrorCode::invalid_argument, "nonlinearity: empty sector declaration");
  const std::vector<double> ys = y_grid();
  for (double t : sample_times()) {
    double prev_y = 0.0, prev_w = 0.0;
    bool first = true;
    for (double y : ys) {
      const double w = (*this)(t, y);
      require(std::isfinite(w), ErrorCode::hypothesis, name() + ": non-finite value on the validation grid");
      const double y2 = y * y;
      const double tol = 1e-12 * (1.0 + y2) * (1.0 + std::abs(sector_.lo) + std::abs(sector_.hi));
      require(w * y >= sector_.lo * y2 - tol && w * y <= sector_.hi * y2 + tol, ErrorCode::hypothesis,
              name() + ": declared sector [" + std::to_string(sector_.lo) + ", " + std::to_string(sector_.hi) +
                  "] violated at y = " + std::to_string(y));
      if (has_slope_ && !first) {
        const double q = (w - prev_w) / (y - prev_y);
        const double stol = 1e-9 * (1.0 + std::abs(slope_.lo) + std::abs(slope_.hi));
        require(q >= slope_.lo - stol && q <= slope_.hi + stol, ErrorCode::hypothesis,
                name() + ": declared slope bounds violated near y = " + std::to_string(y));
      }
      prev_y = y;
      prev_w = w;
      first = false;
    }
  }
}

Trajectory integrate(const LureSystem& sys, const std::vector<Nonlinearity>& phi, const Vector& z0, double horizon,
                     double dt) {
  validate_system(sys);
  const Eigen::Index d = sys.states();
  const Eigen::Index m = sys.channels();
  require(static_cast<Eigen::Index>(phi.size()) == m, ErrorCode::dimension_mismatch,
          "integrate: one nonlinearity per channel required");
  require(z0.size() == d, ErrorCode::dimension_mismatch, "integrate: initial state has wrong length");
  require(dt > 0.0 && horizon >= dt, ErrorCode::invalid_argument, "integrate: need dt > 0 and T >= dt");
  require_finite(z0, "z0");

  const auto steps = static_cast<Eigen::Index>(std::llround(horizon / dt));
  Trajectory tr;
  tr.ts.resize(steps + 1);
  tr.states.resize(d, steps + 1);
  tr.rates.resize(d, steps + 1);
  tr.inputs.resize(m, steps + 1);
  tr.outputs.resize(m, steps + 1);

  Vector z = z0, y(m), w(m), k1(d), k2(d), k3(d), k4(d), tmp(d);
  auto field = [&](double t, const Vector& state, Vector& out) {
    y.noalias() = sys.c * state;
    for (Eigen::Index i = 0; i < m; ++i) w(i) = phi[static_cast<std::size_t>(i)](t, y(i));
    out.noalias() = sys.a * state;
    out.noalias() += sys.b * w;
  };

  for (Eigen::Index k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    field(t, z, k1);
    tr.ts(k) = t;
    tr.states.col(k) = z;
    tr.rates.col(k) = k1;
    tr.inputs.col(k) = w;
    tr.outputs.col(k) = y;
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > 1e150) {
      tr.blew_up = true;
      const Eigen::Index keep = k;  // drop the offending sample
      tr.ts.conservativeResize(keep);
      tr.states.conservativeResize(d, keep);
      tr.rates.conservativeResize(d, keep);
      tr.inputs.conservativeResize(m, keep);
      tr.outputs.conservativeResize(m, keep);
      return tr;
    }
    if (k == steps) break;
    tmp = z + 0.5 * dt * k1;
    field(t + 0.5 * dt, tmp, k2);
    tmp = z + 0.5 * dt * k2;
    field(t + 0.5 * dt, tmp, k3);
    tmp = z + dt * k3;
    field(t + dt, tmp, k4);
    z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return tr;
}

std::vector<Trajectory> integrate_batch(const LureSystem& sys, const std::vector<SimRun>& runs, double horizon,
                                        double dt, Execution exec) {
  std::vector<Trajectory> out(runs.size());
  for_each_index(runs.size(), exec, [&](std::size_t i) { out[i] = integrate(sys, runs[i].phi, runs[i].z0, horizon, dt); });
  return out;
}

double check_decay(const Trajectory& traj, const NormSpec& spec, double c) {
  require(traj.size() > 0, ErrorCode::invalid_argument, "check_decay: empty trajectory");
  const double n0 = vector_norm(traj.state(0), spec);
  if (n0 == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < traj.size(); ++k)
    worst = std::max(worst, vector_norm(traj.state(k), spec) * std::exp(c * traj.ts(k)) / n0);
  return worst;
}

double check_contraction(const Trajectory& a, const Trajectory& b, const NormSpec& spec, double c) {
  require(a.size() > 0 && a.size() == b.size(), ErrorCode::dimension_mismatch, "check_contraction: grids differ");
  require((a.ts - b.ts).cwiseAbs().maxCoeff() == 0.0, ErrorCode::dimension_mismatch, "check_contraction: grids differ");
  const double n0 = vector_norm(a.state(0) - b.state(0), spec);
  if (n0 == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k)
    worst = std::max(worst, vector_norm(a.state(k) - b.state(k), spec) * std::exp(c * a.ts(k)) / n0);
  return worst;
}

DiniReport dini_residual(const Trajectory& traj, const NormSpec& spec) {
  require(traj.size() >= 2, ErrorCode::invalid_argument, "dini_residual: need at least two samples");
  DiniReport rep;
  auto active = [&](const Vector& rz) {
    const double mx = rz.cwiseAbs().maxCoeff();
    std::vector<int> s;
    for (Eigen::Index i = 0; i < rz.size(); ++i)
      if (std::abs(rz(i)) == mx) s.push_back(static_cast<int>(i));
    return s;
  };
  for (Eigen::Index k = 0; k + 1 < traj.size(); ++k) {
    const Vector z0 = traj.state(k), z1 = traj.state(k + 1);
    const Vector r0 = spec.apply(z0), r1 = spec.apply(z1);
    bool kink = false;
    if (spec.is_one()) {
      for (Eigen::Index i = 0; i < r0.size() && !kink; ++i) kink = r0(i) == 0.0 || r0(i) * r1(i) <= 0.0;
    } else if (spec.is_inf()) {
      kink = active(r0) != active(r1);
    }
    if (kink) {
      ++rep.steps_skipped;
      continue;
    }
    const double dt = traj.ts(k + 1) - traj.ts(k);
    const double n0 = vector_norm(z0, spec), n1 = vector_norm(z1, spec);
    const double fd = (n1 * n1 - n0 * n0) / dt;
    const double pr = weak_pairing(traj.rates.col(k), z0, spec).value;
    rep.residual = std::max(rep.residual, std::abs(fd - 2.0 * pr));
    ++rep.steps_used;
  }
  return rep;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index d = traj.states.rows(), m = traj.inputs.rows();
  os << "t";
  for (Eigen::Index i = 0; i < d; ++i) os << ",z_" << i + 1;
  for (Eigen::Index i = 0; i < m; ++i) os << ",w_" << i + 1;
  for (Eigen::Index i = 0; i < m; ++i) os << ",y_" << i + 1;
  os << "\n";
  const auto old = os.precision(17);
  for (Eigen::Index k = 0; k < traj.size(); ++k) {
    os << traj.ts(k);
    for (Eigen::Index i = 0; i < d; ++i) os << ',' << traj.states(i, k);
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << traj.inputs(i, k);
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << traj.outputs(i, k);
    os << "\n";
  }
  os.precision(old);
}

}  // namespace npsl
