#include "npsl/scalar_min.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace npsl {

ScalarMin golden_section(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMin best;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  // Endpoints are candidates too: a convex minimum may sit on the boundary.
  const double fa = f(lo), fb = f(hi);
  evals += 2;
  best = f1 <= f2 ? ScalarMin{x1, f1, evals} : ScalarMin{x2, f2, evals};
  if (fa <= best.value) best = {lo, fa, evals};
  if (fb < best.value) best = {hi, fb, evals};
  return best;
}

RayMin minimize_on_ray(const std::function<double(double)>& f, const RayOptions& opts) {
  std::vector<double> ts{0.0};
  std::vector<double> fs{f(0.0)};
  int evals = 1;
  double t = 1.0;
  bool turned = false;
  for (int k = 0; k <= opts.max_expansions; ++k, t *= opts.growth) {
    const double v = f(t);
    ++evals;
    ts.push_back(t);
    fs.push_back(v);
    if (v <= opts.floor) return {t, v, RayStatus::unbounded, evals};
    if (v >= fs[fs.size() - 2]) {
      turned = true;
      break;
    }
  }

  const std::size_t last = ts.size() - 1;
  if (!turned) {
    // Still decreasing at the largest probe.
    const double slope = (fs[last] - fs[last - 1]) / (ts[last] - ts[last - 1]);
    const double scale = std::max(1.0, std::abs(fs[0]));
    if (slope < -1e-9 * scale) return {ts[last], fs[last], RayStatus::unbounded, evals};
    return {ts[last], fs[last], RayStatus::max_iter, evals};
  }

  const double lo = last >= 2 ? ts[last - 2] : 0.0;
  const double hi = ts[last];
  const double tol = opts.rel_tol * std::max(1.0, hi);
  const ScalarMin g = golden_section(f, lo, hi, tol);
  RayMin out{g.x, g.value, RayStatus::converged, evals + g.evaluations};
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (fs[i] < out.value) {
      out.t = ts[i];
      out.value = fs[i];
    }
  return out;
}

}  // namespace npsl
