#pragma once

#include <functional>

namespace npsl {

struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a unimodal f on [lo, hi]; stops when the bracket
/// is narrower than tol.
ScalarMin golden_section(const std::function<double(double)>& f, double lo, double hi, double tol,
                         int max_iter = 400);

enum class RayStatus { converged, unbounded, max_iter };

struct RayMin {
  double t = 0.0;
  double value = 0.0;
  RayStatus status = RayStatus::converged;
  int evaluations = 0;
};

struct RayOptions {
  double growth = 4.0;
  int max_expansions = 40;
  /// Values below the floor are reported as unbounded.
  double floor = -1e12;
  double rel_tol = 1e-13;
};

/// Minimise a convex f over t >= 0. The bracket [0, 1] is expanded
/// geometrically until f stops decreasing; a ray that keeps decreasing with a
/// slope bounded away from zero is reported as unbounded.
RayMin minimize_on_ray(const std::function<double(double)>& f, const RayOptions& opts = {});

}  // namespace npsl
