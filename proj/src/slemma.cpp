#include "npsl/slemma.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "npsl/error.hpp"
#include "npsl/lp.hpp"
#include "npsl/scalar_min.hpp"

namespace npsl {

const char* to_string(DualStatus s) {
  switch (s) {
    case DualStatus::optimal: return "optimal";
    case DualStatus::unbounded_below: return "unbounded_below";
    case DualStatus::max_iter: return "max_iter";
  }
  return "unknown";
}

void validate_family(const FormFamily& family) {
  require(!family.forms.empty(), ErrorCode::invalid_argument, "form family: at least P0 is required");
  const Eigen::Index n = family.forms.front().rows();
  for (std::size_t i = 0; i < family.forms.size(); ++i) {
    require_square(family.forms[i], "form family");
    require(family.forms[i].rows() == n, ErrorCode::dimension_mismatch,
            "form family: P" + std::to_string(i) + " has a different dimension");
  }
  require(family.rho.size() == family.constraints(), ErrorCode::dimension_mismatch,
          "form family: rho must have one entry per constraint form");
  require_finite(family.rho, "rho");
  if (family.spec.weighted())
    require(family.spec.weight().rows() == n, ErrorCode::dimension_mismatch, "form family: weight size mismatch");
  if (family.conic && family.spec.weighted())
    require(family.spec.diagonal_weight(), ErrorCode::unsupported,
            "conic family: weight must be positive diagonal (cone-preserving)");
}

double two_form(const Matrix& p, const Vector& x, const NormSpec& spec) {
  require(p.rows() == p.cols() && p.cols() == x.size(), ErrorCode::dimension_mismatch, "two_form: shape mismatch");
  return weak_pairing(p * x, x, spec).value;
}

Matrix combined_form(const FormFamily& family, const Vector& tau) {
  require(tau.size() == family.constraints(), ErrorCode::dimension_mismatch, "combined_form: tau length mismatch");
  Matrix m = family.forms.front();
  for (Eigen::Index j = 0; j < tau.size(); ++j) m -= tau(j) * family.forms[static_cast<std::size_t>(j + 1)];
  return m;
}

double dual_objective(const FormFamily& family, const Vector& tau) {
  require(tau.size() == family.constraints(), ErrorCode::dimension_mismatch, "dual_objective: tau length mismatch");
  require((tau.array() >= 0.0).all(), ErrorCode::invalid_argument, "dual_objective: tau must be nonnegative");
  const Matrix m = combined_form(family, tau);
  const double mu = family.conic ? conic_log_norm(m, family.spec) : log_norm(m, family.spec);
  return mu + tau.dot(family.rho);
}

namespace {

// Family with the weight folded into the forms: ⟦P x, x⟧_{p,R} = ⟦R P R⁻¹ x', x'⟧_p, x' = R x.
FormFamily unweighted_view(const FormFamily& family) {
  FormFamily out;
  out.rho = family.rho;
  out.spec = family.spec.unweighted();
  out.conic = family.conic;
  for (const Matrix& p : family.forms) out.forms.push_back(family.spec.similarity(p));
  return out;
}

// Epigraph LP for μ₁ / μ∞ (plain or conic) of P(τ) plus τᵀρ.
DualSolution dual_lp(const FormFamily& family) {
  const FormFamily u = unweighted_view(family);
  const bool rows = u.spec.is_inf();
  std::vector<Matrix> q;
  for (const Matrix& p : u.forms) q.push_back(rows ? Matrix(p.transpose()) : p);

  const Eigen::Index n = u.dim();
  const Eigen::Index s = u.constraints();
  const Eigen::Index n_off = n * (n - 1);
  const Eigen::Index n_var = s + n_off + 2;
  const Eigen::Index t_pos = s + n_off;
  const Eigen::Index n_rows = (family.conic ? 1 : 2) * n_off + n;

  LinearProgram lp;
  lp.objective = Vector::Zero(n_var);
  lp.objective.head(s) = -u.rho;
  lp.objective(t_pos) = -1.0;
  lp.objective(t_pos + 1) = 1.0;
  lp.a_ub = Matrix::Zero(n_rows, n_var);
  lp.b_ub = Vector::Zero(n_rows);

  Eigen::Index row = 0;
  Eigen::Index e = s;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      // e_ij >= m_ij(τ) = q0_ij − Σ τ_k qk_ij
      for (Eigen::Index k = 0; k < s; ++k) lp.a_ub(row, k) = -q[static_cast<std::size_t>(k + 1)](i, j);
      lp.a_ub(row, e) = -1.0;
      lp.b_ub(row) = -q[0](i, j);
      ++row;
      if (!family.conic) {
        for (Eigen::Index k = 0; k < s; ++k) lp.a_ub(row, k) = q[static_cast<std::size_t>(k + 1)](i, j);
        lp.a_ub(row, e) = -1.0;
        lp.b_ub(row) = q[0](i, j);
        ++row;
      }
      // column j sum
      lp.a_ub(n_rows - n + j, e) = 1.0;
      ++e;
    }
    const Eigen::Index col_row = n_rows - n + j;
    for (Eigen::Index k = 0; k < s; ++k) lp.a_ub(col_row, k) = -q[static_cast<std::size_t>(k + 1)](j, j);
    lp.a_ub(col_row, t_pos) = -1.0;
    lp.a_ub(col_row, t_pos + 1) = 1.0;
    lp.b_ub(col_row) = -q[0](j, j);
  }

  const LpSolution sol = solve_lp(lp);
  DualSolution out;
  out.iterations = sol.pivots;
  if (sol.status == LpStatus::unbounded) {
    out.status = DualStatus::unbounded_below;
    out.beta = -kInf;
    out.tau = Vector::Zero(s);
    return out;
  }
  if (sol.status != LpStatus::optimal) fail(ErrorCode::no_convergence, "solve_dual: epigraph LP did not finish");
  out.tau = sol.x.head(s).cwiseMax(0.0);
  out.beta = dual_objective(family, out.tau);
  out.status = DualStatus::optimal;
  return out;
}

DualStatus from_ray(RayStatus r) {
  switch (r) {
    case RayStatus::converged: return DualStatus::optimal;
    case RayStatus::unbounded: return DualStatus::unbounded_below;
    case RayStatus::max_iter: return DualStatus::max_iter;
  }
  return DualStatus::max_iter;
}

}  // namespace

DualSolution solve_dual(const FormFamily& family, const DualOptions& opts) {
  validate_family(family);
  require(family.spec.exact_log_norm(), ErrorCode::approximate_only,
          "solve_dual: requires p ∈ {1, 2, ∞} (exact log norms)");
  const Eigen::Index s = family.constraints();
  DualSolution out;
  out.tau = Vector::Zero(s);
  if (s == 0) {
    out.beta = dual_objective(family, out.tau);
    return out;
  }

  RayOptions ray;
  ray.floor = opts.floor;

  if (s == 1) {
    Vector tau(1);
    const RayMin r = minimize_on_ray(
        [&](double t) {
          tau(0) = t;
          return dual_objective(family, tau);
        },
        ray);
    out.status = from_ray(r.status);
    out.iterations = r.evaluations;
    out.tau(0) = r.t;
    out.beta = out.status == DualStatus::unbounded_below ? -kInf : dual_objective(family, out.tau);
    return out;
  }

  if (!family.spec.is_two()) return dual_lp(family);

  Vector tau = Vector::Zero(s);
  double current = dual_objective(family, tau);
  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    const double start = current;
    for (Eigen::Index k = 0; k < s; ++k) {
      Vector trial = tau;
      const RayMin r = minimize_on_ray(
          [&](double t) {
            trial(k) = t;
            return dual_objective(family, trial);
          },
          ray);
      out.iterations += r.evaluations;
      if (r.status == RayStatus::unbounded) {
        tau(k) = r.t;
        out.tau = tau;
        out.beta = -kInf;
        out.status = DualStatus::unbounded_below;
        return out;
      }
      if (r.value < current) {
        tau(k) = r.t;
        current = r.value;
      }
    }
    if (start - current < opts.cycle_tol) {
      out.tau = tau;
      out.beta = dual_objective(family, tau);
      out.status = DualStatus::optimal;
      return out;
    }
  }
  out.tau = tau;
  out.beta = dual_objective(family, tau);
  out.status = DualStatus::max_iter;
  return out;
}

namespace {

struct Evaluator {
  const FormFamily& fam;  // unweighted view

  double norm(const Vector& x) const { return vector_norm(x, fam.spec); }
  double objective(const Vector& x) const { return two_form(fam.forms[0], x, fam.spec); }
  // max_i (⟦P_i x, x⟧ − ρ_i) for unit x; <= 0 means feasible.
  double violation(const Vector& x) const {
    double worst = -kInf;
    for (Eigen::Index i = 0; i < fam.constraints(); ++i)
      worst = std::max(worst, two_form(fam.forms[static_cast<std::size_t>(i + 1)], x, fam.spec) - fam.rho(i));
    return worst;
  }
};

struct FaceResult {
  double value = -kInf;
  Vector witness;
};

// Exact ℓ1 primal: on {sign(x) = σ, ‖x‖₁ = 1} the 2-forms are σᵀP_i x, linear.
FaceResult primal_faces(const FormFamily& fam) {
  const Eigen::Index n = fam.dim();
  const Eigen::Index s = fam.constraints();
  FaceResult best;
  std::vector<int> sigma(static_cast<std::size_t>(n), 0);
  const int base = fam.conic ? 2 : 3;
  std::uint64_t total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(base);

  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    int first = 0;
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int digit = static_cast<int>(c % static_cast<std::uint64_t>(base));
      c /= static_cast<std::uint64_t>(base);
      sigma[static_cast<std::size_t>(i)] = digit == 2 ? -1 : digit;
      if (digit != 0) {
        support.push_back(i);
        if (first == 0) first = sigma[static_cast<std::size_t>(i)];
      }
    }
    // x and −x give the same value; keep the representative with a leading +1.
    if (first != 1) continue;

    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    Vector sg = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) sg(i) = sigma[static_cast<std::size_t>(i)];
    auto row_of = [&](const Matrix& p) {
      Vector r(k);
      for (Eigen::Index j = 0; j < k; ++j) r(j) = sg.dot(p.col(support[static_cast<std::size_t>(j)])) * sg(support[static_cast<std::size_t>(j)]);
      return r;
    };

    LinearProgram lp;
    lp.objective = row_of(fam.forms[0]);
    lp.a_ub = Matrix(s, k);
    lp.b_ub = fam.rho;
    for (Eigen::Index i = 0; i < s; ++i) lp.a_ub.row(i) = row_of(fam.forms[static_cast<std::size_t>(i + 1)]).transpose();
    lp.a_eq = Matrix::Ones(1, k);
    lp.b_eq = Vector::Ones(1);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal || sol.value <= best.value) continue;

    Vector u = sol.x;
    if (u.minCoeff() <= 1e-12) {
      // Sup over the open face equals the LP value iff the open face meets the constraints.
      LinearProgram inner;
      inner.objective = Vector::Zero(k + 1);
      inner.objective(k) = 1.0;
      inner.a_ub = Matrix::Zero(s + k, k + 1);
      inner.b_ub = Vector::Zero(s + k);
      inner.a_ub.topLeftCorner(s, k) = lp.a_ub;
      inner.b_ub.head(s) = fam.rho;
      for (Eigen::Index j = 0; j < k; ++j) {
        inner.a_ub(s + j, j) = -1.0;
        inner.a_ub(s + j, k) = 1.0;
      }
      inner.a_eq = Matrix::Zero(1, k + 1);
      inner.a_eq.leftCols(k).setOnes();
      inner.b_eq = Vector::Ones(1);
      const LpSolution in = solve_lp(inner);
      if (in.status == LpStatus::unbounded) continue;  // cannot happen: t <= 1/k
      if (in.status != LpStatus::optimal || in.x(k) <= 1e-10) continue;
      const double eta = 1e-10;
      u = (1.0 - eta) * u + eta * in.x.head(k);
    }
    best.value = sol.value;
    best.witness = Vector::Zero(n);
    for (Eigen::Index j = 0; j < k; ++j)
      best.witness(support[static_cast<std::size_t>(j)]) = sg(support[static_cast<std::size_t>(j)]) * u(j);
  }
  return best;
}

// ℓ2 polish on the unit sphere: log-barrier gradient ascent, then Newton on the
// KKT system of the nearly active constraints. Returns only feasible points.
FaceResult polish_smooth(const FormFamily& fam, const Vector& start) {
  const Eigen::Index n = fam.dim();
  const Eigen::Index s = fam.constraints();
  const Matrix s0 = symmetric_part(fam.forms[0]);
  std::vector<Matrix> f;
  for (Eigen::Index i = 0; i < s; ++i)
    f.push_back(symmetric_part(fam.forms[static_cast<std::size_t>(i + 1)]) - fam.rho(i) * Matrix::Identity(n, n));
  auto g = [&](Eigen::Index i, const Vector& x) { return x.dot(f[static_cast<std::size_t>(i)] * x); };
  auto feasible = [&](const Vector& x) {
    for (Eigen::Index i = 0; i < s; ++i)
      if (g(i, x) > 0.0) return false;
    return true;
  };
  FaceResult best;
  Vector x = start.normalized();
  for (Eigen::Index i = 0; i < s; ++i)
    if (!(g(i, x) < 0.0)) return best;
  best.value = x.dot(s0 * x);
  best.witness = x;

  auto phi = [&](const Vector& y, double mu) {
    double v = y.dot(s0 * y);
    for (Eigen::Index i = 0; i < s; ++i) {
      const double gi = g(i, y);
      if (!(gi < 0.0)) return -kInf;
      v += mu * std::log(-gi);
    }
    return v;
  };
  for (double mu = 1e-1; mu >= 1e-9; mu *= 0.1) {
    double step = 1.0;
    for (int it = 0; it < 400; ++it) {
      Vector grad = 2.0 * s0 * x;
      for (Eigen::Index i = 0; i < s; ++i) grad += mu * 2.0 * (f[static_cast<std::size_t>(i)] * x) / g(i, x);
      grad -= grad.dot(x) * x;  // tangent component
      if (grad.norm() < 1e-12) break;
      const double base = phi(x, mu);
      bool moved = false;
      for (step = std::min(1.0, 4.0 * step); step > 1e-16; step *= 0.5) {
        const Vector y = (x + step * grad).normalized();
        if (phi(y, mu) >= base + 1e-4 * step * grad.squaredNorm()) {
          x = y;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    const double v = x.dot(s0 * x);
    if (feasible(x) && v > best.value) {
      best.value = v;
      best.witness = x;
    }
  }

  std::vector<Eigen::Index> act;
  for (Eigen::Index i = 0; i < s; ++i)
    if (g(i, x) > -1e-3 * std::max(1.0, f[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff())) act.push_back(i);
  const auto a = static_cast<Eigen::Index>(act.size());
  if (a == 0 || a >= n) return best;
  Matrix fx(n, a);
  for (Eigen::Index k = 0; k < a; ++k) fx.col(k) = f[static_cast<std::size_t>(act[static_cast<std::size_t>(k)])] * x;
  Matrix lhs(n, a + 1);
  lhs << fx, x;
  Vector mult = lhs.colPivHouseholderQr().solve(s0 * x);
  Vector y = x;
  for (int it = 0; it < 40; ++it) {
    Matrix lag = s0 - mult(a) * Matrix::Identity(n, n);
    for (Eigen::Index k = 0; k < a; ++k) lag -= mult(k) * f[static_cast<std::size_t>(act[static_cast<std::size_t>(k)])];
    Vector r(n + a + 1);
    r.head(n) = lag * y;
    for (Eigen::Index k = 0; k < a; ++k) r(n + k) = 0.5 * g(act[static_cast<std::size_t>(k)], y);
    r(n + a) = 0.5 * (y.squaredNorm() - 1.0);
    if (r.norm() < 1e-14) break;
    Matrix jac = Matrix::Zero(n + a + 1, n + a + 1);
    jac.topLeftCorner(n, n) = lag;
    for (Eigen::Index k = 0; k < a; ++k) {
      const Vector fk = f[static_cast<std::size_t>(act[static_cast<std::size_t>(k)])] * y;
      jac.block(0, n + k, n, 1) = -fk;
      jac.block(n + k, 0, 1, n) = fk.transpose();
    }
    jac.block(0, n + a, n, 1) = -y;
    jac.block(n + a, 0, 1, n) = y.transpose();
    const Vector delta = jac.fullPivLu().solve(-r);
    if (!delta.allFinite()) break;
    y += delta.head(n);
    mult += delta.tail(a + 1);
  }
  y.normalize();
  // Newton lands on the constraint surface up to rounding; nudge toward the
  // barrier point (strictly feasible) until every constraint holds.
  for (double eta = 0.0; eta <= 1.0; eta = eta == 0.0 ? 1e-12 : eta * 4.0) {
    const Vector z = ((1.0 - eta) * y + eta * x).normalized();
    if (feasible(z)) {
      const double v = z.dot(s0 * z);
      if (v > best.value) {
        best.value = v;
        best.witness = z;
      }
      break;
    }
  }
  return best;
}

FaceResult primal_sampled(const FormFamily& fam, const PrimalBudget& budget) {
  const Evaluator ev{fam};
  const Eigen::Index n = fam.dim();
  std::mt19937_64 rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto unit = [&](Vector x) {
    if (fam.conic) x = x.cwiseAbs();
    const double nx = ev.norm(x);
    return nx > 0.0 ? Vector(x / nx) : x;
  };

  std::vector<Vector> candidates;
  for (Eigen::Index i = 0; i < n; ++i) {
    candidates.push_back(Vector::Unit(n, i));
    if (!fam.conic) candidates.push_back(-Vector::Unit(n, i));
  }
  if (fam.spec.is_two()) {
    const SymmetricEigen e = eig_sym(symmetric_part(fam.forms[0]));
    for (Eigen::Index k = 0; k < n; ++k) candidates.push_back(e.vectors.col(k));
  }
  if ((fam.spec.is_one() || fam.spec.is_inf()) && !fam.conic)
    candidates.push_back(lumer_enumeration(fam.forms[0], fam.spec.p(), false).argmax);
  for (int t = 0; t < budget.samples; ++t) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = gauss(rng);
    candidates.push_back(x);
  }

  std::vector<std::pair<double, Vector>> feasible;
  Vector anchor;
  double anchor_violation = 0.0;
  for (Vector& c : candidates) {
    const Vector x = unit(c);
    if (ev.norm(x) == 0.0) continue;
    const double v = fam.constraints() > 0 ? ev.violation(x) : -kInf;
    if (v <= 0.0) feasible.emplace_back(ev.objective(x), x);
    if (v < anchor_violation) {
      anchor_violation = v;
      anchor = x;
    }
  }
  FaceResult best;
  if (feasible.empty()) return best;

  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(budget.polish_starts, 1)), feasible.size());
  std::partial_sort(feasible.begin(), feasible.begin() + static_cast<std::ptrdiff_t>(keep), feasible.end(),
                    [](const auto& l, const auto& r) { return l.first > r.first; });
  best.value = feasible.front().first;
  best.witness = feasible.front().second;

  // Moves that leave the feasible set are pulled back toward the strictly
  // feasible anchor by bisection, which lets the search slide along an active constraint.
  auto restore = [&](const Vector& y) -> std::optional<Vector> {
    if (fam.constraints() == 0 || ev.violation(y) <= 0.0) return y;
    if (anchor.size() == 0) return std::nullopt;
    double lo = 0.0, hi = 1.0;  // weight on the anchor; hi is feasible
    for (int b = 0; b < 30; ++b) {
      const double mid = 0.5 * (lo + hi);
      const Vector z = unit((1.0 - mid) * y + mid * anchor);
      if (ev.violation(z) <= 0.0) hi = mid;
      else lo = mid;
    }
    const Vector z = unit((1.0 - hi) * y + hi * anchor);
    if (ev.violation(z) > 0.0) return std::nullopt;
    return z;
  };

  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (std::size_t sidx = 0; sidx < keep; ++sidx) {
    Vector x = feasible[sidx].second;
    double fx = feasible[sidx].first;
    int rounds = 0;
    for (double step = 0.25; step > 1e-9 && rounds < 4000; ++rounds) {
      bool improved = false;
      std::vector<Vector> dirs;
      for (Eigen::Index i = 0; i < n; ++i) {
        dirs.push_back(Vector::Unit(n, i));
        dirs.push_back(-Vector::Unit(n, i));
      }
      for (int r = 0; r < 2; ++r) {
        Vector d(n);
        for (Eigen::Index i = 0; i < n; ++i) d(i) = uni(rng);
        dirs.push_back(d / d.norm());
      }
      for (const Vector& d : dirs) {
        const Vector y = unit(x + step * d);
        if (ev.norm(y) == 0.0) continue;
        const auto z = restore(y);
        if (!z) continue;
        const double fz = ev.objective(*z);
        if (fz > fx) {
          x = *z;
          fx = fz;
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
    if (fx > best.value) {
      best.value = fx;
      best.witness = x;
    }
    if (fam.spec.is_two() && !fam.conic && fam.constraints() > 0) {
      // The compass point may sit on the boundary; start the barrier from the
      // strictly feasible side.
      Vector start = feasible[sidx].second;
      if (ev.violation(start) >= 0.0 && anchor.size() > 0) start = unit(0.5 * start + 0.5 * anchor);
      const FaceResult sm = polish_smooth(fam, start);
      if (sm.value > best.value) best = sm;
    }
  }
  return best;
}

}  // namespace

PrimalEstimate primal_oracle(const FormFamily& family, const PrimalBudget& budget) {
  validate_family(family);
  const FormFamily fam = unweighted_view(family);
  const Eigen::Index n = fam.dim();
  PrimalEstimate out;

  FaceResult r;
  if (fam.spec.is_one() && n <= budget.exact_max_dim) {
    r = primal_faces(fam);
    out.exact = true;
  } else if (fam.constraints() == 0 && !fam.conic && (fam.spec.is_two() || fam.spec.is_inf())) {
    // Lumer's equality: the unconstrained sup is the log norm, attained here.
    if (fam.spec.is_two()) {
      const SymmetricEigen e = eig_sym(symmetric_part(fam.forms[0]));
      r.witness = e.vectors.col(0);
    } else {
      r.witness = lumer_enumeration(fam.forms[0], kInf, false).argmax;
    }
    r.value = two_form(fam.forms[0], r.witness, fam.spec);
    out.exact = true;
  } else {
    r = primal_sampled(fam, budget);
  }

  out.alpha_lower = r.value;
  if (r.witness.size() > 0) {
    out.witness = family.spec.weighted() ? Vector(family.spec.weight_inverse() * r.witness) : r.witness;
    const double nw = vector_norm(out.witness, family.spec);
    out.witness /= nw;
    if (!out.exact) out.alpha_lower = two_form(family.forms[0], out.witness, family.spec);
  }
  return out;
}

WeakDualityReport weak_duality_check(const FormFamily& family, const PrimalBudget& budget) {
  WeakDualityReport rep;
  const PrimalEstimate primal = primal_oracle(family, budget);
  const DualSolution dual = solve_dual(family);
  rep.alpha_lower = primal.alpha_lower;
  rep.alpha_exact = primal.exact;
  rep.beta = dual.beta;
  rep.dual_status = dual.status;
  rep.ok = rep.alpha_lower <= rep.beta + 1e-7;

  // Implication form: every feasible x satisfies p₀(x) <= β‖x‖².
  const Eigen::Index n = family.dim();
  std::mt19937_64 rng(budget.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < budget.samples; ++t) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = gauss(rng);
    if (family.conic) x = x.cwiseAbs();
    const double nx = vector_norm(x, family.spec);
    if (nx == 0.0) continue;
    x /= nx;
    bool feasible = true;
    for (Eigen::Index i = 0; i < family.constraints() && feasible; ++i)
      feasible = two_form(family.forms[static_cast<std::size_t>(i + 1)], x, family.spec) <= family.rho(i);
    if (!feasible) continue;
    ++rep.implication_samples;
    rep.implication_excess = std::max(rep.implication_excess, two_form(family.forms[0], x, family.spec) - rep.beta);
  }
  if (rep.implication_excess > 1e-7) rep.ok = false;
  return rep;
}

ZeroGapResult metzler_zero_gap(const FormFamily& family, double gap_tol) {
  validate_family(family);
  require(family.spec.is_one() && !family.spec.weighted(), ErrorCode::hypothesis,
          "Metzler zero-gap case requires the unweighted ℓ1 norm (p = 1)");
  require(is_metzler(family.forms[0]), ErrorCode::hypothesis, "Metzler zero-gap case requires P₀ Metzler");
  for (std::size_t i = 1; i < family.forms.size(); ++i)
    require(is_metzler(-family.forms[i]), ErrorCode::hypothesis,
            "Metzler zero-gap case requires −P_i Metzler for every constraint (fails for i = " + std::to_string(i) + ")");

  const Eigen::Index n = family.dim();
  const Eigen::Index s = family.constraints();
  Matrix col_sums(s, n);
  for (Eigen::Index i = 0; i < s; ++i) col_sums.row(i) = family.forms[static_cast<std::size_t>(i + 1)].colwise().sum();

  // Phase 1: maximise t with x_k >= t, 1ᵀx = 1, 1ᵀP_i x + t <= ρ_i.
  LinearProgram p1;
  p1.objective = Vector::Zero(n + 1);
  p1.objective(n) = 1.0;
  p1.a_ub = Matrix::Zero(s + n, n + 1);
  p1.b_ub = Vector::Zero(s + n);
  p1.a_ub.topLeftCorner(s, n) = col_sums;
  p1.a_ub.block(0, n, s, 1).setOnes();
  p1.b_ub.head(s) = family.rho;
  for (Eigen::Index k = 0; k < n; ++k) {
    p1.a_ub(s + k, k) = -1.0;
    p1.a_ub(s + k, n) = 1.0;
  }
  p1.a_eq = Matrix::Zero(1, n + 1);
  p1.a_eq.leftCols(n).setOnes();
  p1.b_eq = Vector::Ones(1);
  const LpSolution phase1 = solve_lp(p1);
  const double slack = phase1.status == LpStatus::optimal ? phase1.x(n) : -kInf;
  require(slack >= 1e-8, ErrorCode::hypothesis,
          "Metzler zero-gap case requires strictly feasible constraints: ‖x‖₁=1, x>0, ⟦P_ix,x⟧₁<ρ_i");

  LinearProgram lp;
  lp.objective = family.forms[0].colwise().sum().transpose();
  lp.a_ub = col_sums;
  lp.b_ub = family.rho;
  lp.a_eq = Matrix::Ones(1, n);
  lp.b_eq = Vector::Ones(1);
  const LpSolution primal = solve_lp(lp);
  require(primal.status == LpStatus::optimal, ErrorCode::no_convergence, "metzler_zero_gap: primal LP did not solve");

  FormFamily conic = family;
  conic.conic = true;
  const DualSolution dual = solve_dual(conic);

  ZeroGapResult out;
  out.alpha = primal.value;
  out.witness = primal.x;
  out.beta = dual.beta;
  out.tau_star = dual.tau;
  out.interior_slack = slack;
  out.gap = out.beta - out.alpha;
  out.gap_within_tolerance = dual.status == DualStatus::optimal && std::abs(out.gap) <= gap_tol;
  return out;
}

ZeroGapResult yakubovich_zero_gap(const FormFamily& family, double gap_tol) {
  validate_family(family);
  require(family.spec.is_two(), ErrorCode::hypothesis, "Yakubovich S-Lemma requires the ℓ2 norm (p = 2)");
  require(family.constraints() == 1, ErrorCode::hypothesis, "Yakubovich S-Lemma requires exactly one constraint (s = 1)");

  const FormFamily fam = unweighted_view(family);
  const Eigen::Index n = fam.dim();
  const Matrix q0 = symmetric_part(fam.forms[0]);
  const Matrix q1 = symmetric_part(fam.forms[1]) - fam.rho(0) * Matrix::Identity(n, n);
  const SymmetricEigen e1 = eig_sym(q1);
  const double scale = std::max({1.0, q0.cwiseAbs().maxCoeff(), q1.cwiseAbs().maxCoeff()});
  require(e1.values(n - 1) < -1e-10 * scale, ErrorCode::hypothesis,
          "Yakubovich S-Lemma requires a Slater point: ∃x with ⟦P₁x,x⟧ < ρ₁‖x‖²");

  const DualSolution dual = solve_dual(family);
  require(dual.status == DualStatus::optimal, ErrorCode::no_convergence, "yakubovich_zero_gap: dual did not converge");
  const double tau = dual.tau(0);

  // Primal maximiser from the top eigenspace of P₀ − τ*P₁ (ρ folded in).
  const SymmetricEigen top = eig_sym(q0 - tau * q1);
  const double delta = 1e-7 * scale;
  Eigen::Index k = 1;
  while (k < n && top.values(0) - top.values(k) <= delta) ++k;
  const Matrix v = top.vectors.leftCols(k);
  const SymmetricEigen ek = eig_sym(symmetric_part(v.transpose() * q1 * v));
  const double kmax = ek.values(0);
  const double kmin = ek.values(k - 1);
  Vector y;
  if (kmin >= 0.0 && kmin <= 1e-12 * scale) {
    y = ek.vectors.col(k - 1);
  } else if (tau > 0.0 && kmin < 0.0 && kmax > 0.0) {
    // Mix the extreme directions so that yᵀKy = 0 (complementarity).
    const double s2 = -kmin / (kmax - kmin);
    y = std::sqrt(1.0 - s2) * ek.vectors.col(k - 1) + std::sqrt(s2) * ek.vectors.col(0);
  } else {
    y = ek.vectors.col(k - 1);
  }
  Vector x = v * y;
  x.normalize();

  ZeroGapResult out;
  out.beta = dual.beta;
  out.tau_star = dual.tau;
  out.alpha = x.dot(q0 * x);
  const double constraint = x.dot(q1 * x);
  out.complementarity_residual = std::abs(tau * constraint);
  out.witness = family.spec.weighted() ? Vector(family.spec.weight_inverse() * x) : x;
  out.witness /= vector_norm(out.witness, family.spec);
  out.gap = out.beta - out.alpha;
  out.gap_within_tolerance = constraint <= 1e-9 * scale && std::abs(out.gap) <= gap_tol;
  return out;
}

FormFamily normalize_rho(const FormFamily& family) {
  validate_family(family);
  FormFamily out = family;
  const Eigen::Index n = family.dim();
  for (Eigen::Index j = 0; j < family.constraints(); ++j)
    out.forms[static_cast<std::size_t>(j + 1)] -= family.rho(j) * Matrix::Identity(n, n);
  out.rho.setZero();
  return out;
}

}  // namespace npsl
