#include "npsl/lp.hpp"

#include <cmath>
#include <vector>

#include "npsl/error.hpp"

namespace npsl {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Matrix::Zero(rows, cols + 1)), basis_(static_cast<std::size_t>(rows), -1) {}

  double& at(Eigen::Index i, Eigen::Index j) { return t_(i, j); }
  double& rhs(Eigen::Index i) { return t_(i, t_.cols() - 1); }
  double rhs(Eigen::Index i) const { return t_(i, t_.cols() - 1); }
  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols() - 1; }
  int& basic(Eigen::Index i) { return basis_[static_cast<std::size_t>(i)]; }
  int basic(Eigen::Index i) const { return basis_[static_cast<std::size_t>(i)]; }
  double entry(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

enum class PhaseResult { optimal, unbounded, limit };

// Maximises Σ cost_j x_j over columns with allowed[j]; Bland's rule.
PhaseResult run_phase(Tableau& tab, const Vector& cost, const std::vector<bool>& allowed, const LpOptions& opts,
                      int& pivots) {
  const Eigen::Index m = tab.rows();
  const Eigen::Index n = tab.cols();
  while (true) {
    if (pivots >= opts.max_pivots) return PhaseResult::limit;
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < n && entering < 0; ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      double reduced = cost(j);
      for (Eigen::Index i = 0; i < m; ++i) reduced -= cost(tab.basic(i)) * tab.entry(i, j);
      if (reduced > opts.cost_tol) entering = j;
    }
    if (entering < 0) return PhaseResult::optimal;

    Eigen::Index leaving = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = tab.entry(i, entering);
      if (a <= opts.pivot_tol) continue;
      const double ratio = tab.rhs(i) / a;
      if (leaving < 0 || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && tab.basic(i) < tab.basic(leaving))) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving < 0) return PhaseResult::unbounded;
    tab.pivot(leaving, entering);
    ++pivots;
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  const Eigen::Index n = lp.objective.size();
  const Eigen::Index m_ub = lp.a_ub.rows();
  const Eigen::Index m_eq = lp.a_eq.rows();
  require(n > 0, ErrorCode::invalid_argument, "solve_lp: empty objective");
  require(m_ub == 0 || (lp.a_ub.cols() == n && lp.b_ub.size() == m_ub), ErrorCode::dimension_mismatch,
          "solve_lp: inequality block shape mismatch");
  require(m_eq == 0 || (lp.a_eq.cols() == n && lp.b_eq.size() == m_eq), ErrorCode::dimension_mismatch,
          "solve_lp: equality block shape mismatch");

  const Eigen::Index m = m_ub + m_eq;
  // Rows needing an artificial: negative-rhs inequalities and all equalities.
  std::vector<bool> needs_art(static_cast<std::size_t>(m), false);
  Eigen::Index n_art = 0;
  for (Eigen::Index i = 0; i < m_ub; ++i)
    if (lp.b_ub(i) < 0.0) needs_art[static_cast<std::size_t>(i)] = true;
  for (Eigen::Index i = 0; i < m_eq; ++i) needs_art[static_cast<std::size_t>(m_ub + i)] = true;
  for (bool b : needs_art) n_art += b ? 1 : 0;

  const Eigen::Index slack0 = n;
  const Eigen::Index art0 = n + m_ub;
  const Eigen::Index total = art0 + n_art;
  Tableau tab(m, total);

  Eigen::Index next_art = art0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool is_ub = i < m_ub;
    const double b = is_ub ? lp.b_ub(i) : lp.b_eq(i - m_ub);
    const double flip = b < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) tab.at(i, j) = flip * (is_ub ? lp.a_ub(i, j) : lp.a_eq(i - m_ub, j));
    if (is_ub) tab.at(i, slack0 + i) = flip;
    tab.rhs(i) = flip * b;
    if (needs_art[static_cast<std::size_t>(i)]) {
      tab.at(i, next_art) = 1.0;
      tab.basic(i) = static_cast<int>(next_art++);
    } else {
      tab.basic(i) = static_cast<int>(slack0 + i);
    }
  }

  LpSolution out;
  int pivots = 0;

  if (n_art > 0) {
    Vector phase1 = Vector::Zero(total);
    phase1.segment(art0, n_art).setConstant(-1.0);
    std::vector<bool> allowed(static_cast<std::size_t>(total), true);
    const PhaseResult r = run_phase(tab, phase1, allowed, opts, pivots);
    if (r == PhaseResult::limit) {
      out.status = LpStatus::iteration_limit;
      out.pivots = pivots;
      return out;
    }
    double infeas = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (tab.basic(i) >= art0) infeas += tab.rhs(i);
    if (infeas > opts.feasibility_tol) {
      out.status = LpStatus::infeasible;
      out.pivots = pivots;
      return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basic(i) < art0) continue;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (std::abs(tab.entry(i, j)) > 1e-9) {
          tab.pivot(i, j);
          ++pivots;
          break;
        }
      }
    }
  }

  Vector cost = Vector::Zero(total);
  cost.head(n) = lp.objective;
  std::vector<bool> allowed(static_cast<std::size_t>(total), true);
  for (Eigen::Index j = art0; j < total; ++j) allowed[static_cast<std::size_t>(j)] = false;
  const PhaseResult r = run_phase(tab, cost, allowed, opts, pivots);
  out.pivots = pivots;
  if (r == PhaseResult::limit) {
    out.status = LpStatus::iteration_limit;
    return out;
  }
  if (r == PhaseResult::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (tab.basic(i) < n) out.x(tab.basic(i)) = std::max(0.0, tab.rhs(i));
  out.value = lp.objective.dot(out.x);
  out.status = LpStatus::optimal;
  return out;
}

}  // namespace npsl
