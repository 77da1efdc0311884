#pragma once

#include <cstdint>
#include <vector>

#include "npsl/pairings.hpp"

namespace npsl {

/// One S-Lemma instance: forms P₀…P_s, levels ρ ∈ ℝ^s, the norm and an optional
/// cone restriction x >= 0.
struct FormFamily {
  std::vector<Matrix> forms;
  Vector rho;
  NormSpec spec;
  bool conic = false;

  Eigen::Index dim() const { return forms.empty() ? 0 : forms.front().rows(); }
  Eigen::Index constraints() const { return static_cast<Eigen::Index>(forms.size()) - 1; }
};

void validate_family(const FormFamily& family);

/// ⟦P x, x⟧ under the family norm.
double two_form(const Matrix& p, const Vector& x, const NormSpec& spec);

/// P(τ) = P₀ − Σ τ_j P_j
Matrix combined_form(const FormFamily& family, const Vector& tau);

/// g(τ) = μ(P(τ)) + τᵀρ, with the conic log norm when the family is conic.
double dual_objective(const FormFamily& family, const Vector& tau);

enum class DualStatus { optimal, unbounded_below, max_iter };
const char* to_string(DualStatus s);

struct DualSolution {
  double beta = 0.0;
  Vector tau;
  int iterations = 0;
  DualStatus status = DualStatus::optimal;
};

struct DualOptions {
  double floor = -1e12;
  int max_cycles = 500;
  double cycle_tol = 1e-12;
};

/// Minimises g over τ >= 0. s = 1: bracketing + golden section on the ray.
/// s > 1: exact epigraph LP for p ∈ {1, ∞}, cyclic coordinate descent for p = 2.
DualSolution solve_dual(const FormFamily& family, const DualOptions& opts = {});

struct PrimalBudget {
  /// Largest n for exact face enumeration when p = 1.
  int exact_max_dim = 8;
  int samples = 2000;
  int polish_starts = 3;
  std::uint64_t seed = 1;
};

struct PrimalEstimate {
  /// −∞ when no feasible point was found (infeasible constraints for exact mode).
  double alpha_lower = -kInf;
  Vector witness;
  bool exact = false;
};

/// sup ⟦P₀x,x⟧ over ‖x‖ = 1, ⟦P_ix,x⟧ <= ρ_i (and x >= 0 when conic).
/// p = 1 with n <= exact_max_dim is exact: the pairing is linear on each
/// relatively open face {sign(x) = σ} of the unit sphere, giving one LP per face.
/// Everything else is sampling plus local polish, a lower bound.
PrimalEstimate primal_oracle(const FormFamily& family, const PrimalBudget& budget = {});

struct WeakDualityReport {
  double alpha_lower = -kInf;
  double beta = 0.0;
  bool ok = false;
  int implication_samples = 0;
  /// max over sampled feasible x of p₀(x) − β‖x‖²
  double implication_excess = -kInf;
  bool alpha_exact = false;
  DualStatus dual_status = DualStatus::optimal;
};

WeakDualityReport weak_duality_check(const FormFamily& family, const PrimalBudget& budget = {});

struct ZeroGapResult {
  double alpha = 0.0;
  double beta = 0.0;
  Vector tau_star;
  Vector witness;
  double gap = 0.0;
  bool gap_within_tolerance = false;
  /// Yakubovich only: |τ*·⟦P₁x*, x*⟧|
  double complementarity_residual = 0.0;
  /// Metzler only: the phase-1 interior slack.
  double interior_slack = 0.0;
};

/// ℓ1 Metzler case: P₀ and −P_i Metzler with strictly feasible constraints.
/// Refuses (ErrorCode::hypothesis) when a hypothesis fails.
ZeroGapResult metzler_zero_gap(const FormFamily& family, double gap_tol = 1e-6);

/// ℓ2, one constraint with a Slater point.
ZeroGapResult yakubovich_zero_gap(const FormFamily& family, double gap_tol = 1e-6);

/// P_j ↦ P_j − ρ_j I, ρ ↦ 0.
FormFamily normalize_rho(const FormFamily& family);

}  // namespace npsl
