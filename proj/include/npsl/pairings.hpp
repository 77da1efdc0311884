#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "npsl/linalg.hpp"

namespace npsl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Selects an ℓp norm ‖R x‖_p, its compatible weak pairing and log norm.
/// The weight R is optional; its inverse is cached at construction.
class NormSpec {
 public:
  NormSpec() = default;
  explicit NormSpec(double p);
  NormSpec(double p, Matrix weight, double max_condition = 1e12);

  /// Positive diagonal weight diag(d).
  static NormSpec diagonal(double p, const Vector& d);

  double p() const noexcept { return p_; }
  bool weighted() const noexcept { return weight_.has_value(); }
  bool diagonal_weight() const noexcept { return diagonal_; }
  const Matrix& weight() const { return *weight_; }
  const Matrix& weight_inverse() const { return *weight_inv_; }

  bool is_one() const noexcept { return p_ == 1.0; }
  bool is_two() const noexcept { return p_ == 2.0; }
  bool is_inf() const noexcept { return p_ == kInf; }
  bool exact_log_norm() const noexcept { return is_one() || is_two() || is_inf(); }

  /// R x (x itself when unweighted).
  Vector apply(const Vector& x) const;
  /// R A R⁻¹ (A itself when unweighted).
  Matrix similarity(const Matrix& a) const;
  NormSpec unweighted() const { return NormSpec(p_); }

 private:
  double p_ = 2.0;
  std::optional<Matrix> weight_;
  std::optional<Matrix> weight_inv_;
  bool diagonal_ = false;
};

struct PairingValue {
  double value = 0.0;
  /// I∞(y) for p = ∞ (indices of Ry attaining ‖Ry‖∞); empty otherwise.
  std::vector<int> active_set;
};

double vector_norm(const Vector& x, const NormSpec& spec);

/// ⟦x, y⟧ of the norm's compatible pairing; weighted case is ⟦Rx, Ry⟧_p.
/// sign(0) = 0 throughout.
PairingValue weak_pairing(const Vector& x, const Vector& y, const NormSpec& spec);

/// Unweighted building blocks on contiguous data (no allocation).
double lp_norm(std::span<const double> x, double p);
double lp_pairing(std::span<const double> x, std::span<const double> y, double p);

/// Closed-form log norm for p ∈ {1, 2, ∞}; other p throw approximate_only.
double log_norm(const Matrix& a, const NormSpec& spec);

/// Conic log norm for p ∈ {1, ∞}. Weighted only with a positive diagonal weight.
double conic_log_norm(const Matrix& a, const NormSpec& spec);

/// Induced operator norm for p ∈ {1, 2, ∞} of an unweighted matrix.
double operator_norm(const Matrix& a, double p);

/// One-sided difference quotient (‖I + hA‖ − 1)/h; first-order error O(h‖A‖²).
double log_norm_limit_estimate(const Matrix& a, const NormSpec& spec, double h = 1e-6);

/// Lower bound on μ_p(A), p ∈ (1, ∞), from Lumer's sup over random unit vectors
/// followed by a coordinate-wise local polish. Always approximate.
double log_norm_sampled(const Matrix& a, double p, int n_samples, std::uint64_t seed);

struct LumerResult {
  double value = 0.0;
  /// p = ∞: the maximising vector. p = 1: the vertex e_j the supremum is approached at.
  Vector argmax;
  /// p = 1 only: the sign pattern σ of the approaching direction e_j + εσ.
  Vector sign_pattern;
};

/// Exact sup of ⟦Ax, x⟧ over the unit sphere (or its nonnegative part when conic)
/// by enumeration of the finite candidate set where it is attained, p ∈ {1, ∞}.
LumerResult lumer_enumeration(const Matrix& a, double p, bool conic);

/// max over interior samples of |Δ‖x‖²/Δt − 2⟦Δx/Δt, x⟧| along a sampled curve.
double curve_derivative_residual(std::span<const double> ts, std::span<const Vector> xs,
                                 const NormSpec& spec);

}  // namespace npsl
