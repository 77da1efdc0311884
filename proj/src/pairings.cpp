#include "npsl/pairings.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "npsl/error.hpp"

namespace npsl {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_p(double p) {
  require(p >= 1.0 && !std::isnan(p), ErrorCode::invalid_argument,
          "norm exponent p must lie in [1, inf], got " + std::to_string(p));
}

std::span<const double> view(const Vector& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

}  // namespace

NormSpec::NormSpec(double p) : p_(p) { check_p(p); }

NormSpec::NormSpec(double p, Matrix weight, double max_condition) : p_(p) {
  check_p(p);
  require_square(weight, "NormSpec weight");
  const double rc = rcond_estimate(weight);
  require(rc > 0.0 && 1.0 / rc <= max_condition, ErrorCode::singular,
          "NormSpec: weight is singular or its condition estimate exceeds the cap");
  const bool diag = weight.isDiagonal(0.0);
  diagonal_ = diag && (weight.diagonal().array() > 0.0).all();
  weight_inv_ = diag ? Matrix(weight.diagonal().cwiseInverse().asDiagonal()) : inverse(weight);
  weight_ = std::move(weight);
}

NormSpec NormSpec::diagonal(double p, const Vector& d) {
  require((d.array() > 0.0).all(), ErrorCode::invalid_argument, "NormSpec::diagonal: weights must be positive");
  return NormSpec(p, Matrix(d.asDiagonal()));
}

Vector NormSpec::apply(const Vector& x) const {
  if (!weight_) return x;
  require(x.size() == weight_->cols(), ErrorCode::dimension_mismatch, "NormSpec: vector length mismatch");
  return *weight_ * x;
}

Matrix NormSpec::similarity(const Matrix& a) const {
  if (!weight_) return a;
  require(a.rows() == weight_->rows() && a.cols() == weight_->rows(), ErrorCode::dimension_mismatch,
          "NormSpec: matrix size does not match weight");
  return *weight_ * a * *weight_inv_;
}

double lp_norm(std::span<const double> x, double p) {
  if (p == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  if (p == kInf) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  const double scale = lp_norm(x, kInf);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

double lp_pairing(std::span<const double> x, std::span<const double> y, double p) {
  const std::size_t n = y.size();
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += sign(y[i]) * x[i];
    return lp_norm(y, 1.0) * s;
  }
  if (p == kInf) {
    const double ymax = lp_norm(y, kInf);
    if (ymax == 0.0) return 0.0;
    double best = -kInf;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(y[i]) == ymax) best = std::max(best, x[i] * y[i]);
    return best;
  }
  const double ynorm = lp_norm(y, p);
  if (ynorm == 0.0) return 0.0;
  // ‖y‖^{2-p} Σ sign(y_i)|y_i|^{p-1} x_i, evaluated on y/‖y‖ for range safety.
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += sign(y[i]) * std::pow(std::abs(y[i]) / ynorm, p - 1.0) * x[i];
  return ynorm * s;
}

double vector_norm(const Vector& x, const NormSpec& spec) {
  require_finite(x, "vector_norm");
  const Vector rx = spec.apply(x);
  return lp_norm(view(rx), spec.p());
}

PairingValue weak_pairing(const Vector& x, const Vector& y, const NormSpec& spec) {
  require(x.size() == y.size(), ErrorCode::dimension_mismatch, "weak_pairing: length mismatch");
  const Vector rx = spec.apply(x);
  const Vector ry = spec.apply(y);
  PairingValue out;
  out.value = lp_pairing(view(rx), view(ry), spec.p());
  if (spec.is_inf()) {
    const double ymax = lp_norm(view(ry), kInf);
    if (ymax > 0.0) {
      for (Eigen::Index i = 0; i < ry.size(); ++i)
        if (std::abs(ry(i)) == ymax) out.active_set.push_back(static_cast<int>(i));
    } else {
      for (Eigen::Index i = 0; i < ry.size(); ++i) out.active_set.push_back(static_cast<int>(i));
    }
  }
  return out;
}

namespace {

double mu_one(const Matrix& a, bool conic) {
  double best = -kInf;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double s = a(j, j);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += conic ? std::max(a(i, j), 0.0) : std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double mu_inf(const Matrix& a, bool conic) {
  double best = -kInf;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double s = a(i, i);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) s += conic ? std::max(a(i, j), 0.0) : std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

double log_norm(const Matrix& a, const NormSpec& spec) {
  require_square(a, "log_norm");
  if (!spec.exact_log_norm())
    fail(ErrorCode::approximate_only,
         "log_norm: no closed form for p = " + std::to_string(spec.p()) + "; use log_norm_sampled (approximate)");
  const Matrix m = spec.similarity(a);
  if (spec.is_one()) return mu_one(m, false);
  if (spec.is_inf()) return mu_inf(m, false);
  return lambda_max_sym(m);
}

double conic_log_norm(const Matrix& a, const NormSpec& spec) {
  require_square(a, "conic_log_norm");
  require(spec.is_one() || spec.is_inf(), ErrorCode::unsupported, "conic_log_norm: requires p ∈ {1, ∞}");
  require(!spec.weighted() || spec.diagonal_weight(), ErrorCode::unsupported,
          "conic_log_norm: weight must be positive diagonal (cone-preserving)");
  const Matrix m = spec.similarity(a);
  return spec.is_one() ? mu_one(m, true) : mu_inf(m, true);
}

double operator_norm(const Matrix& a, double p) {
  if (p == 1.0) return a.cwiseAbs().colwise().sum().maxCoeff();
  if (p == kInf) return a.cwiseAbs().rowwise().sum().maxCoeff();
  require(p == 2.0, ErrorCode::approximate_only, "operator_norm: only p ∈ {1, 2, ∞} are supported");
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

namespace {

// Largest eigenvalue of a symmetric matrix by power iteration on a positive
// shift, Rayleigh-quotient stopping.
double power_top_eigenvalue(const Matrix& k, double tol) {
  const Eigen::Index n = k.rows();
  const double shift = k.cwiseAbs().rowwise().sum().maxCoeff();
  const Matrix shifted = k + shift * Matrix::Identity(n, n);
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  // Deterministic perturbation so v is not orthogonal to the top eigenvector.
  for (Eigen::Index i = 0; i < n; ++i) v(i) += 1e-3 * static_cast<double>(i + 1);
  v.normalize();
  double rq = v.dot(shifted * v);
  for (int it = 0; it < 200000; ++it) {
    Vector w = shifted * v;
    const double nw = w.norm();
    if (nw == 0.0) return -shift;
    v = w / nw;
    const double next = v.dot(shifted * v);
    if (std::abs(next - rq) <= tol * std::max(1.0, std::abs(next))) {
      rq = next;
      break;
    }
    rq = next;
  }
  return rq - shift;
}

}  // namespace

double log_norm_limit_estimate(const Matrix& a, const NormSpec& spec, double h) {
  require_square(a, "log_norm_limit_estimate");
  require(h > 0.0, ErrorCode::invalid_argument, "log_norm_limit_estimate: h must be positive");
  const Matrix m = spec.similarity(a);
  const Eigen::Index n = m.rows();
  if (spec.is_two()) {
    // ‖I + hA‖₂² = λ_max((I + hA)ᵀ(I + hA)) = 1 + h·λ_max(A + Aᵀ + h AᵀA).
    const Matrix k = m + m.transpose() + h * m.transpose() * m;
    const double lam = power_top_eigenvalue(k, 1e-12);
    return lam / (std::sqrt(1.0 + h * lam) + 1.0);
  }
  require(spec.is_one() || spec.is_inf(), ErrorCode::approximate_only,
          "log_norm_limit_estimate: operator norm available only for p ∈ {1, 2, ∞}");
  const Matrix step = Matrix::Identity(n, n) + h * m;
  return (operator_norm(step, spec.p()) - 1.0) / h;
}

double log_norm_sampled(const Matrix& a, double p, int n_samples, std::uint64_t seed) {
  require_square(a, "log_norm_sampled");
  require(p > 1.0 && p < kInf, ErrorCode::invalid_argument, "log_norm_sampled: requires p in (1, inf)");
  require(n_samples > 0, ErrorCode::invalid_argument, "log_norm_sampled: n_samples must be positive");
  const Eigen::Index n = a.rows();

  auto objective = [&](const Vector& x) {
    const double nx = lp_norm(view(x), p);
    if (nx == 0.0) return -kInf;
    const Vector ax = a * x;
    return lp_pairing(view(ax), view(x), p) / (nx * nx);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::pair<double, Vector>> pool;
  pool.reserve(static_cast<std::size_t>(n_samples + n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    pool.emplace_back(objective(e), e);
  }
  for (int s = 0; s < n_samples; ++s) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = gauss(rng);
    pool.emplace_back(objective(x), x);
  }
  const std::size_t keep = std::min<std::size_t>(8, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                    [](const auto& l, const auto& r) { return l.first > r.first; });

  double best = pool.front().first;
  for (std::size_t s = 0; s < keep; ++s) {
    Vector x = pool[s].second / lp_norm(view(pool[s].second), p);
    double fx = pool[s].first;
    for (double step = 0.25; step > 1e-10;) {
      bool improved = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (double dir : {1.0, -1.0}) {
          Vector y = x;
          y(i) += dir * step;
          const double fy = objective(y);
          if (fy > fx) {
            x = y / lp_norm(view(y), p);
            fx = fy;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, fx);
  }
  return best;
}

LumerResult lumer_enumeration(const Matrix& a, double p, bool conic) {
  require_square(a, "lumer_enumeration");
  const Eigen::Index n = a.rows();
  LumerResult out;
  out.value = -kInf;

  if (p == 1.0) {
    require(n <= 20, ErrorCode::unsupported, "lumer_enumeration: p = 1 enumeration limited to n <= 20");
    // On the open orthant with sign pattern σ the pairing is σᵀAx, linear on the
    // simplex face; its sup is approached at a vertex e_j with σ_j = +1.
    const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
    Vector sigma(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        Eigen::Index bit = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (i == j) {
            sigma(i) = 1.0;
            continue;
          }
          const bool set = (mask >> bit++) & 1U;
          sigma(i) = conic ? (set ? 1.0 : 0.0) : (set ? 1.0 : -1.0);
        }
        const double value = sigma.dot(a.col(j));
        if (value > out.value) {
          out.value = value;
          out.argmax = Vector::Unit(n, j);
          out.sign_pattern = sigma;
        }
      }
    }
    return out;
  }

  require(p == kInf, ErrorCode::unsupported, "lumer_enumeration: requires p ∈ {1, ∞}");
  const NormSpec spec(kInf);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector x(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = (j == i) ? 1.0 : sign(a(i, j));
      x(j) = conic ? std::max(s, 0.0) : s;
    }
    const double value = weak_pairing(a * x, x, spec).value;
    if (value > out.value) {
      out.value = value;
      out.argmax = x;
    }
  }
  return out;
}

double curve_derivative_residual(std::span<const double> ts, std::span<const Vector> xs, const NormSpec& spec) {
  require(ts.size() == xs.size(), ErrorCode::dimension_mismatch, "curve_derivative_residual: length mismatch");
  require(ts.size() >= 3, ErrorCode::invalid_argument, "curve_derivative_residual: need at least 3 samples");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
    const double dt = ts[k + 1] - ts[k];
    require(dt > 0.0, ErrorCode::invalid_argument, "curve_derivative_residual: ts must be strictly increasing");
    const double n0 = vector_norm(xs[k], spec);
    const double n1 = vector_norm(xs[k + 1], spec);
    const double fd = (n1 * n1 - n0 * n0) / dt;
    const Vector xdot = (xs[k + 1] - xs[k]) / dt;
    worst = std::max(worst, std::abs(fd - 2.0 * weak_pairing(xdot, xs[k], spec).value));
  }
  return worst;
}

}  // namespace npsl
