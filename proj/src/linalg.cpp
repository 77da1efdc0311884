#include "npsl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "npsl/error.hpp"

namespace npsl {

void require_finite(const Matrix& a, const char* name) {
  require(a.size() > 0, ErrorCode::invalid_argument, std::string(name) + ": empty matrix");
  require(a.allFinite(), ErrorCode::invalid_argument, std::string(name) + ": non-finite entry");
}

void require_finite(const Vector& x, const char* name) {
  require(x.allFinite(), ErrorCode::invalid_argument, std::string(name) + ": non-finite entry");
}

void require_square(const Matrix& a, const char* name) {
  require_finite(a, name);
  require(a.rows() == a.cols(), ErrorCode::dimension_mismatch,
          std::string(name) + ": matrix must be square, got " + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()));
}

Matrix metzler_majorant(const Matrix& a) {
  require_square(a, "metzler_majorant");
  Matrix out = a.cwiseAbs();
  out.diagonal() = a.diagonal();
  return out;
}

Matrix abs_entrywise(const Matrix& a) { return a.cwiseAbs(); }

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::dimension_mismatch,
          "hadamard: shape mismatch");
  return a.cwiseProduct(b);
}

Matrix symmetric_part(const Matrix& m) {
  require_square(m, "symmetric_part");
  return 0.5 * (m + m.transpose());
}

bool is_metzler(const Matrix& a, double tol_struct) {
  require_square(a, "is_metzler");
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j && a(i, j) < -tol_struct) return false;
  return true;
}

namespace {

std::vector<bool> reachable_from_zero(const Matrix& a, bool transpose) {
  const Eigen::Index n = a.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Eigen::Index> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    const Eigen::Index i = frontier.front();
    frontier.pop();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double entry = transpose ? a(j, i) : a(i, j);
      if (j != i && entry != 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        frontier.push(j);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_irreducible(const Matrix& a) {
  require_square(a, "is_irreducible");
  if (a.rows() == 1) return true;
  const auto fwd = reachable_from_zero(a, false);
  const auto bwd = reachable_from_zero(a, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

double spectral_abscissa(const Matrix& a) {
  require_square(a, "spectral_abscissa");
  if (a.rows() == 1) return a(0, 0);
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::no_convergence, "spectral_abscissa: eigensolver did not converge");
  return solver.eigenvalues().real().maxCoeff();
}

namespace {

struct CollatzBounds {
  double lo;
  double hi;
};

CollatzBounds collatz_bounds(const Vector& image, const Vector& v) {
  CollatzBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = image(i) / v(i);
    b.lo = std::min(b.lo, r);
    b.hi = std::max(b.hi, r);
  }
  return b;
}

struct DominantVector {
  double lambda;
  Vector v;
  int iterations;
};

// Dominant positive eigenvector of an irreducible Metzler matrix.
DominantVector dominant_positive_vector(const Matrix& m, const PerronOptions& opts) {
  const Eigen::Index n = m.rows();
  const double shift = m.diagonal().cwiseAbs().maxCoeff() + 1.0;
  const Matrix shifted = m + shift * Matrix::Identity(n, n);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());

  Vector v = Vector::Constant(n, 1.0 / static_cast<double>(n));
  CollatzBounds bounds{0.0, 0.0};
  int it = 0;
  for (; it < opts.max_power_iterations; ++it) {
    const Vector image = shifted * v;
    bounds = collatz_bounds(image, v);
    v = image / image.sum();
    if (bounds.hi - bounds.lo <= 1e-9 * scale) break;
  }
  if (it == opts.max_power_iterations)
    fail(ErrorCode::no_convergence, "perron_pair: power iteration did not converge");

  // Shifted inverse iteration; (σI - M)^{-1} is positive for σ above the Perron root.
  double lambda = 0.5 * (bounds.lo + bounds.hi) - shift;
  double upper = bounds.hi - shift;
  for (int refine = 0; refine < 60; ++refine, ++it) {
    const double gap = std::max(upper - lambda, 1e-10 * scale);
    const double sigma = upper + gap;
    const Matrix resolvent = sigma * Matrix::Identity(n, n) - m;
    Vector next = resolvent.partialPivLu().solve(v);
    if (!(next.array() > 0.0).all()) break;
    next /= next.sum();
    const CollatzBounds b = collatz_bounds(shifted * next, next);
    v = next;
    lambda = 0.5 * (b.lo + b.hi) - shift;
    upper = b.hi - shift;
    if (b.hi - b.lo <= 1e-14 * scale) break;
  }
  return {lambda, v, it};
}

}  // namespace

PerronPair perron_pair(const Matrix& m, const PerronOptions& opts) {
  require_square(m, "perron_pair");
  require(is_metzler(m), ErrorCode::invalid_argument, "perron_pair: matrix is not Metzler");
  require(is_irreducible(m), ErrorCode::hypothesis,
          "perron_pair: matrix is reducible (positive Perron vectors not guaranteed)");

  const DominantVector right = dominant_positive_vector(m, opts);
  const DominantVector left = dominant_positive_vector(m.transpose(), opts);

  PerronPair out;
  out.lambda = right.lambda;
  out.right = right.v;
  out.left = left.v;
  out.iterations = right.iterations + left.iterations;

  const double res_r = (m * out.right - out.lambda * out.right).cwiseAbs().maxCoeff();
  const double res_l = (m.transpose() * out.left - out.lambda * out.left).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (res_r > opts.residual_tol * scale || res_l > opts.residual_tol * scale)
    fail(ErrorCode::no_convergence, "perron_pair: eigen-residual above tolerance");
  return out;
}

SymmetricEigen eig_sym(const Matrix& s) {
  require_square(s, "eig_sym");
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff()), ErrorCode::invalid_argument,
          "eig_sym: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::no_convergence, "eig_sym: eigensolver did not converge");
  const Eigen::Index n = s.rows();
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

double lambda_max_sym(const Matrix& m) {
  require_square(m, "lambda_max_sym");
  const Matrix sym = 0.5 * (m + m.transpose());
  if (sym.rows() == 1) return sym(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::no_convergence, "lambda_max_sym: eigensolver did not converge");
  return solver.eigenvalues().maxCoeff();
}

double rcond_estimate(const Matrix& a) {
  require_square(a, "rcond_estimate");
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) return 0.0;
  return a.partialPivLu().rcond();
}

Vector solve_linear(const Matrix& a, const Vector& b) {
  require_square(a, "solve_linear");
  require(b.size() == a.rows(), ErrorCode::dimension_mismatch, "solve_linear: rhs length mismatch");
  Eigen::FullPivLU<Matrix> lu(a);
  require(lu.isInvertible(), ErrorCode::singular, "solve_linear: matrix is singular to working precision");
  const Vector x = lu.solve(b);
  const double bnorm = b.cwiseAbs().maxCoeff();
  const double residual = (a * x - b).cwiseAbs().maxCoeff();
  require(residual <= 1e-9 * std::max(bnorm, 1e-300) || residual == 0.0, ErrorCode::singular,
          "solve_linear: residual above 1e-9 relative (ill-conditioned system)");
  return x;
}

Matrix inverse(const Matrix& a) {
  require_square(a, "inverse");
  Eigen::FullPivLU<Matrix> lu(a);
  require(lu.isInvertible(), ErrorCode::singular, "inverse: matrix is singular to working precision");
  return lu.inverse();
}

}  // namespace npsl
