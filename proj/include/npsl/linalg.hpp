#pragma once

#include <Eigen/Dense>

namespace npsl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Throws ErrorCode::invalid_argument on NaN/Inf or an empty matrix.
void require_finite(const Matrix& a, const char* name);
void require_finite(const Vector& x, const char* name);
void require_square(const Matrix& a, const char* name);

/// Diagonal kept, off-diagonal entries replaced by their absolute values.
Matrix metzler_majorant(const Matrix& a);
Matrix abs_entrywise(const Matrix& a);
Matrix hadamard(const Matrix& a, const Matrix& b);
/// (M + Mᵀ)/2
Matrix symmetric_part(const Matrix& m);

/// True iff every off-diagonal entry is >= -tol_struct.
bool is_metzler(const Matrix& a, double tol_struct = 0.0);

/// Strong connectivity of the directed graph i -> j for a_ij != 0, i != j.
bool is_irreducible(const Matrix& a);

/// max Re λ over the spectrum (dense real Schur). Throws no_convergence if the
/// eigensolver does not converge.
double spectral_abscissa(const Matrix& a);

struct PerronPair {
  double lambda = 0.0;
  Vector right;  // M v = λ v, v > 0, ‖v‖₁ = 1
  Vector left;   // wᵀ M = λ wᵀ, w > 0, ‖w‖₁ = 1
  int iterations = 0;
};

struct PerronOptions {
  double residual_tol = 1e-10;
  int max_power_iterations = 200000;
};

/// Dominant eigenpair of an irreducible Metzler matrix. The matrix is shifted
/// to a nonnegative one with a positive diagonal, iterated with Collatz–Wielandt
/// bounds as the stopping rule, and finished by shifted inverse iteration.
PerronPair perron_pair(const Matrix& m, const PerronOptions& opts = {});

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // column k belongs to values(k)
};

/// Full spectral decomposition of a symmetric matrix (asymmetry tolerance 1e-12).
SymmetricEigen eig_sym(const Matrix& s);

/// Largest eigenvalue of the symmetric part of m.
double lambda_max_sym(const Matrix& m);

/// Reciprocal condition estimate in the 1-norm (LU based); 0 for singular input.
double rcond_estimate(const Matrix& a);

Vector solve_linear(const Matrix& a, const Vector& b);
Matrix inverse(const Matrix& a);

}  // namespace npsl
