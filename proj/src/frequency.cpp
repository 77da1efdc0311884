#include "npsl/frequency.hpp"

#include <cmath>

#include "npsl/error.hpp"

namespace npsl {

double frequency_response_real(const Matrix& a, const Matrix& b, const Matrix& c, double omega) {
  const Eigen::Index d = a.rows();
  // (iωI − A)(x_r + i x_i) = B  ⟺  [[−A, −ωI], [ωI, −A]] [x_r; x_i] = [B; 0]
  Matrix m(2 * d, 2 * d);
  m << -a, -omega * Matrix::Identity(d, d), omega * Matrix::Identity(d, d), -a;
  Vector rhs = Vector::Zero(2 * d);
  rhs.head(d) = b.col(0);
  const Eigen::PartialPivLU<Matrix> lu(m);
  const Vector x = lu.solve(rhs);
  return c.row(0).dot(x.head(d));
}

Vector frequency_response_real(const Matrix& a, const Matrix& b, const Matrix& c, const Vector& omegas,
                               Execution exec) {
  require(b.cols() == 1 && c.rows() == 1, ErrorCode::unsupported, "frequency response: single channel only");
  require(a.rows() == a.cols() && b.rows() == a.rows() && c.cols() == a.rows(), ErrorCode::dimension_mismatch,
          "frequency response: shape mismatch");
  Vector out(omegas.size());
  for_each_index(static_cast<std::size_t>(omegas.size()), exec, [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    out(i) = frequency_response_real(a, b, c, omegas(i));
  });
  return out;
}

Vector frequency_grid(int points, double lo, double hi) {
  require(points >= 2 && lo > 0.0 && hi > lo, ErrorCode::invalid_argument, "frequency_grid: bad range");
  Vector w(points + 1);
  w(0) = 0.0;
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (int k = 0; k < points; ++k) w(k + 1) = std::pow(10.0, l0 + (l1 - l0) * k / (points - 1));
  return w;
}

}  // namespace npsl
