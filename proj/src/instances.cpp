#include "npsl/instances.hpp"

#include "npsl/error.hpp"

namespace npsl {

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

double uniform(double lo, double hi, Rng& rng) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

FormFamily random_family(double p, Eigen::Index n, Eigen::Index s, Rng& rng, bool conic) {
  FormFamily f;
  f.spec = NormSpec(p);
  f.conic = conic;
  for (Eigen::Index i = 0; i <= s; ++i) f.forms.push_back(random_gaussian(n, n, rng));
  Vector x = random_gaussian(n, 1, rng);
  if (conic) x = x.cwiseAbs();
  x /= vector_norm(x, f.spec);
  f.rho.resize(s);
  for (Eigen::Index i = 0; i < s; ++i)
    f.rho(i) = two_form(f.forms[static_cast<std::size_t>(i + 1)], x, f.spec) + uniform(0.01, 1.0, rng);
  return f;
}

FormFamily random_metzler_family(Eigen::Index n, Eigen::Index s, Rng& rng) {
  FormFamily f;
  f.spec = NormSpec(1.0);
  f.conic = true;
  auto signed_offdiag = [&](double sign) {
    Matrix m = random_gaussian(n, n, rng);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) m(i, j) = sign * uniform(0.0, 1.0, rng);
    return m;
  };
  f.forms.push_back(signed_offdiag(1.0));
  for (Eigen::Index i = 0; i < s; ++i) f.forms.push_back(signed_offdiag(-1.0));
  Vector x(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = uniform(0.2, 1.0, rng);
  x /= x.sum();
  f.rho.resize(s);
  for (Eigen::Index i = 0; i < s; ++i)
    f.rho(i) = f.forms[static_cast<std::size_t>(i + 1)].colwise().sum().dot(x) + uniform(0.05, 0.5, rng);
  return f;
}

FormFamily random_yakubovich_family(Eigen::Index n, Rng& rng) {
  FormFamily f;
  f.spec = NormSpec(2.0);
  f.forms = {random_gaussian(n, n, rng), random_gaussian(n, n, rng)};
  Vector x = random_gaussian(n, 1, rng);
  x.normalize();
  f.rho = Vector::Constant(1, x.dot(f.forms[1] * x) + uniform(0.05, 1.0, rng));
  return f;
}

LureSystem random_scalar_lure(Eigen::Index d, Rng& rng) {
  LureSystem sys;
  Matrix m = random_gaussian(d, d, rng);
  sys.a = m - (spectral_abscissa(m) + uniform(0.1, 1.5, rng)) * Matrix::Identity(d, d);
  sys.b = random_gaussian(d, 1, rng);
  sys.c = random_gaussian(1, d, rng);
  sys.zeta = Vector::Zero(1);
  sys.kappa = Vector::Constant(1, uniform(0.05, 5.0, rng));
  return sys;
}

FormFamily named_family(const std::string& name) {
  FormFamily f;
  f.spec = NormSpec(1.0);
  f.conic = true;
  Matrix p0(2, 2), p1(2, 2);
  if (name == "example1") {
    p0 << 1, 1, 0, 0;
    p1 << 0, 0, 0, -1;
    f.rho = Vector::Constant(1, -1.0);
  } else if (name == "example2a") {
    p0 << 1, 0, -1, 0;
    p1 << 0, 0, -1, 0;
    f.rho = Vector::Constant(1, -0.5);
  } else if (name == "example2b") {
    p0 << 1, 0, 1, 0;
    p1 << 0, 0, 1, 0;
    f.rho = Vector::Constant(1, 0.25);
  } else {
    fail(ErrorCode::invalid_argument, "unknown example '" + name + "'");
  }
  f.forms = {p0, p1};
  return f;
}

LureSystem positive_example(double kappa) {
  LureSystem sys;
  sys.a.resize(2, 2);
  sys.a << -2, 1, 0, -3;
  sys.b = Matrix(2, 1);
  sys.b << 0, 1;
  sys.c = Matrix(1, 2);
  sys.c << 1, 0;
  sys.zeta = Vector::Zero(1);
  sys.kappa = Vector::Constant(1, kappa);
  return sys;
}

LureSystem scalar_example(double kappa) {
  LureSystem sys;
  sys.a = Matrix::Constant(1, 1, -1.0);
  sys.b = Matrix::Constant(1, 1, 1.0);
  sys.c = Matrix::Constant(1, 1, 1.0);
  sys.zeta = Vector::Zero(1);
  sys.kappa = Vector::Constant(1, kappa);
  return sys;
}

}  // namespace npsl
