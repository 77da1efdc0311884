#include <doctest.h>

#include "npsl/error.hpp"
#include "npsl/pairings.hpp"
#include "oracles.hpp"

using namespace npsl;

TEST_CASE("closed-form log norms against entrywise and Jacobi oracles") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = 1 + t % 8;
    const Matrix a = oracle::gaussian(n, n, rng);
    CHECK(log_norm(a, NormSpec(1.0)) == doctest::Approx(oracle::mu1(a)).epsilon(1e-13));
    CHECK(log_norm(a, NormSpec(kInf)) == doctest::Approx(oracle::mu_inf(a)).epsilon(1e-13));
    CHECK(log_norm(a, NormSpec(2.0)) == doctest::Approx(oracle::mu2(a)).epsilon(1e-10));
    CHECK(conic_log_norm(a, NormSpec(1.0)) == doctest::Approx(oracle::mu1(a, true)).epsilon(1e-13));
    CHECK(conic_log_norm(a, NormSpec(kInf)) == doctest::Approx(oracle::mu_inf(a, true)).epsilon(1e-13));
  }
}

TEST_CASE("example matrix [[-2,1],[3,-4]]") {
  Matrix a(2, 2);
  a << -2, 1, 3, -4;
  CHECK(log_norm(a, NormSpec(1.0)) == doctest::Approx(1.0));
  CHECK(log_norm(a, NormSpec(kInf)) == doctest::Approx(-1.0));
  // μ∞(RAR⁻¹) with R = diag(2, 1): rows (-2, 2) and (1.5, -4).
  CHECK(log_norm(a, NormSpec::diagonal(kInf, (Vector(2) << 2, 1).finished())) ==
        doctest::Approx(0.0));
}

TEST_CASE("weighted log norm is the log norm of the similar matrix") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = oracle::gaussian(4, 4, rng);
    const Matrix r = oracle::gaussian(4, 4, rng) + 4.0 * Matrix::Identity(4, 4);
    const Matrix sim = r * a * r.inverse();
    for (double p : {1.0, 2.0, kInf}) {
      const double ref = p == 1.0 ? oracle::mu1(sim) : p == 2.0 ? oracle::mu2(sim) : oracle::mu_inf(sim);
      CHECK(log_norm(a, NormSpec(p, r)) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("limit definition agrees with closed forms") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = oracle::gaussian(1 + t % 6, 1 + t % 6, rng);
    for (double p : {1.0, 2.0, kInf})
      CHECK(std::abs(log_norm_limit_estimate(a, NormSpec(p), 1e-6) - log_norm(a, NormSpec(p))) < 1e-4);
  }
}

TEST_CASE("weak pairing axioms") {
  std::mt19937_64 rng(24);
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0, kInf}) {
    const NormSpec spec(p);
    for (int t = 0; t < 200; ++t) {
      const Vector x = oracle::gaussian(5, 1, rng), y = oracle::gaussian(5, 1, rng), z = oracle::gaussian(5, 1, rng);
      const double nx = vector_norm(x, spec), ny = vector_norm(y, spec);
      CHECK(nx == doctest::Approx(oracle::lp_norm(x, p)).epsilon(1e-12));
      // compatibility and Cauchy–Schwarz
      CHECK(weak_pairing(x, x, spec).value == doctest::Approx(nx * nx).epsilon(1e-12));
      CHECK(std::abs(weak_pairing(x, y, spec).value) <= nx * ny * (1.0 + 1e-12));
      // subadditivity in the first argument
      CHECK(weak_pairing(x + z, y, spec).value <=
            weak_pairing(x, y, spec).value + weak_pairing(z, y, spec).value + 1e-10 * (1.0 + nx * ny));
      // weak homogeneity
      CHECK(weak_pairing(2.5 * x, y, spec).value == doctest::Approx(2.5 * weak_pairing(x, y, spec).value).epsilon(1e-12));
      CHECK(weak_pairing(x, -3.0 * y, spec).value == doctest::Approx(-3.0 * weak_pairing(x, y, spec).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("active set for the max pairing") {
  Vector y(3);
  y << 1, -2, 2;
  const PairingValue v = weak_pairing(Vector::Ones(3), y, NormSpec(kInf));
  CHECK(v.active_set == std::vector<int>{1, 2});
  // max over I∞ of x_i y_i: max(-2, 2)
  CHECK(v.value == doctest::Approx(2.0));
}

TEST_CASE("Lumer equality by enumeration and by sampling") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 1 + t % 6;
    const Matrix a = oracle::gaussian(n, n, rng);
    for (double p : {1.0, kInf}) {
      const double mu = log_norm(a, NormSpec(p));
      CHECK(lumer_enumeration(a, p, false).value == doctest::Approx(mu).epsilon(1e-12));
      const double cmu = conic_log_norm(a, NormSpec(p));
      CHECK(lumer_enumeration(a, p, true).value == doctest::Approx(cmu).epsilon(1e-12));
      for (int k = 0; k < 20; ++k) {
        const Vector x = oracle::gaussian(n, 1, rng);
        const double nx = vector_norm(x, NormSpec(p));
        CHECK(weak_pairing(a * x, x, NormSpec(p)).value <= mu * nx * nx + 1e-10 * nx * nx);
      }
    }
  }
}

TEST_CASE("general p: sampled log norm is a lower bound squeezed by the ℓ2 case") {
  std::mt19937_64 rng(26);
  const Matrix a = oracle::gaussian(3, 3, rng);
  CHECK_THROWS_AS(log_norm(a, NormSpec(3.0)), Error);
  try {
    log_norm(a, NormSpec(3.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::approximate_only);
  }
  // At p = 2 the sampled estimate can be compared with the exact value.
  const double exact = oracle::mu2(a);
  const double sampled = log_norm_sampled(a, 2.0, 4000, 3);
  CHECK(sampled <= exact + 1e-9);
  CHECK(sampled >= exact - 1e-6);
  // μ_p is bounded by max(μ₁, μ∞) (Riesz–Thorin on e^{tA}).
  const double s3 = log_norm_sampled(a, 3.0, 4000, 3);
  CHECK(s3 <= std::max(oracle::mu1(a), oracle::mu_inf(a)) + 1e-9);
}

TEST_CASE("curve norm derivative formula on a smooth curve") {
  for (double p : {1.5, 2.0, 3.0}) {
    std::vector<double> ts;
    std::vector<Vector> xs;
    for (int k = 0; k <= 2000; ++k) {
      const double t = 1e-4 * k;
      ts.push_back(t);
      xs.push_back((Vector(3) << 1.0 + t, 2.0 - 3.0 * t * t, 0.5 + std::sin(t)).finished());
    }
    CHECK(curve_derivative_residual(ts, xs, NormSpec(p)) < 1e-3);
  }
}

TEST_CASE("NormSpec rejects bad input") {
  CHECK_THROWS_AS(NormSpec(0.5), Error);
  CHECK_THROWS_AS(NormSpec(2.0, Matrix::Zero(2, 2)), Error);
  CHECK_THROWS_AS(NormSpec::diagonal(1.0, (Vector(2) << 1, -1).finished()), Error);
  Matrix r(2, 2);
  r << 1, 1, 0, 1;
  CHECK_THROWS_AS(conic_log_norm(Matrix::Identity(2, 2), NormSpec(1.0, r)), Error);
}
