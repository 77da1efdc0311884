#include <doctest.h>

#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "npsl/error.hpp"
#include "npsl/instances.hpp"
#include "npsl/simulate.hpp"
#include "oracles.hpp"

using namespace npsl;

namespace {

LureSystem two_state() {
  LureSystem sys;
  sys.a = (Matrix(2, 2) << -1, 0.5, -0.3, -2).finished();
  sys.b = (Matrix(2, 1) << 1, 0.4).finished();
  sys.c = (Matrix(1, 2) << 0.7, -1).finished();
  sys.zeta = Vector::Zero(1);
  sys.kappa = Vector::Constant(1, 1.0);
  return sys;
}

}  // namespace

TEST_CASE("RK4 reproduces the matrix exponential") {
  LureSystem sys = two_state();
  sys.a = (Matrix(2, 2) << -1, 0, 0, -2).finished();
  const Vector z0 = (Vector(2) << 1, -2).finished();
  const Trajectory t0 = integrate(sys, {Nonlinearity::linear_gain(0.0)}, z0, 1.0, 1e-3);
  const Matrix e0 = sys.a.exp();
  CHECK((t0.state(t0.size() - 1) - e0 * z0).norm() < 1e-8);

  const LureSystem s2 = two_state();
  const Trajectory t1 = integrate(s2, {Nonlinearity::linear_gain(0.8)}, z0, 1.0, 1e-3);
  const Matrix closed = s2.a + 0.8 * s2.b * s2.c;
  CHECK((t1.state(t1.size() - 1) - closed.exp() * z0).norm() < 1e-8);
  CHECK(t1.ts(t1.size() - 1) == doctest::Approx(1.0));
}

TEST_CASE("RK4 is fourth order") {
  const LureSystem sys = two_state();
  const Vector z0 = (Vector(2) << 1, 1).finished();
  const Matrix closed = sys.a + 0.6 * sys.b * sys.c;
  const Vector exact = (2.0 * closed).exp() * z0;
  auto err = [&](double dt) {
    const Trajectory t = integrate(sys, {Nonlinearity::linear_gain(0.6)}, z0, 2.0, dt);
    return (t.state(t.size() - 1) - exact).norm();
  };
  const double ratio = err(0.1) / err(0.05);
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("equilibrium stays at zero") {
  const Trajectory t = integrate(two_state(), {Nonlinearity::scaled_tanh(1.0)}, Vector::Zero(2), 1.0, 1e-2);
  CHECK(t.states.isZero());
  CHECK(check_decay(t, NormSpec(2.0), 1.0) == 0.0);
  CHECK(dini_residual(t, NormSpec(2.0)).residual == 0.0);
}

TEST_CASE("original and normalized systems give the same trajectory") {
  LureSystem sys = two_state();
  sys.zeta(0) = -0.4;
  sys.kappa(0) = 0.9;
  const NormalizedLure nl = normalize_sector(sys);
  const Nonlinearity phi = Nonlinearity::transformed(Nonlinearity::saturation(0.5, 1.3), -0.4, 1.0);
  // v = φ − ζy
  const Nonlinearity v = Nonlinearity::transformed(phi, 0.4, 1.0);
  const Vector z0 = (Vector(2) << 2, -1).finished();
  const Trajectory a = integrate(sys, {phi}, z0, 5.0, 1e-3);
  const Trajectory b = integrate(nl.system, {v}, z0, 5.0, 1e-3);
  CHECK((a.states - b.states).cwiseAbs().maxCoeff() < 1e-9);

  LureSystem flip = two_state();
  flip.zeta(0) = -kInf;
  flip.kappa(0) = 0.5;
  const NormalizedLure nf = normalize_sector(flip);
  const Nonlinearity psi = Nonlinearity::transformed(Nonlinearity::scaled_tanh(2.0), 0.5, -1.0);  // ϰy − 2tanh y
  const Nonlinearity vf = Nonlinearity::transformed(psi, 0.5, -1.0);                             // v = ϰy − φ
  const Trajectory c = integrate(flip, {psi}, z0, 5.0, 1e-3);
  const Trajectory d = integrate(nf.system, {vf}, z0, 5.0, 1e-3);
  CHECK((c.states - d.states).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("nonlinearity declarations are validated") {
  const Nonlinearity sat = Nonlinearity::saturation(1.0, 2.0);
  CHECK(sat(0.0, 0.25) == doctest::Approx(0.5));
  CHECK(sat(0.0, 3.0) == doctest::Approx(1.0));
  CHECK(sat.sector().hi == 2.0);
  CHECK(sat.sector_within(0.0, 2.0));
  CHECK_FALSE(sat.sector_within(0.0, 1.5));
  CHECK_THROWS_AS(sat.with_declared({0.0, 1.0}, Bounds{0.0, 2.0}), Error);
  CHECK_NOTHROW(sat.with_declared({0.0, 3.0}, Bounds{-1.0, 2.5}));

  const Nonlinearity dz = Nonlinearity::deadzone(0.5, 3.0);
  CHECK(dz(0.0, 0.4) == 0.0);
  CHECK(dz(0.0, -1.5) == doctest::Approx(-3.0));

  // φ(y) = 2y for y < 0, y/2 for y > 0 up to 1, then slope 3
  const Nonlinearity pw = Nonlinearity::pw_linear({{-1.0, -2.0}, {0.0, 0.0}, {1.0, 0.5}, {2.0, 3.5}});
  CHECK(pw.slope().lo == doctest::Approx(0.5));
  CHECK(pw.slope().hi == doctest::Approx(3.0));
  CHECK(pw.sector().lo == doctest::Approx(0.5));
  CHECK(pw.sector().hi == doctest::Approx(3.0));
  CHECK(pw(0.0, 3.0) == doctest::Approx(6.5));
  CHECK_THROWS_AS(Nonlinearity::pw_linear({{-1.0, 1.0}, {1.0, 2.0}}), Error);

  const Nonlinearity sw =
      Nonlinearity::switched({Nonlinearity::linear_gain(1.0), Nonlinearity::linear_gain(2.0)}, {1.0});
  CHECK(sw(0.5, 1.0) == 1.0);
  CHECK(sw(1.5, 1.0) == 2.0);
  CHECK(sw.sector().lo == 1.0);
  CHECK(sw.sector().hi == 2.0);
}

TEST_CASE("decay bound from the ℓ2 log norm, contraction of a linear loop") {
  const LureSystem sys = two_state();
  const Nonlinearity zero = Nonlinearity::linear_gain(0.0);
  const double c = -oracle::mu2(sys.a);
  const Vector z0 = (Vector(2) << 1, 3).finished();
  const Trajectory t = integrate(sys, {zero}, z0, 5.0, 1e-3);
  CHECK(check_decay(t, NormSpec(2.0), c) <= 1.0 + 1e-6);
  CHECK(check_decay(t, NormSpec(2.0), 0.0) ==
        doctest::Approx((t.states.colwise().norm().maxCoeff()) / z0.norm()));

  // linear φ: the difference of two runs is the run from the difference
  const Nonlinearity lin = Nonlinearity::linear_gain(0.7);
  const Vector z1 = (Vector(2) << -2, 0.5).finished();
  const Trajectory a = integrate(sys, {lin}, z0, 5.0, 1e-3);
  const Trajectory b = integrate(sys, {lin}, z1, 5.0, 1e-3);
  const Trajectory d = integrate(sys, {lin}, z0 - z1, 5.0, 1e-3);
  CHECK(check_contraction(a, b, NormSpec(1.0), 0.3) == doctest::Approx(check_decay(d, NormSpec(1.0), 0.3)).epsilon(1e-9));
  CHECK(check_contraction(a, a, NormSpec(1.0), 0.3) == 0.0);
}

TEST_CASE("Dini derivative of the norm along trajectories") {
  const LureSystem sys = two_state();
  const Vector z0 = (Vector(2) << 1, -0.2).finished();
  const double dt = 1e-3;
  const Trajectory t = integrate(sys, {Nonlinearity::scaled_tanh(0.5)}, z0, 5.0, dt);
  const double scale = sys.a.norm() * z0.squaredNorm();
  CHECK(dini_residual(t, NormSpec(2.0)).residual <= 10.0 * dt * scale);
  const DiniReport r1 = dini_residual(t, NormSpec(1.0));
  CHECK(r1.residual <= 10.0 * dt * scale);
  CHECK(r1.steps_used > 0);
  CHECK(dini_residual(t, NormSpec(kInf)).residual <= 10.0 * dt * scale);
}

TEST_CASE("blow-up truncates the trajectory") {
  LureSystem sys = two_state();
  sys.a = (Matrix(2, 2) << 40, 0, 0, 40).finished();
  const Trajectory t = integrate(sys, {Nonlinearity::linear_gain(0.0)}, Vector::Ones(2), 20.0, 1e-2);
  CHECK(t.blew_up);
  CHECK(t.size() < 2001);
  CHECK(t.states.allFinite());
}

TEST_CASE("batch runs: parallel equals serial") {
  const LureSystem sys = two_state();
  std::vector<SimRun> runs;
  Rng rng(61);
  for (int k = 0; k < 16; ++k) runs.push_back({{Nonlinearity::deadzone(0.1 * k, 1.0)}, random_gaussian(2, 1, rng)});
  const auto s = integrate_batch(sys, runs, 2.0, 1e-3, Execution::serial);
  const auto p = integrate_batch(sys, runs, 2.0, 1e-3, Execution::parallel);
  for (std::size_t k = 0; k < runs.size(); ++k) CHECK((s[k].states.array() == p[k].states.array()).all());
}

TEST_CASE("CSV export") {
  const Trajectory t = integrate(two_state(), {Nonlinearity::linear_gain(0.2)}, Vector::Ones(2), 0.01, 1e-3);
  std::ostringstream os;
  write_csv(os, t);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  CHECK(header == "t,z_1,z_2,w_1,y_1");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("integration input checks") {
  const LureSystem sys = two_state();
  CHECK_THROWS_AS(integrate(sys, {}, Vector::Ones(2), 1.0, 1e-3), Error);
  CHECK_THROWS_AS(integrate(sys, {Nonlinearity::linear_gain(0.0)}, Vector::Ones(3), 1.0, 1e-3), Error);
  CHECK_THROWS_AS(integrate(sys, {Nonlinearity::linear_gain(0.0)}, Vector::Ones(2), 1e-4, 1e-3), Error);
}
