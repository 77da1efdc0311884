#include <doctest.h>

#include <string>

#include "npsl/error.hpp"
#include "npsl/instances.hpp"
#include "npsl/slemma.hpp"
#include "oracles.hpp"

using namespace npsl;

namespace {

// Conic ℓ1 in n = 2: the unit sphere is the segment x = (θ, 1 − θ) and the
// 2-form is Σ_{i ∈ supp x} (P x)_i there.
double conic_form(const Matrix& p, const Vector& x) {
  const Vector px = p * x;
  double v = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) v += px(i);
  return v;
}

double brute_alpha_conic2(const FormFamily& f) {
  double best = -kInf;
  for (int k = 0; k <= 200000; ++k) {
    const double th = k / 200000.0;
    const Vector x = (Vector(2) << th, 1.0 - th).finished();
    bool ok = true;
    for (Eigen::Index i = 0; i < f.constraints(); ++i)
      ok = ok && conic_form(f.forms[static_cast<std::size_t>(i + 1)], x) <= f.rho(i) + 1e-15;
    if (ok) best = std::max(best, conic_form(f.forms[0], x));
  }
  return best;
}

double brute_beta_conic1(const FormFamily& f) {
  double best = kInf;
  for (int k = 0; k <= 100000; ++k) {
    const double tau = k * 1e-4;
    best = std::min(best, oracle::mu1(f.forms[0] - tau * f.forms[1], true) + tau * f.rho(0));
  }
  return best;
}

}  // namespace

TEST_CASE("counterexample families: conic ℓ1 gaps") {
  const struct {
    const char* name;
    double alpha, beta;
  } cases[] = {{"example1", 0.0, 1.0}, {"example2a", 0.0, 0.5}, {"example2b", 1.0, 1.25}};
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const FormFamily f = named_family(c.name);
    const PrimalEstimate p = primal_oracle(f);
    const DualSolution d = solve_dual(f);
    CHECK(p.exact);
    CHECK(p.alpha_lower == doctest::Approx(c.alpha).epsilon(1e-12));
    CHECK(d.beta == doctest::Approx(c.beta).epsilon(1e-12));
    CHECK(brute_alpha_conic2(f) == doctest::Approx(c.alpha).epsilon(1e-9));
    CHECK(brute_beta_conic1(f) == doctest::Approx(c.beta).epsilon(1e-9));
    // the witness is feasible and attains α⁺
    CHECK((p.witness.array() >= 0.0).all());
    CHECK(p.witness.sum() == doctest::Approx(1.0));
    CHECK(two_form(f.forms[1], p.witness, f.spec) <= f.rho(0) + 1e-9);
  }
}

TEST_CASE("no constraints: β is the log norm and α attains it") {
  std::mt19937_64 rng(41);
  for (double p : {1.0, 2.0, kInf}) {
    for (int t = 0; t < 30; ++t) {
      FormFamily f;
      f.spec = NormSpec(p);
      f.forms = {oracle::gaussian(4, 4, rng)};
      f.rho = Vector(0);
      const double mu = p == 1.0 ? oracle::mu1(f.forms[0]) : p == 2.0 ? oracle::mu2(f.forms[0]) : oracle::mu_inf(f.forms[0]);
      CHECK(solve_dual(f).beta == doctest::Approx(mu).epsilon(1e-10));
      CHECK(primal_oracle(f).alpha_lower == doctest::Approx(mu).epsilon(1e-9));
    }
  }
}

TEST_CASE("weak duality on random families, with implication samples") {
  for (double p : {1.0, 2.0, kInf}) {
    for (int t = 0; t < 40; ++t) {
      Rng rng(4200 + static_cast<std::uint64_t>(t));
      const FormFamily f = random_family(p, 2 + t % 4, 1 + t % 3, rng, p != 2.0 && t % 5 == 0);
      const WeakDualityReport r = weak_duality_check(f);
      CHECK(r.ok);
      CHECK(r.implication_excess <= 1e-7);
    }
  }
}

TEST_CASE("multi-constraint dual is no worse than a τ grid") {
  std::mt19937_64 rng(43);
  for (double p : {1.0, kInf, 2.0}) {
    Rng r2(43);
    const FormFamily f = random_family(p, 3, 2, r2);
    const DualSolution d = solve_dual(f);
    double grid = kInf;
    for (int i = 0; i <= 60; ++i)
      for (int j = 0; j <= 60; ++j) grid = std::min(grid, dual_objective(f, (Vector(2) << 0.1 * i, 0.1 * j).finished()));
    CHECK(d.beta <= grid + 1e-9);
    CHECK(dual_objective(f, d.tau) == doctest::Approx(d.beta).epsilon(1e-10));
    CHECK((d.tau.array() >= 0.0).all());
  }
}

TEST_CASE("Metzler ℓ1 zero gap against simplex grid sampling") {
  for (int t = 0; t < 20; ++t) {
    Rng rng(4400 + static_cast<std::uint64_t>(t));
    const FormFamily f = random_metzler_family(3, 1 + t % 2, rng);
    const ZeroGapResult z = metzler_zero_gap(f);
    CHECK(z.gap_within_tolerance);
    CHECK(std::abs(z.alpha - z.beta) <= 1e-6);
    CHECK(z.interior_slack > 0.0);
    // grid over the simplex: a lower bound within the grid resolution
    double grid = -kInf;
    const int g = 200;
    for (int i = 0; i <= g; ++i)
      for (int j = 0; i + j <= g; ++j) {
        const Vector x = (Vector(3) << i, j, g - i - j).finished() / g;
        bool ok = true;
        for (Eigen::Index k = 0; k < f.constraints(); ++k)
          ok = ok && f.forms[static_cast<std::size_t>(k + 1)].colwise().sum().dot(x) <= f.rho(k);
        if (ok) grid = std::max(grid, f.forms[0].colwise().sum().dot(x));
      }
    CHECK(grid <= z.alpha + 1e-12);
    const double lip = f.forms[0].colwise().sum().cwiseAbs().maxCoeff() * 2.0;
    CHECK(grid >= z.alpha - lip * 4.0 / g);
    // and the exact face-enumeration oracle
    CHECK(primal_oracle(f).alpha_lower == doctest::Approx(z.alpha).epsilon(1e-9));
  }
}

TEST_CASE("Yakubovich zero gap against a dense circle in n = 2") {
  for (int t = 0; t < 20; ++t) {
    Rng rng(4500 + static_cast<std::uint64_t>(t));
    const FormFamily f = random_yakubovich_family(2, rng);
    const ZeroGapResult z = yakubovich_zero_gap(f, 1e-6);
    double best = -kInf;
    auto visit = [&](double th) {
      const Vector x = (Vector(2) << std::cos(th), std::sin(th)).finished();
      if (x.dot(f.forms[1] * x) <= f.rho(0) + 1e-12) best = std::max(best, x.dot(f.forms[0] * x));
    };
    for (int k = 0; k < 400000; ++k) visit(2.0 * M_PI * k / 400000.0);
    // exact boundary points: xᵀP₁x = a + b cos 2θ + c sin 2θ = ρ
    const Matrix s1 = 0.5 * (f.forms[1] + f.forms[1].transpose());
    const double a = 0.5 * (s1(0, 0) + s1(1, 1)), b = 0.5 * (s1(0, 0) - s1(1, 1)), c = s1(0, 1);
    const double r = std::hypot(b, c);
    if (r > 0.0 && std::abs(f.rho(0) - a) <= r) {
      const double phase = std::atan2(c, b), off = std::acos((f.rho(0) - a) / r);
      for (double psi : {phase + off, phase - off})
        for (double shift : {0.0, M_PI}) visit(0.5 * psi + shift);
    }
    CHECK(z.beta == doctest::Approx(best).epsilon(1e-6));
    CHECK(z.complementarity_residual <= 1e-6);
  }
}

TEST_CASE("zero-gap hypotheses are refused with their statement") {
  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::hypothesis);
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message([] { metzler_zero_gap(named_family("example2a")); }).find("P₀ Metzler") != std::string::npos);
  CHECK(message([] { metzler_zero_gap(named_family("example2b")); }).find("−P_i Metzler") != std::string::npos);
  CHECK(message([] { metzler_zero_gap(named_family("example1")); }).find("strictly feasible") != std::string::npos);
  FormFamily y;
  y.spec = NormSpec(2.0);
  y.forms = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  y.rho = Vector::Constant(1, 0.5);  // ‖x‖² <= 0.5 on the unit sphere: no Slater point
  CHECK(message([&] { yakubovich_zero_gap(y); }).find("Slater") != std::string::npos);
}

TEST_CASE("normalize_rho moves ρ into the forms") {
  Rng rng(46);
  const FormFamily f = random_family(2.0, 3, 2, rng);
  const FormFamily g = normalize_rho(f);
  CHECK(g.rho.isZero());
  const Vector x = Vector::Ones(3).normalized();
  for (Eigen::Index i = 0; i < 2; ++i)
    CHECK(two_form(g.forms[static_cast<std::size_t>(i + 1)], x, g.spec) ==
          doctest::Approx(two_form(f.forms[static_cast<std::size_t>(i + 1)], x, f.spec) - f.rho(i)));
}

TEST_CASE("family validation") {
  FormFamily f;
  f.spec = NormSpec(1.0);
  f.forms = {Matrix::Identity(2, 2), Matrix::Identity(3, 3)};
  f.rho = Vector::Zero(1);
  CHECK_THROWS_AS(validate_family(f), Error);
  f.forms[1] = Matrix::Identity(2, 2);
  f.rho = Vector::Zero(2);
  CHECK_THROWS_AS(validate_family(f), Error);
}
