#include <doctest.h>

#include <numeric>

#include "npsl/lp.hpp"
#include "oracles.hpp"

using namespace npsl;

namespace {

// Best vertex over all choices of n active constraints among A x <= b, x >= 0.
double vertex_enumeration(const Matrix& a, const Vector& b, const Vector& c) {
  const Eigen::Index n = c.size(), m = a.rows();
  Matrix all(m + n, n);
  all << a, -Matrix::Identity(n, n);
  Vector rhs(m + n);
  rhs << b, Vector::Zero(n);
  std::vector<int> pick(static_cast<std::size_t>(m + n), 0);
  std::fill(pick.begin(), pick.begin() + n, 1);
  double best = -1e300;
  do {
    Matrix sub(n, n);
    Vector r(n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m + n; ++i)
      if (pick[static_cast<std::size_t>(i)]) {
        sub.row(k) = all.row(i);
        r(k++) = rhs(i);
      }
    Eigen::FullPivLU<Matrix> lu(sub);
    if (!lu.isInvertible()) continue;
    const Vector x = lu.solve(r);
    if (((all * x - rhs).array() <= 1e-9).all()) best = std::max(best, c.dot(x));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST_CASE("random bounded LPs match vertex enumeration") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 150; ++t) {
    const Eigen::Index n = 2 + t % 3, m = 2 + t % 4;
    Matrix a(m + n, n);
    Vector b(m + n);
    a.topRows(m) = oracle::gaussian(m, n, rng);
    for (Eigen::Index i = 0; i < m; ++i) b(i) = u(rng) + 0.1;  // x = 0 feasible
    a.bottomRows(n) = Matrix::Identity(n, n);
    b.tail(n).setConstant(10.0);
    const Vector c = oracle::gaussian(n, 1, rng);
    LinearProgram lp{c, a, b, Matrix(0, n), Vector(0)};
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == doctest::Approx(vertex_enumeration(a, b, c)).epsilon(1e-9));
    CHECK(((a * s.x - b).array() <= 1e-9).all());
    CHECK((s.x.array() >= -1e-12).all());
  }
}

TEST_CASE("negative right-hand sides and equalities need phase one") {
  // max x + y  s.t.  -x - y <= -1 (x + y >= 1),  x <= 2,  x - y = 0
  LinearProgram lp;
  lp.objective = Vector::Ones(2);
  lp.a_ub = (Matrix(2, 2) << -1, -1, 1, 0).finished();
  lp.b_ub = (Vector(2) << -1, 2).finished();
  lp.a_eq = (Matrix(1, 2) << 1, -1).finished();
  lp.b_eq = Vector::Zero(1);
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(4.0));
  CHECK(s.x(0) == doctest::Approx(2.0));
  CHECK(s.x(1) == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded programs") {
  LinearProgram inf;
  inf.objective = Vector::Ones(1);
  inf.a_ub = (Matrix(1, 1) << 1).finished();
  inf.b_ub = (Vector(1) << -1).finished();
  inf.a_eq = Matrix(0, 1);
  inf.b_eq = Vector(0);
  CHECK(solve_lp(inf).status == LpStatus::infeasible);

  LinearProgram unb;
  unb.objective = (Vector(2) << 1, 0).finished();
  unb.a_ub = (Matrix(1, 2) << -1, 1).finished();
  unb.b_ub = Vector::Ones(1);
  unb.a_eq = Matrix(0, 2);
  unb.b_eq = Vector(0);
  CHECK(solve_lp(unb).status == LpStatus::unbounded);
  CHECK(std::string(to_string(LpStatus::unbounded)) == "unbounded");
}

TEST_CASE("Beale's cycling example terminates under Bland's rule") {
  LinearProgram lp;
  lp.objective = (Vector(4) << 0.75, -20, 0.5, -6).finished();
  lp.a_ub = (Matrix(3, 4) << 0.25, -8, -1, 9, 0.5, -12, -0.5, 3, 0, 0, 1, 0).finished();
  lp.b_ub = (Vector(3) << 0, 0, 1).finished();
  lp.a_eq = Matrix(0, 4);
  lp.b_eq = Vector(0);
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(1.25));
}
