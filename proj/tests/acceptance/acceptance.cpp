// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "npsl/error.hpp"
#include "npsl/instances.hpp"
#include "npsl/linalg.hpp"
#include "npsl/lure.hpp"
#include "npsl/pairings.hpp"
#include "npsl/parallel.hpp"
#include "npsl/simulate.hpp"
#include "npsl/slemma.hpp"
#include "oracles.hpp"

using namespace npsl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0: no time limit
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Certificates collected from criteria 5-7 for the simulation criterion.
struct Issued {
  LureSystem sys;
  Certificate cert;
  std::string origin;
};
std::vector<Issued> g_issued;

// ---------------------------------------------------------------- 1

Outcome counterexamples() {
  const struct {
    const char* name;
    double alpha, beta;
  } cases[] = {{"example1", 0.0, 1.0}, {"example2a", 0.0, 0.5}, {"example2b", 1.0, 1.25}};
  Outcome o{true, ""};
  for (const auto& c : cases) {
    const FormFamily f = named_family(c.name);
    const PrimalEstimate p = primal_oracle(f);
    const DualSolution d = solve_dual(f);
    const bool ok = p.exact && std::abs(p.alpha_lower - c.alpha) <= 1e-9 && std::abs(d.beta - c.beta) <= 1e-9;
    o.pass = o.pass && ok;
    o.detail += std::string(c.name) + " α⁺=" + fmt("%.12g", p.alpha_lower) + " β⁺=" + fmt("%.12g", d.beta) + "; ";
  }
  return o;
}

// ---------------------------------------------------------------- 2

Outcome weak_duality_fuzz() {
  std::size_t violations = 0, total = 0;
  double worst = -kInf;
  for (double p : {1.0, 2.0, kInf}) {
    const std::size_t n = 500;
    std::vector<double> excess(n, -kInf);
    for_each_index(n, Execution::parallel, [&](std::size_t i) {
      Rng rng(20000 + static_cast<std::uint64_t>(i) + (p == 1.0 ? 0 : p == 2.0 ? 1000000 : 2000000));
      const int dim = uniform_int(1, 6, rng);
      const int s = uniform_int(0, 3, rng);
      const bool conic = p != 2.0 && i % 4 == 0;
      const FormFamily f = random_family(p, dim, s, rng, conic);
      const WeakDualityReport r = weak_duality_check(f);
      excess[i] = r.alpha_lower - r.beta;
    });
    for (double e : excess) {
      violations += e > 1e-7 ? 1 : 0;
      worst = std::max(worst, e);
    }
    total += n;
  }
  return {violations == 0, std::to_string(total) + " families, violations " + std::to_string(violations) +
                               ", max α_lower − β = " + fmt("%.3g", worst)};
}

// ---------------------------------------------------------------- 3

Outcome metzler_suite() {
  const std::size_t n = 200;
  std::vector<double> gap(n, kInf), generic(n, kInf), slack(n, 0.0);
  for_each_index(n, Execution::parallel, [&](std::size_t i) {
    Rng rng(30000 + static_cast<std::uint64_t>(i));
    const FormFamily f = random_metzler_family(uniform_int(2, 6, rng), uniform_int(1, 3, rng), rng);
    const ZeroGapResult z = metzler_zero_gap(f);
    gap[i] = std::abs(z.alpha - z.beta);
    slack[i] = z.interior_slack;
    // the general-purpose primal and dual solvers, not the Metzler LP
    generic[i] = std::abs(primal_oracle(f).alpha_lower - solve_dual(f).beta);
  });
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) bad += (gap[i] > 1e-6 || generic[i] > 1e-6 || !(slack[i] > 0.0)) ? 1 : 0;
  return {bad == 0, "violations " + std::to_string(bad) + ", max |α−β| = " +
                        fmt("%.3g", std::max(*std::max_element(gap.begin(), gap.end()),
                                             *std::max_element(generic.begin(), generic.end()))) +
                        ", min interior slack = " + fmt("%.3g", *std::min_element(slack.begin(), slack.end()))};
}

// ---------------------------------------------------------------- 4

Outcome yakubovich_suite() {
  const std::size_t n = 200;
  std::vector<double> gap(n, kInf), comp(n, kInf);
  for_each_index(n, Execution::parallel, [&](std::size_t i) {
    Rng rng(40000 + static_cast<std::uint64_t>(i));
    const FormFamily f = random_yakubovich_family(uniform_int(2, 5, rng), rng);
    const ZeroGapResult z = yakubovich_zero_gap(f, 1e-4);
    PrimalBudget budget;
    budget.seed = 40000 + i;
    gap[i] = std::abs(primal_oracle(f, budget).alpha_lower - z.beta);
    comp[i] = z.complementarity_residual;
  });
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) bad += (gap[i] > 1e-4 || comp[i] > 1e-6) ? 1 : 0;
  return {bad == 0, "violations " + std::to_string(bad) + ", max |α−β| = " +
                        fmt("%.3g", *std::max_element(gap.begin(), gap.end())) + ", max complementarity = " +
                        fmt("%.3g", *std::max_element(comp.begin(), comp.end()))};
}

// ---------------------------------------------------------------- 5

Outcome symmetrization_suite() {
  const std::size_t n = 500;
  std::vector<int> state(n, 0);  // 0 agree, 1 mismatch, 2 inside the decision margin
  std::vector<std::string> why(n);
  std::vector<LureSystem> systems(n);
  std::vector<Certificate> certs(n);
  for_each_index(n, Execution::parallel, [&](std::size_t i) {
    Rng rng(50000 + static_cast<std::uint64_t>(i));
    systems[i] = random_scalar_lure(uniform_int(1, 4, rng), rng);
    const LureSystem& sys = systems[i];
    const SymmetrizationTests s = l2_symmetrization_tests(sys);
    if (s.decision_margin() < 1e-8) {
      state[i] = 2;
      return;
    }
    const bool schur = certify_l2_schur(sys, 0.0).issued();
    const bool dual = certify_lp_dual(sys, 2.0, WeightChoice::identity(), 0.0).issued();
    if (s.cond_i != (s.cond_ii && s.cond_iii) || schur != s.cond_i || dual != s.cond_i) {
      state[i] = 1;
      why[i] = "i=" + std::to_string(s.cond_i) + " ii=" + std::to_string(s.cond_ii) +
               " iii=" + std::to_string(s.cond_iii) + " schur=" + std::to_string(schur) +
               " dual=" + std::to_string(dual);
    }
    certs[i] = certify_l2_symmetrization(sys);
  });
  std::size_t mismatches = 0, undecided = 0, certified = 0;
  std::string first;
  for (std::size_t i = 0; i < n; ++i) {
    mismatches += state[i] == 1 ? 1 : 0;
    undecided += state[i] == 2 ? 1 : 0;
    if (state[i] == 1 && first.empty()) first = " (first: #" + std::to_string(i) + " " + why[i] + ")";
    if (state[i] != 2 && certs[i].issued()) {
      ++certified;
      g_issued.push_back({systems[i], certs[i], "symmetrization"});
    }
  }
  return {mismatches == 0, std::to_string(n) + " systems, mismatches " + std::to_string(mismatches) +
                               ", within margin " + std::to_string(undecided) + ", certified " +
                               std::to_string(certified) + first};
}

// ---------------------------------------------------------------- 6

Outcome positive_system() {
  // c* = −λ_max(A + ϰBC) with A + 5BC = [[−2, 1], [5, −3]]
  const Matrix closed = (Matrix(2, 2) << -2, 1, 5, -3).finished();
  const auto roots = oracle::roots2(closed);
  const double target = -std::max(roots.first.real(), roots.second.real());
  Outcome o{true, "c* oracle " + fmt("%.12g", target)};
  const LureSystem k5 = positive_example(5.0);
  for (RatePath path : {RatePath::metzler, RatePath::lp_dual}) {
    const RateResult r = max_certified_rate(k5, path, 1.0, WeightChoice::perron());
    o.pass = o.pass && r.cert.issued() && std::abs(r.c_star - target) <= 1e-6;
    o.detail += std::string(path == RatePath::metzler ? ", metzler " : ", dual ") + fmt("%.12g", r.c_star);
    if (r.cert.issued()) g_issued.push_back({k5, r.cert, path == RatePath::metzler ? "positive metzler" : "positive dual"});
  }
  const LureSystem k6 = positive_example(6.0);
  double best6 = 0.0;
  const struct {
    RatePath path;
    double p;
  } all[] = {{RatePath::metzler, 1.0}, {RatePath::metzler, kInf}, {RatePath::lp_dual, 1.0},
             {RatePath::lp_dual, 2.0}, {RatePath::lp_dual, kInf}, {RatePath::l2_schur, 2.0}};
  for (const auto& a : all) {
    try {
      const RateResult r = max_certified_rate(k6, a.path, a.p, WeightChoice::perron());
      if (r.cert.issued()) best6 = std::max(best6, r.c_star);
    } catch (const Error&) {
    }
  }
  o.pass = o.pass && best6 <= 1e-6;
  o.detail += ", ϰ=6 best c " + fmt("%.3g", best6);
  return o;
}

// ---------------------------------------------------------------- 7

Outcome circle_scalar() {
  // G(s) = 1/(s + 1): max_ω Re G(iω) = 1 at ω = 0
  const std::vector<double> kappas = {0.05, 0.3, 0.5, 0.9, 0.99, 0.999999, 1.0 - 1e-10, 1.0, 1.0 + 1e-10,
                                      1.000001, 1.01, 1.5, 3.0, 10.0};
  std::size_t wrong = 0;
  std::string detail;
  for (double k : kappas) {
    const LureSystem sys = scalar_example(k);
    const Certificate c = circle_halfplane(sys);
    const bool expected = 1.0 < 1.0 / k - 1e-9;
    if (c.issued() != expected) {
      ++wrong;
      detail += " ϰ=" + fmt("%.12g", k);
    }
    if (c.issued()) g_issued.push_back({sys, c, "circle"});
  }
  return {wrong == 0, std::to_string(kappas.size()) + " gains, wrong decisions " + std::to_string(wrong) + detail};
}

// ---------------------------------------------------------------- 8

std::vector<Nonlinearity> in_class(double kappa, double horizon) {
  return {Nonlinearity::linear_gain(kappa), Nonlinearity::saturation(1.0, kappa), Nonlinearity::deadzone(0.5, kappa),
          Nonlinearity::scaled_tanh(kappa),
          Nonlinearity::switched({Nonlinearity::saturation(0.5, kappa), Nonlinearity::linear_gain(0.0),
                                  Nonlinearity::scaled_tanh(kappa), Nonlinearity::deadzone(0.2, kappa)},
                                 {horizon / 4.0, horizon / 2.0, 3.0 * horizon / 4.0})};
}

Outcome simulation_soundness() {
  const double horizon = 10.0, dt = 1e-3;
  const int trials = 10;
  const std::size_t n = g_issued.size();
  std::vector<double> decay(n, 0.0), contraction(n, 0.0);
  std::vector<char> broken(n, 0);
  for_each_index(n, Execution::parallel, [&](std::size_t i) {
    const Issued& is = g_issued[i];
    require(is.sys.channels() == 1 && is.sys.zeta(0) == 0.0, ErrorCode::unsupported, "scalar sector [0, ϰ] only");
    const NormSpec spec = is.cert.state_spec();
    Rng rng(80000 + static_cast<std::uint64_t>(i));
    std::vector<Vector> starts;
    for (int t = 0; t < trials; ++t) starts.push_back(random_gaussian(is.sys.states(), 1, rng));
    for (const Nonlinearity& phi : in_class(is.sys.kappa(0), horizon)) {
      std::vector<Trajectory> runs;
      for (const Vector& z0 : starts) runs.push_back(integrate(is.sys, {phi}, z0, horizon, dt));
      for (int t = 0; t < trials; ++t) {
        const Trajectory& a = runs[static_cast<std::size_t>(t)];
        const Trajectory& b = runs[static_cast<std::size_t>((t + 1) % trials)];
        if (a.blew_up) broken[i] = 1;
        decay[i] = std::max(decay[i], check_decay(a, spec, is.cert.rate));
        contraction[i] = std::max(contraction[i], check_contraction(a, b, spec, is.cert.rate));
      }
    }
  });
  std::size_t bad = 0;
  std::string first;
  for (std::size_t i = 0; i < n; ++i)
    if (broken[i] || decay[i] > 1.001 || contraction[i] > 1.001) {
      ++bad;
      if (first.empty())
        first = " (first: " + g_issued[i].origin + " decay " + fmt("%.6g", decay[i]) + " contraction " +
                fmt("%.6g", contraction[i]) + ")";
    }
  const double wd = n ? *std::max_element(decay.begin(), decay.end()) : 0.0;
  const double wc = n ? *std::max_element(contraction.begin(), contraction.end()) : 0.0;
  return {n > 0 && bad == 0, std::to_string(n) + " certificates × 5 nonlinearities × 10 starts, failures " +
                                 std::to_string(bad) + ", max decay " + fmt("%.6g", wd) + ", max contraction " +
                                 fmt("%.6g", wc) + first};
}

// ---------------------------------------------------------------- 9

Outcome log_norms() {
  const std::size_t n = 1000;
  std::vector<double> lumer(n), limit(n), mu2(n);
  for_each_index(n, Execution::parallel, [&](std::size_t i) {
    std::mt19937_64 rng(90000 + i);
    const int dim = 1 + static_cast<int>(i % 8);
    const Matrix a = oracle::gaussian(dim, dim, rng);
    double e1 = 0.0, e2 = 0.0;
    for (double p : {1.0, kInf}) {
      const double mu = log_norm(a, NormSpec(p));
      const double closed = p == 1.0 ? oracle::mu1(a) : oracle::mu_inf(a);
      const double scale = std::max(1.0, std::abs(mu));
      e1 = std::max({e1, std::abs(lumer_enumeration(a, p, false).value - mu) / scale, std::abs(closed - mu) / scale});
      e2 = std::max(e2, std::abs(log_norm_limit_estimate(a, NormSpec(p), 1e-6) - mu));
    }
    const double m2 = log_norm(a, NormSpec(2.0));
    e2 = std::max(e2, std::abs(log_norm_limit_estimate(a, NormSpec(2.0), 1e-6) - m2));
    lumer[i] = e1;
    limit[i] = e2;
    mu2[i] = std::abs(m2 - oracle::mu2(a)) / std::max(1.0, std::abs(m2));
  });
  const double w1 = *std::max_element(lumer.begin(), lumer.end());
  const double w2 = *std::max_element(limit.begin(), limit.end());
  const double w3 = *std::max_element(mu2.begin(), mu2.end());
  return {w1 <= 1e-12 && w2 <= 1e-4 && w3 <= 1e-10, "max Lumer/closed-form diff " + fmt("%.3g", w1) +
                                                        ", max limit diff " + fmt("%.3g", w2) + ", max μ₂ diff " +
                                                        fmt("%.3g", w3)};
}

// ---------------------------------------------------------------- 10

// ⟦Mx, x⟧₁ for x ≥ 0 with ‖x‖₁ = 1: Σ_{i ∈ supp x} (Mx)_i
double simplex_form(const Matrix& m, const Vector& x) {
  const Vector mx = m * x;
  double v = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) > 0.0) v += mx(i);
  return v;
}

Outcome metzler_log_norm() {
  const std::size_t n = 200;
  const int g = 40;
  std::vector<double> conic_diff(n), grid_gap(n), grid_bound(n);
  for_each_index(n, Execution::parallel, [&](std::size_t i) {
    std::mt19937_64 rng(100000 + i);
    const int dim = 2 + static_cast<int>(i % 3);
    Matrix a = oracle::gaussian(dim, dim, rng);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        if (r != c) a(r, c) = std::abs(a(r, c));
    const double mu = log_norm(a, NormSpec(1.0));
    conic_diff[i] = std::abs(mu - conic_log_norm(a, NormSpec(1.0)));
    // interior grid points of the simplex: all coordinates ≥ 1/g
    double best = -kInf;
    std::vector<int> k(static_cast<std::size_t>(dim), 1);
    std::function<void(int, int)> walk = [&](int pos, int left) {
      if (pos == dim - 1) {
        if (left < 1) return;
        k[static_cast<std::size_t>(pos)] = left;
        Vector x(dim);
        for (int j = 0; j < dim; ++j) x(j) = k[static_cast<std::size_t>(j)] / static_cast<double>(g);
        best = std::max(best, two_form(a, x, NormSpec(1.0)));
        return;
      }
      for (int v = 1; v <= left - (dim - 1 - pos); ++v) {
        k[static_cast<std::size_t>(pos)] = v;
        walk(pos + 1, left - v);
      }
    };
    walk(0, g);
    grid_gap[i] = mu - best;
    // on the simplex the form is Σ_j s_j x_j with column sums s; the best interior
    // point next to the best vertex loses Σ_{k≠j} (s_j − s_k)/g
    const Vector sums = a.colwise().sum().transpose();
    grid_bound[i] = (dim - 1) * (sums.maxCoeff() - sums.minCoeff()) / g + 1e-12;
  });

  std::size_t concave_fail = 0, form_mismatch = 0;
  std::mt19937_64 rng(110000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const int dim = 2 + t % 4;
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = u(rng);
    auto point = [&] {
      Vector x(dim);
      for (int j = 0; j < dim; ++j) x(j) = u(rng) < 0.3 ? 0.0 : u(rng);
      if (x.sum() == 0.0) x(0) = 1.0;
      return Vector(x / x.sum());
    };
    const Vector x0 = point(), x1 = point();
    const double th = u(rng);
    const Vector xt = (1.0 - th) * x0 + th * x1;
    const double f0 = two_form(m, x0, NormSpec(1.0)), f1 = two_form(m, x1, NormSpec(1.0));
    const double ft = two_form(m, xt, NormSpec(1.0));
    if (ft < (1.0 - th) * f0 + th * f1 - 1e-10) ++concave_fail;
    if (std::abs(ft - simplex_form(m, xt)) > 1e-12 * std::max(1.0, std::abs(ft))) ++form_mismatch;
  }

  std::size_t grid_bad = 0;
  for (std::size_t i = 0; i < n; ++i) grid_bad += (grid_gap[i] < -1e-12 || grid_gap[i] > grid_bound[i]) ? 1 : 0;
  const double wc = *std::max_element(conic_diff.begin(), conic_diff.end());
  return {wc == 0.0 && grid_bad == 0 && concave_fail == 0 && form_mismatch == 0,
          "max |μ₁ − μ₁⁺| " + fmt("%.3g", wc) + ", grid violations " + std::to_string(grid_bad) +
              ", concavity failures " + std::to_string(concave_fail) + "/10000, form mismatches " +
              std::to_string(form_mismatch)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "counterexamples exact", 1.0, counterexamples},
      {2, "weak duality fuzz", 60.0, weak_duality_fuzz},
      {3, "Metzler l1 zero gap", 30.0, metzler_suite},
      {4, "l2 Yakubovich zero gap", 60.0, yakubovich_suite},
      {5, "symmetrization three-way equivalence", 30.0, symmetrization_suite},
      {6, "positive-system exactness", 0.0, positive_system},
      {7, "circle criterion on a scalar loop", 0.0, circle_scalar},
      {8, "certificate soundness by simulation", 120.0, simulation_soundness},
      {9, "log-norm oracle agreement", 0.0, log_norms},
      {10, "Metzler log norm and concavity", 0.0, metzler_log_norm},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %2d %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs,
                in_time ? "" : fmt(", over %.0f s budget", c.budget_s).c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
