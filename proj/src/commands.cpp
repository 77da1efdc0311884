#include "npsl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "npsl/error.hpp"
#include "npsl/instances.hpp"
#include "npsl/simulate.hpp"

namespace npsl {

namespace {

std::string num_text(const Json& v) {
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

double p_value(const Json& j) {
  const double p = number_from_json(j, "p");
  require(p >= 1.0, ErrorCode::invalid_argument, "p must be in [1, ∞]");
  return p;
}

/// identity | perron | diag:r1,r2,... | json:path (matrix or list of diagonal entries)
struct WeightSpec {
  enum class Kind { identity, perron, fixed } kind = Kind::identity;
  Matrix r;
};

WeightSpec parse_weight(const Json& j) {
  WeightSpec w;
  if (j.is_array()) {
    w.kind = WeightSpec::Kind::fixed;
    w.r = j.front().is_array() ? matrix_from_json(j, "weight") : Matrix(vector_from_json(j, "weight").asDiagonal());
    return w;
  }
  require(j.is_string(), ErrorCode::invalid_argument, "weight: expected identity, perron, diag:... or json:...");
  const std::string s = j.get<std::string>();
  if (s == "identity") return w;
  if (s == "perron") {
    w.kind = WeightSpec::Kind::perron;
    return w;
  }
  if (s.rfind("diag:", 0) == 0) {
    std::vector<double> d;
    std::stringstream ss(s.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        d.push_back(std::stod(item));
      } catch (const std::exception&) {
        fail(ErrorCode::invalid_argument, "weight: cannot parse '" + item + "' in " + s);
      }
    }
    require(!d.empty(), ErrorCode::invalid_argument, "weight: empty diagonal");
    w.kind = WeightSpec::Kind::fixed;
    w.r = Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size())).asDiagonal();
    return w;
  }
  if (s.rfind("json:", 0) == 0) {
    const Json m = load_json_file(s.substr(5));
    return parse_weight(m.is_object() && m.contains("weight") ? m["weight"] : m);
  }
  fail(ErrorCode::invalid_argument, "weight: unknown mode '" + s + "'");
}

WeightChoice to_choice(const WeightSpec& w) {
  switch (w.kind) {
    case WeightSpec::Kind::identity: return WeightChoice::identity();
    case WeightSpec::Kind::perron: return WeightChoice::perron();
    case WeightSpec::Kind::fixed: return WeightChoice::fixed(w.r);
  }
  return WeightChoice::identity();
}

// Diagonal weight from the Perron pair of ⌈A⌉, r_i = w_i^{1/p} v_i^{-1/q}.
Matrix perron_matrix_weight(const Matrix& a, double p) {
  Matrix mj = metzler_majorant(a);
  if (!is_irreducible(mj))
    for (Eigen::Index j = 0; j < mj.cols(); ++j)
      for (Eigen::Index i = 0; i < mj.rows(); ++i)
        if (i != j && mj(i, j) == 0.0) mj(i, j) = 1e-12;
  const PerronPair pair = perron_pair(mj);
  const double inv_p = p == kInf ? 0.0 : 1.0 / p;
  Vector r(a.rows());
  for (Eigen::Index i = 0; i < r.size(); ++i)
    r(i) = std::pow(pair.left(i), inv_p) * std::pow(pair.right(i), -(1.0 - inv_p));
  r /= r(r.size() - 1);
  return r.asDiagonal();
}

bool uses_path(const Json& config, const std::string& name) {
  for (const auto& p : config["paths"])
    if (p.get<std::string>() == name) return true;
  return false;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::parse:
    case ErrorCode::invalid_argument:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::singular: return 2;
    default: return 1;
  }
}

const char* error_kind(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::singular: return "singular";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::approximate_only: return "approximate_only";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::hypothesis: return "hypothesis";
    case ErrorCode::parse: return "parse";
  }
  return "error";
}

}  // namespace

std::vector<double> parse_p_list(const Json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& e : j) {
      const auto more = parse_p_list(e);
      out.insert(out.end(), more.begin(), more.end());
    }
  } else if (j.is_string() && j.get<std::string>().find(',') != std::string::npos) {
    std::stringstream ss(j.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(p_value(parse_p_list(Json(item)).front()));
  } else if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "-inf") {
      out.push_back(p_value(j));
    } else {
      try {
        out.push_back(p_value(std::stod(s)));
      } catch (const std::invalid_argument&) {
        fail(ErrorCode::invalid_argument, "p: cannot parse '" + s + "'");
      }
    }
  } else {
    out.push_back(p_value(j));
  }
  require(!out.empty(), ErrorCode::invalid_argument, "p: empty list");
  return out;
}

Json default_config(const std::string& command) {
  Json c;
  if (command == "lognorm") {
    c["p"] = 2.0;
    c["weight"] = "identity";
    c["limit_h"] = 1e-6;
    c["samples"] = 20000;
    c["seed"] = 1;
  } else if (command == "slemma") {
    c["seed"] = 1;
    c["samples"] = 2000;
    c["polish_starts"] = 3;
    c["exact_max_dim"] = 8;
    c["tol"] = 1e-6;
  } else if (command == "certify") {
    c["paths"] = {"metzler", "lp_dual", "l2_schur", "l2_symmetrization", "circle"};
    c["p"] = Json::array({1.0, 2.0, "inf"});
    c["weight"] = "perron";
    c["rate_search"] = true;
    c["tol"] = 1e-8;
    c["min_rate"] = 1e-6;
    c["grid"] = 2000;
    c["aizerman_grid"] = 201;
    c["cert_out"] = "";
  } else if (command == "validate") {
    c["T"] = 10.0;
    c["dt"] = 1e-3;
    c["trials"] = 10;
    c["seed"] = 1;
    c["tol"] = 1e-3;
    c["nonlinearities"] = {"edge_gain", "saturation", "deadzone", "tanh", "switched"};
  } else if (command == "repro") {
    c["seed"] = 1;
    c["suite_size"] = 50;
  } else {
    fail(ErrorCode::invalid_argument, "unknown command '" + command + "'");
  }
  return c;
}

Json merge_config(const Json& base, const Json& overlay, const std::string& command) {
  Json out = base;
  if (overlay.is_null()) return out;
  require(overlay.is_object(), ErrorCode::invalid_argument, "config overlay must be a JSON object");
  for (const auto& [k, v] : overlay.items()) {
    require(base.contains(k), ErrorCode::invalid_argument, "unknown setting '" + k + "' for " + command);
    out[k] = v;
  }
  return out;
}

CommandResult cmd_lognorm(const std::string& file, const Json& config) {
  const Matrix a = matrix_file_from_json(load_json_file(file));
  require_square(a, "matrix");
  require_finite(a, "matrix");
  const double p = p_value(config["p"]);
  const WeightSpec ws = parse_weight(config["weight"]);
  Matrix r = Matrix::Identity(a.rows(), a.cols());
  if (ws.kind == WeightSpec::Kind::perron) r = perron_matrix_weight(a, p);
  if (ws.kind == WeightSpec::Kind::fixed) r = ws.r;
  require(r.rows() == a.rows() && r.cols() == a.cols(), ErrorCode::dimension_mismatch, "weight: must be n×n");
  const NormSpec spec(p, r);

  CommandResult res;
  Json& j = res.report;
  j["command"] = "lognorm";
  j["input"] = file;
  j["p"] = number_to_json(p);
  j["weight"] = matrix_to_json(r);
  if (spec.exact_log_norm()) {
    j["mu"] = log_norm(a, spec);
    j["approximate"] = false;
    if (spec.is_one() || spec.is_inf()) {
      if (spec.diagonal_weight() || !spec.weighted())
        j["mu_conic"] = conic_log_norm(a, spec);
      const LumerResult lum = lumer_enumeration(spec.similarity(a), p, false);
      j["lumer"] = lum.value;
    }
    const double lim = log_norm_limit_estimate(a, spec, config["limit_h"].get<double>());
    j["limit_estimate"] = lim;
    j["limit_difference"] = std::abs(lim - j["mu"].get<double>());
  } else {
    j["mu"] = log_norm_sampled(spec.similarity(a), p, config["samples"].get<int>(), config["seed"].get<std::uint64_t>());
    j["approximate"] = true;
    j["note"] = "p ∉ {1, 2, ∞}: sampled lower bound of the log norm";
  }
  return res;
}

CommandResult cmd_slemma(const std::string& file, const Json& config) {
  const FormFamily fam = family_from_json(load_json_file(file));
  PrimalBudget budget;
  budget.seed = config["seed"].get<std::uint64_t>();
  budget.samples = config["samples"].get<int>();
  budget.polish_starts = config["polish_starts"].get<int>();
  budget.exact_max_dim = config["exact_max_dim"].get<int>();
  const double tol = config["tol"].get<double>();
  require(tol > 0.0, ErrorCode::invalid_argument, "tol must be positive");

  const PrimalEstimate primal = primal_oracle(fam, budget);
  const DualSolution dual = solve_dual(fam);

  CommandResult res;
  Json& j = res.report;
  j["command"] = "slemma";
  j["input"] = file;
  j["p"] = number_to_json(fam.spec.p());
  j["conic"] = fam.conic;
  j["n"] = fam.dim();
  j["s"] = fam.constraints();
  j["alpha"] = number_to_json(primal.alpha_lower);
  j["alpha_exact"] = primal.exact;
  j["witness"] = vector_to_json(primal.witness);
  j["beta"] = number_to_json(dual.beta);
  j["tau"] = vector_to_json(dual.tau);
  j["dual_status"] = to_string(dual.status);
  j["gap"] = number_to_json(dual.beta - primal.alpha_lower);
  const bool weak_ok = !(primal.alpha_lower > dual.beta + 1e-7);
  j["weak_duality"] = weak_ok;
  if (!weak_ok) res.exit_code = 1;

  Json zero = Json::array();
  auto attempt = [&](const char* name, auto&& fn) {
    Json e;
    e["lemma"] = name;
    try {
      const ZeroGapResult z = fn();
      e["applies"] = true;
      e["alpha"] = z.alpha;
      e["beta"] = z.beta;
      e["gap"] = z.gap;
      e["holds"] = z.gap_within_tolerance;
      if (!z.gap_within_tolerance) res.exit_code = 1;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::hypothesis) throw;
      e["applies"] = false;
      e["reason"] = err.what();
    }
    zero.push_back(std::move(e));
  };
  attempt("metzler_l1", [&] { return metzler_zero_gap(fam, tol); });
  attempt("yakubovich_l2", [&] { return yakubovich_zero_gap(fam, std::max(tol, 1e-4)); });
  j["zero_gap"] = std::move(zero);
  return res;
}

CommandResult cmd_certify(const std::string& file, const Json& config) {
  const LureSystem sys = system_from_json(load_json_file(file));
  const NormalizedLure nl = normalize_sector(sys);
  const LureSystem& ns = nl.system;
  const std::vector<double> ps = parse_p_list(config["p"]);
  const WeightChoice weight = to_choice(parse_weight(config["weight"]));
  const bool search = config["rate_search"].get<bool>();
  const double tol = config["tol"].get<double>();
  const double min_rate = config["min_rate"].get<double>();
  require(tol > 0.0 && min_rate >= 0.0, ErrorCode::invalid_argument, "tol must be positive, min_rate nonnegative");
  for (const auto& p : config["paths"]) {
    const std::string name = p.get<std::string>();
    require(name == "metzler" || name == "lp_dual" || name == "l2_schur" || name == "l2_symmetrization" || name == "circle",
            ErrorCode::invalid_argument, "unknown path '" + name + "'");
  }

  CommandResult res;
  res.exit_code = 1;
  Json& j = res.report;
  j["command"] = "certify";
  j["input"] = file;
  j["states"] = ns.states();
  j["channels"] = ns.channels();
  Json subs = Json::array();
  for (const auto& s : nl.substitutions)
    subs.push_back(s.kind == ChannelSubstitution::Kind::none    ? "none"
                   : s.kind == ChannelSubstitution::Kind::shift ? "shift"
                                                                : "flip");
  j["substitutions"] = std::move(subs);

  Json entries = Json::array();
  const Certificate* best = nullptr;
  std::vector<Certificate> kept;
  auto record = [&](const std::string& path, Certificate cert, double c_star, int evals) {
    Json e;
    e["path"] = path;
    e["p"] = number_to_json(cert.p);
    const bool certified = cert.issued() && (cert.method == CertMethod::circle || cert.rate >= min_rate);
    e["certified"] = certified;
    e["status"] = to_string(cert.status);
    e["rate"] = cert.rate;
    if (search && evals > 0) {
      e["c_star"] = c_star;
      e["evaluations"] = evals;
    }
    if (!cert.reason.empty()) e["reason"] = cert.reason;
    if (cert.issued() && !certified) e["reason"] = "rate below min_rate";
    if (cert.issued()) {
      const VerifyReport v = verify_certificate(cert);
      e["verified"] = v.ok;
      e["verify_detail"] = v.detail;
    }
    e["certificate"] = certificate_to_json(cert);
    entries.push_back(std::move(e));
    if (certified) {
      res.exit_code = 0;
      kept.push_back(std::move(cert));
    }
  };
  auto refused = [&](const std::string& path, double p, const Error& err) {
    if (err.code() != ErrorCode::hypothesis && err.code() != ErrorCode::unsupported) throw err;
    Json e;
    e["path"] = path;
    e["p"] = number_to_json(p);
    e["certified"] = false;
    e["status"] = "refused";
    e["reason"] = err.what();
    entries.push_back(std::move(e));
  };

  for (const char* path : {"metzler", "lp_dual", "l2_schur"}) {
    if (!uses_path(config, path)) continue;
    const RatePath rp = std::string(path) == "metzler" ? RatePath::metzler
                        : std::string(path) == "lp_dual" ? RatePath::lp_dual
                                                         : RatePath::l2_schur;
    const std::vector<double> plist = rp == RatePath::l2_schur ? std::vector<double>{2.0} : ps;
    for (double p : plist) {
      try {
        if (search) {
          const RateResult r = max_certified_rate(ns, rp, p, weight, tol);
          record(path, r.cert, r.c_star, r.evaluations);
        } else {
          Certificate c = rp == RatePath::metzler  ? metzler_path(ns, p, min_rate)
                          : rp == RatePath::lp_dual ? certify_lp_dual(ns, p, weight, min_rate)
                                                    : certify_l2_schur(ns, min_rate);
          record(path, std::move(c), 0.0, 0);
        }
      } catch (const Error& err) {
        refused(path, p, err);
      }
    }
  }
  if (uses_path(config, "l2_symmetrization")) {
    try {
      record("l2_symmetrization", certify_l2_symmetrization(ns), 0.0, 0);
    } catch (const Error& err) {
      refused("l2_symmetrization", 2.0, err);
    }
  }
  if (uses_path(config, "circle")) {
    try {
      record("circle", circle_halfplane(ns, config["grid"].get<int>(), Execution::parallel), 0.0, 0);
    } catch (const Error& err) {
      refused("circle", 2.0, err);
    }
  }
  j["paths"] = std::move(entries);

  Json az;
  try {
    const AizermanScan scan = aizerman_scan(sys, config["aizerman_grid"].get<int>());
    az["hurwitz_all"] = scan.hurwitz_all;
    az["worst_abscissa"] = scan.worst_abscissa;
    az["worst_gain"] = scan.worst_gain;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::hypothesis) throw;
    az["hurwitz_all"] = nullptr;
    az["reason"] = err.what();
  }
  j["aizerman"] = std::move(az);

  for (const auto& c : kept) {
    auto rank = [](const Certificate& x) { return std::make_pair(x.status == CertStatus::certified_exact, x.rate); };
    if (!best || rank(c) > rank(*best)) best = &c;
  }
  j["certified"] = best != nullptr;
  if (best) {
    j["best"] = {{"method", to_string(best->method)}, {"p", number_to_json(best->p)}, {"rate", best->rate}};
    const std::string out = config["cert_out"].get<std::string>();
    if (!out.empty()) {
      std::ofstream os(out);
      require(os.good(), ErrorCode::invalid_argument, "cannot write '" + out + "'");
      os << certificate_to_json(*best).dump(2) << "\n";
      j["cert_out"] = out;
    }
  }
  return res;
}

namespace {

struct ClassShape {
  double base;   // φ = base·y + sign·ψ(y), ψ in [0, width]
  double sign;
  double width;
};

ClassShape class_shape(double zeta, double kappa) {
  if (std::isfinite(zeta) && std::isfinite(kappa)) return {zeta, 1.0, kappa - zeta};
  if (std::isfinite(zeta)) return {zeta, 1.0, 10.0};
  if (std::isfinite(kappa)) return {kappa, -1.0, 10.0};
  return {-5.0, 1.0, 10.0};
}

Nonlinearity in_class(const std::string& name, double zeta, double kappa, double horizon) {
  const ClassShape s = class_shape(zeta, kappa);
  auto wrap = [&](const Nonlinearity& psi) { return Nonlinearity::transformed(psi, s.base, s.sign); };
  if (name == "edge_gain") return Nonlinearity::linear_gain(s.base + s.sign * s.width);
  if (name == "saturation") return wrap(Nonlinearity::saturation(1.0, s.width));
  if (name == "deadzone") return wrap(Nonlinearity::deadzone(0.5, s.width));
  if (name == "tanh") return wrap(Nonlinearity::scaled_tanh(s.width));
  if (name == "switched")
    return wrap(Nonlinearity::switched({Nonlinearity::saturation(0.5, s.width), Nonlinearity::linear_gain(0.0),
                                        Nonlinearity::scaled_tanh(s.width), Nonlinearity::deadzone(0.2, s.width)},
                                       {horizon / 4.0, horizon / 2.0, 3.0 * horizon / 4.0}));
  fail(ErrorCode::invalid_argument, "unknown nonlinearity '" + name + "'");
}

}  // namespace

CommandResult cmd_validate(const std::string& file, const std::string& cert_file, const Json& config) {
  const LureSystem sys = system_from_json(load_json_file(file));
  const Certificate cert = certificate_from_json(load_json_file(cert_file));
  const LureSystem ns = normalize_sector(sys).system;
  auto same = [](const Matrix& x, const Matrix& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() &&
           (x.size() == 0 || (x - y).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()));
  };
  require(same(ns.a, cert.system.a) && same(ns.b, cert.system.b) && same(ns.c, cert.system.c) &&
              ns.kappa.size() == cert.system.kappa.size() && ns.kappa == cert.system.kappa,
          ErrorCode::dimension_mismatch, "certificate/system mismatch: the certificate was issued for another system");

  const double horizon = config["T"].get<double>();
  const double dt = config["dt"].get<double>();
  const int trials = config["trials"].get<int>();
  const double tol = config["tol"].get<double>();
  require(horizon > 0.0 && dt > 0.0 && trials >= 1 && tol > 0.0, ErrorCode::invalid_argument,
          "T, dt, trials and tol must be positive");

  CommandResult res;
  Json& j = res.report;
  j["command"] = "validate";
  j["input"] = file;
  j["certificate"] = cert_file;
  j["method"] = to_string(cert.method);
  j["p"] = number_to_json(cert.p);
  j["rate"] = cert.rate;
  const VerifyReport v = verify_certificate(cert);
  j["verified"] = v.ok;
  j["verify_detail"] = v.detail;

  Rng rng(config["seed"].get<std::uint64_t>());
  std::vector<Vector> starts;
  for (int t = 0; t < trials; ++t) starts.push_back(random_gaussian(sys.states(), 1, rng));

  std::vector<std::string> names;
  for (const auto& n : config["nonlinearities"]) names.push_back(n.get<std::string>());
  std::vector<SimRun> runs;
  for (const auto& name : names) {
    std::vector<Nonlinearity> phi;
    for (Eigen::Index i = 0; i < sys.channels(); ++i) phi.push_back(in_class(name, sys.zeta(i), sys.kappa(i), horizon));
    for (int t = 0; t < trials; ++t) runs.push_back({phi, starts[static_cast<std::size_t>(t)]});
  }
  const std::vector<Trajectory> trajs = integrate_batch(sys, runs, horizon, dt, Execution::parallel);

  const NormSpec spec = cert.state_spec();
  Json rows = Json::array();
  double worst_decay = 0.0, worst_contraction = 0.0;
  bool blew_up = false;
  for (std::size_t k = 0; k < names.size(); ++k) {
    for (int t = 0; t < trials; ++t) {
      const Trajectory& a = trajs[k * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      const Trajectory& b = trajs[k * static_cast<std::size_t>(trials) + static_cast<std::size_t>((t + 1) % trials)];
      Json r;
      r["nonlinearity"] = names[k];
      r["trial"] = t;
      r["blew_up"] = a.blew_up;
      blew_up = blew_up || a.blew_up;
      if (!a.blew_up && !b.blew_up) {
        const double d = check_decay(a, spec, cert.rate);
        r["decay"] = d;
        worst_decay = std::max(worst_decay, d);
        if (trials > 1) {
          const double c = check_contraction(a, b, spec, cert.rate);
          r["contraction"] = c;
          worst_contraction = std::max(worst_contraction, c);
        }
      }
      rows.push_back(std::move(r));
    }
  }
  j["runs"] = std::move(rows);
  j["max_decay"] = worst_decay;
  j["max_contraction"] = worst_contraction;
  const bool ok = v.ok && !blew_up && worst_decay <= 1.0 + tol && worst_contraction <= 1.0 + tol;
  j["ok"] = ok;
  res.exit_code = ok ? 0 : 1;
  return res;
}

CommandResult cmd_repro(const Json& config) {
  CommandResult res;
  Json& j = res.report;
  j["command"] = "repro";
  Json rows = Json::array();
  bool all = true;
  auto row = [&](const std::string& check, double expected, double got, double tol) {
    const bool pass = std::abs(expected - got) <= tol;
    all = all && pass;
    rows.push_back({{"check", check}, {"expected", expected}, {"got", number_to_json(got)}, {"tol", tol}, {"pass", pass}});
  };

  const struct {
    const char* name;
    double alpha, beta;
  } examples[] = {{"example1", 0.0, 1.0}, {"example2a", 0.0, 0.5}, {"example2b", 1.0, 1.25}};
  for (const auto& ex : examples) {
    const FormFamily f = named_family(ex.name);
    const PrimalEstimate pr = primal_oracle(f);
    const DualSolution du = solve_dual(f);
    row(std::string(ex.name) + " alpha+", ex.alpha, pr.alpha_lower, 1e-9);
    row(std::string(ex.name) + " beta+", ex.beta, du.beta, 1e-9);
    row(std::string(ex.name) + " gap", ex.beta - ex.alpha, du.beta - pr.alpha_lower, 1e-9);
  }

  const int n_suite = config["suite_size"].get<int>();
  const auto seed = config["seed"].get<std::uint64_t>();
  std::vector<double> metzler_gaps(static_cast<std::size_t>(n_suite), kInf);
  std::vector<double> l2_gaps(static_cast<std::size_t>(n_suite), kInf);
  for_each_index(static_cast<std::size_t>(n_suite), Execution::parallel, [&](std::size_t i) {
    Rng rng(seed * 1000003ULL + i);
    const FormFamily mf = random_metzler_family(uniform_int(2, 5, rng), uniform_int(1, 3, rng), rng);
    const ZeroGapResult mz = metzler_zero_gap(mf);
    metzler_gaps[i] = std::abs(mz.alpha - mz.beta);
    const FormFamily yf = random_yakubovich_family(uniform_int(2, 5, rng), rng);
    const ZeroGapResult yz = yakubovich_zero_gap(yf, 1e-4);
    PrimalBudget budget;
    budget.seed = seed + i;
    l2_gaps[i] = std::abs(primal_oracle(yf, budget).alpha_lower - yz.beta);
  });
  row("metzler l1 zero gap (max over suite)", 0.0, *std::max_element(metzler_gaps.begin(), metzler_gaps.end()), 1e-6);
  row("l2 zero gap (max over suite)", 0.0, *std::max_element(l2_gaps.begin(), l2_gaps.end()), 1e-4);

  const double c_target = (5.0 - std::sqrt(21.0)) / 2.0;
  const LureSystem pos = positive_example(5.0);
  row("positive system c* (metzler, p=1)", c_target,
      max_certified_rate(pos, RatePath::metzler, 1.0, WeightChoice::perron()).c_star, 1e-6);
  row("positive system c* (dual, p=1)", c_target,
      max_certified_rate(pos, RatePath::lp_dual, 1.0, WeightChoice::perron()).c_star, 1e-6);
  row("scalar circle max Re G", 1.0, circle_halfplane(scalar_example(0.9)).metrics.at("max_re"), 1e-6);

  j["checks"] = std::move(rows);
  j["all_pass"] = all;
  res.exit_code = all ? 0 : 1;
  return res;
}

CommandResult run_command(const std::string& command, const std::string& file, const std::string& cert_file,
                          const Json& config) {
  try {
    const Json cfg = merge_config(default_config(command), config, command);
    if (command != "repro") require(!file.empty(), ErrorCode::invalid_argument, command + ": input file required");
    if (command == "lognorm") return cmd_lognorm(file, cfg);
    if (command == "slemma") return cmd_slemma(file, cfg);
    if (command == "certify") return cmd_certify(file, cfg);
    if (command == "validate") {
      require(!cert_file.empty(), ErrorCode::invalid_argument, "validate: --cert file required");
      return cmd_validate(file, cert_file, cfg);
    }
    return cmd_repro(cfg);
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_for(e);
    r.report = {{"command", command}, {"error", error_kind(e.code())}, {"message", e.what()}};
    return r;
  } catch (const nlohmann::json::exception& e) {
    CommandResult r;
    r.exit_code = 2;
    r.report = {{"command", command}, {"error", "parse"}, {"message", e.what()}};
    return r;
  }
}

std::string render_text(const Json& report) {
  std::ostringstream os;
  std::size_t width = 0;
  for (const auto& [k, v] : report.items())
    if (!v.is_structured() || (v.is_array() && !v.empty() && !v.front().is_object())) width = std::max(width, k.size());

  for (const auto& [k, v] : report.items()) {
    if (!v.is_structured()) {
      os << k << std::string(width - k.size() + 2, ' ') << num_text(v) << "\n";
    } else if (v.is_array() && (v.empty() || !v.front().is_object())) {
      os << k << std::string(width - k.size() + 2, ' ');
      std::string sep;
      for (const auto& e : v) {
        os << sep << (e.is_structured() ? e.dump() : num_text(e));
        sep = " ";
      }
      os << "\n";
    }
  }
  for (const auto& [k, v] : report.items()) {
    if (v.is_object()) {
      os << "\n[" << k << "]\n";
      Json flat = Json::object();
      for (const auto& [kk, vv] : v.items())
        if (!vv.is_object()) flat[kk] = vv;
      os << render_text(flat);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      std::vector<std::string> cols;
      for (const auto& row : v)
        for (const auto& [kk, vv] : row.items())
          if (!vv.is_structured() && std::find(cols.begin(), cols.end(), kk) == cols.end()) cols.push_back(kk);
      std::vector<std::vector<std::string>> cells;
      std::vector<std::size_t> w(cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) w[c] = cols[c].size();
      for (const auto& row : v) {
        std::vector<std::string> line;
        for (std::size_t c = 0; c < cols.size(); ++c) {
          line.push_back(row.contains(cols[c]) ? num_text(row[cols[c]]) : "-");
          w[c] = std::max(w[c], line.back().size());
        }
        cells.push_back(std::move(line));
      }
      os << "\n[" << k << "]\n";
      auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t c = 0; c < line.size(); ++c)
          os << line[c] << (c + 1 < line.size() ? std::string(w[c] - line[c].size() + 2, ' ') : "");
        os << "\n";
      };
      emit(cols);
      for (const auto& line : cells) emit(line);
    }
  }
  return os.str();
}

}  // namespace npsl
