#include "npsl/lure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "npsl/error.hpp"
#include "npsl/frequency.hpp"
#include "npsl/scalar_min.hpp"

namespace npsl {

namespace {

constexpr double kCertifySlack = 1e-10;
constexpr double kVerifySlack = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_normalized(const LureSystem& sys, const char* who) {
  validate_system(sys);
  require(sys.normalized(), ErrorCode::invalid_argument,
          std::string(who) + ": sector must be normalized to ζ = 0 (run normalize_sector)");
}

bool finite_kappa(const LureSystem& sys) { return sys.kappa.allFinite(); }

Certificate blank(const LureSystem& sys, CertMethod method, double p, double c) {
  Certificate cert;
  cert.method = method;
  cert.p = p;
  cert.rate = c;
  cert.system = sys;
  cert.weight = Matrix::Identity(sys.states(), sys.states());
  cert.input_weight = Vector::Ones(sys.channels());
  cert.tau = Vector::Zero(sys.channels());
  return cert;
}

Certificate refuse(Certificate cert, const std::string& reason) {
  cert.status = CertStatus::refused;
  cert.reason = reason;
  return cert;
}

// max_i D_i ϰ_i ‖C_i R⁻¹‖∞; the ℓ∞ transcription needs it < 1.
double inf_side_condition(const LureSystem& sys, const Matrix& r, const Vector& d) {
  const Matrix cr = sys.c * inverse(r);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < sys.channels(); ++i)
    worst = std::max(worst, d(i) * sys.kappa(i) * cr.row(i).cwiseAbs().sum());
  return worst;
}

const char* kInfSideReason = "requires ϰ‖CR⁻¹‖∞ < 1 (ℓ∞ transcription of the sector constraint)";

// Strict Schur form λ_max(Aˢ + cI + (ϰ/4τ)(B + τCᵀ)(Bᵀ + τC)).
double schur_form(const Matrix& as, const Vector& b, const Vector& ct, double kappa, double c, double tau) {
  const Vector v = b + tau * ct;
  const Matrix m = as + c * Matrix::Identity(as.rows(), as.rows()) + (kappa / (4.0 * tau)) * v * v.transpose();
  return lambda_max_sym(m);
}

ScalarMin minimize_schur(const LureSystem& sys, double c) {
  const Matrix as = symmetric_part(sys.a);
  const Vector b = sys.b.col(0);
  const Vector ct = sys.c.row(0).transpose();
  const double kappa = sys.kappa(0);
  return golden_section([&](double s) { return schur_form(as, b, ct, kappa, c, std::exp(s)); }, -50.0, 50.0, 1e-10);
}

}  // namespace

void validate_system(const LureSystem& sys) {
  require_square(sys.a, "A");
  require_finite(sys.b, "B");
  require_finite(sys.c, "C");
  const Eigen::Index d = sys.a.rows();
  const Eigen::Index m = sys.b.cols();
  require(sys.b.rows() == d, ErrorCode::dimension_mismatch, "B must have as many rows as A");
  require(sys.c.rows() == m && sys.c.cols() == d, ErrorCode::dimension_mismatch, "C must be m×d with m = columns of B");
  require(sys.zeta.size() == m && sys.kappa.size() == m, ErrorCode::dimension_mismatch,
          "zeta and kappa need one entry per channel");
  for (Eigen::Index i = 0; i < m; ++i) {
    const double z = sys.zeta(i), k = sys.kappa(i);
    require(!std::isnan(z) && !std::isnan(k), ErrorCode::invalid_argument, "sector bounds must not be NaN");
    require(z != kInf && k != -kInf, ErrorCode::invalid_argument, "sector bounds: ζ < +∞ and ϰ > −∞ required");
    require(z < k, ErrorCode::invalid_argument, "sector bounds: ζ < ϰ required on every channel");
    require(std::isfinite(z) || std::isfinite(k), ErrorCode::invalid_argument,
            "sector bounds: at least one of ζ, ϰ must be finite on every channel");
  }
}

NormalizedLure normalize_sector(const LureSystem& sys) {
  validate_system(sys);
  NormalizedLure out;
  out.system = sys;
  LureSystem& s = out.system;
  for (Eigen::Index i = 0; i < sys.channels(); ++i) {
    ChannelSubstitution sub;
    sub.zeta = sys.zeta(i);
    sub.kappa = sys.kappa(i);
    const double z = sys.zeta(i), k = sys.kappa(i);
    if (std::isfinite(z)) {
      if (z != 0.0) {
        sub.kind = ChannelSubstitution::Kind::shift;
        s.a += z * s.b.col(i) * s.c.row(i);
        s.kappa(i) = k - z;
      }
    } else {
      // w = ϰy − v with v in [0, ∞): ż = (A + ϰB_iC_i)z − B_i v.
      sub.kind = ChannelSubstitution::Kind::flip;
      s.a += k * s.b.col(i) * s.c.row(i);
      s.b.col(i) = -s.b.col(i);
      s.kappa(i) = kInf;
    }
    s.zeta(i) = 0.0;
    out.substitutions.push_back(sub);
  }
  return out;
}

double substitute_input(const ChannelSubstitution& sub, double y, double w) {
  switch (sub.kind) {
    case ChannelSubstitution::Kind::none: return w;
    case ChannelSubstitution::Kind::shift: return w - sub.zeta * y;
    case ChannelSubstitution::Kind::flip: return sub.kappa * y - w;
  }
  return w;
}

NormSpec extended_spec(double p, const std::optional<Matrix>& state_weight, const Vector& input_weight) {
  const bool unit_inputs = (input_weight.array() == 1.0).all();
  if (!state_weight && unit_inputs) return NormSpec(p);
  const Eigen::Index m = input_weight.size();
  require(state_weight.has_value(), ErrorCode::invalid_argument, "extended_spec: input weight without state weight");
  const Eigen::Index d = state_weight->rows();
  Matrix r = Matrix::Zero(d + m, d + m);
  r.topLeftCorner(d, d) = *state_weight;
  r.bottomRightCorner(m, m) = input_weight.asDiagonal();
  return NormSpec(p, r);
}

FormFamily build_forms(const LureSystem& sys, double c, const NormSpec& extended) {
  require_normalized(sys, "build_forms");
  const Eigen::Index d = sys.states();
  const Eigen::Index m = sys.channels();
  FormFamily fam;
  fam.spec = extended;
  fam.rho = Vector::Zero(m);
  Matrix p0 = Matrix::Zero(d + m, d + m);
  p0.topLeftCorner(d, d) = sys.a + c * Matrix::Identity(d, d);
  p0.topRightCorner(d, m) = sys.b;
  fam.forms.push_back(p0);
  for (Eigen::Index i = 0; i < m; ++i) {
    Matrix pi = Matrix::Zero(d + m, d + m);
    pi.block(d + i, 0, 1, d) = -sys.c.row(i);
    pi(d + i, d + i) = std::isfinite(sys.kappa(i)) ? 1.0 / sys.kappa(i) : 0.0;
    fam.forms.push_back(pi);
  }
  validate_family(fam);
  return fam;
}

const char* to_string(CertMethod m) {
  switch (m) {
    case CertMethod::lp_dual: return "lp_dual";
    case CertMethod::l2_schur: return "l2_schur";
    case CertMethod::l2_symmetrization: return "l2_symmetrization";
    case CertMethod::circle: return "circle";
    case CertMethod::metzler: return "metzler";
    case CertMethod::lmi_verify: return "lmi_verify";
  }
  return "unknown";
}

const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::certified_exact: return "certified_exact";
    case CertStatus::certified_sampled: return "certified_sampled";
    case CertStatus::refused: return "refused";
    case CertStatus::failed: return "failed";
  }
  return "unknown";
}

CertMethod method_from_string(const std::string& s) {
  for (CertMethod m : {CertMethod::lp_dual, CertMethod::l2_schur, CertMethod::l2_symmetrization, CertMethod::circle,
                       CertMethod::metzler, CertMethod::lmi_verify})
    if (s == to_string(m)) return m;
  fail(ErrorCode::parse, "unknown certificate method '" + s + "'");
}

CertStatus status_from_string(const std::string& s) {
  for (CertStatus st : {CertStatus::certified_exact, CertStatus::certified_sampled, CertStatus::refused, CertStatus::failed})
    if (s == to_string(st)) return st;
  fail(ErrorCode::parse, "unknown certificate status '" + s + "'");
}

ResolvedWeight resolve_weight(const LureSystem& sys, double p, const WeightChoice& choice, double c) {
  require_normalized(sys, "resolve_weight");
  const Eigen::Index d = sys.states();
  const Eigen::Index m = sys.channels();
  ResolvedWeight out;
  switch (choice.kind) {
    case WeightChoice::Kind::identity:
      out.state = Matrix::Identity(d, d);
      out.input = Vector::Ones(m);
      return out;
    case WeightChoice::Kind::fixed:
      require(choice.state_weight.rows() == d && choice.state_weight.cols() == d, ErrorCode::dimension_mismatch,
              "weight: state weight must be d×d");
      out.state = choice.state_weight;
      out.input = choice.input_weight.size() == 0 ? Vector::Ones(m) : choice.input_weight;
      require(out.input.size() == m && (out.input.array() > 0.0).all(), ErrorCode::invalid_argument,
              "weight: input weights must be positive, one per channel");
      return out;
    case WeightChoice::Kind::perron: break;
  }

  const FormFamily fam = build_forms(sys, c, NormSpec(p));
  Matrix mj = metzler_majorant(combined_form(fam, Vector::Constant(m, choice.perron_tau)));
  if (!is_irreducible(mj)) {
    require(!choice.strict_irreducible, ErrorCode::hypothesis,
            "Perron weight requires ⌈P(τ)⌉ irreducible (strict mode)");
    for (Eigen::Index j = 0; j < mj.cols(); ++j)
      for (Eigen::Index i = 0; i < mj.rows(); ++i)
        if (i != j && mj(i, j) == 0.0) mj(i, j) = 1e-12;
    out.notes.push_back("⌈P(τ)⌉ reducible: zero pattern perturbed by 1e-12 before the Perron step");
  }
  const PerronPair pair = perron_pair(mj);
  const double inv_p = p == kInf ? 0.0 : 1.0 / p;
  Vector r(d + m);
  for (Eigen::Index i = 0; i < d + m; ++i)
    r(i) = std::pow(pair.left(i), inv_p) * std::pow(pair.right(i), -(1.0 - inv_p));
  r /= r(d + m - 1);
  out.state = r.head(d).asDiagonal();
  out.input = r.tail(m);
  return out;
}

Certificate certify_lp_dual(const LureSystem& sys, double p, const WeightChoice& weight, double c) {
  require_normalized(sys, "certify_lp_dual");
  require(c >= 0.0, ErrorCode::invalid_argument, "certify_lp_dual: rate c must be nonnegative");
  Certificate cert = blank(sys, CertMethod::lp_dual, p, c);
  if (!(p == 1.0 || p == 2.0 || p == kInf))
    return refuse(cert, "requires p ∈ {1, 2, ∞} (exact log norms)");

  ResolvedWeight w;
  try {
    w = resolve_weight(sys, p, weight, c);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::hypothesis) throw;
    return refuse(cert, e.what());
  }
  cert.weight = w.state;
  cert.input_weight = w.input;
  cert.notes = w.notes;

  if (p == kInf) {
    cert.notes.push_back("ℓ∞ path is sufficient only");
    if (!finite_kappa(sys)) return refuse(cert, kInfSideReason);
    const double side = inf_side_condition(sys, w.state, w.input);
    cert.metrics["inf_side_condition"] = side;
    if (!(side < 1.0)) return refuse(cert, kInfSideReason);
  }

  const FormFamily fam = build_forms(sys, c, extended_spec(p, w.state, w.input));
  const DualSolution dual = solve_dual(fam);
  cert.tau = dual.tau;
  const double value = dual_objective(fam, dual.tau);
  cert.metrics["mu_min"] = value;
  cert.metrics["dual_iterations"] = dual.iterations;
  if (value <= kCertifySlack) {
    cert.status = CertStatus::certified_exact;
  } else {
    cert.status = CertStatus::failed;
    cert.reason = "min over τ ≥ 0 of μ_{p,R̃}(P(τ)) = " + fmt(value) + " > 0";
  }
  return cert;
}

Certificate certify_l2_schur(const LureSystem& sys, double c) {
  require_normalized(sys, "certify_l2_schur");
  Certificate cert = blank(sys, CertMethod::l2_schur, 2.0, c);
  if (sys.channels() != 1) return refuse(cert, "requires a single channel (scalar nonlinearity)");
  if (!finite_kappa(sys)) return refuse(cert, "requires ϰ < ∞ (Schur complement of the bottom-right entry)");
  const ScalarMin best = minimize_schur(sys, c);
  cert.tau(0) = std::exp(best.x);
  cert.metrics["lambda_max"] = best.value;
  if (best.value <= kCertifySlack) {
    cert.status = CertStatus::certified_exact;
  } else {
    cert.status = CertStatus::failed;
    cert.reason = "min over τ > 0 of the Schur form λ_max = " + fmt(best.value) + " > 0";
  }
  return cert;
}

Certificate metzler_path(const LureSystem& sys, double p, double c, const WeightChoice& options) {
  require_normalized(sys, "metzler_path");
  require(c >= 0.0, ErrorCode::invalid_argument, "metzler_path: rate c must be nonnegative");
  Certificate cert = blank(sys, CertMethod::metzler, p, c);
  if (!finite_kappa(sys)) return refuse(cert, "requires ϰ < ∞ (𝔄(ϰ) = ⌈A⌉ + ϰ|B||C|)");

  const Matrix frak = metzler_majorant(sys.a) + sys.b.cwiseAbs() * sys.kappa.asDiagonal() * sys.c.cwiseAbs();
  const double alpha = spectral_abscissa(frak);
  cert.metrics["alpha_frak"] = alpha;
  if (!(alpha < -c - 1e-12)) {
    cert.status = CertStatus::failed;
    cert.reason = "requires α(𝔄(ϰ)) < −c; α(𝔄(ϰ)) = " + fmt(alpha);
    return cert;
  }

  WeightChoice perron = WeightChoice::perron();
  perron.perron_tau = options.perron_tau;
  perron.strict_irreducible = options.strict_irreducible;
  ResolvedWeight w;
  try {
    w = resolve_weight(sys, p, perron, c);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::hypothesis) throw;
    return refuse(cert, e.what());
  }
  cert.weight = w.state;
  cert.input_weight = w.input;
  cert.notes = w.notes;
  cert.tau = Vector::Constant(sys.channels(), perron.perron_tau);

  if (p == kInf) {
    cert.notes.push_back("ℓ∞ path is sufficient only");
    const double side = inf_side_condition(sys, w.state, w.input);
    cert.metrics["inf_side_condition"] = side;
    if (!(side < 1.0)) return refuse(cert, kInfSideReason);
  }

  const FormFamily fam = build_forms(sys, c, extended_spec(p, w.state, w.input));
  const Matrix pt = combined_form(fam, cert.tau);
  if (p == 1.0 || p == 2.0 || p == kInf) {
    const double value = log_norm(pt, fam.spec);
    cert.metrics["mu"] = value;
    if (value <= kCertifySlack) {
      cert.status = CertStatus::certified_exact;
    } else {
      cert.status = CertStatus::failed;
      cert.reason = "Perron weight re-verification gave μ_{p,R̃}(P(τ)) = " + fmt(value) + " > 0";
    }
    return cert;
  }
  const double sampled = log_norm_sampled(fam.spec.similarity(pt), p, 4000, 7);
  cert.metrics["mu_sampled_lower_bound"] = sampled;
  cert.notes.push_back("p ∉ {1, 2, ∞}: log norm sampled (lower bound), certificate is approximate");
  if (sampled <= kCertifySlack) {
    cert.status = CertStatus::certified_sampled;
  } else {
    cert.status = CertStatus::failed;
    cert.reason = "sampled μ_{p,R̃}(P(τ)) = " + fmt(sampled) + " > 0";
  }
  return cert;
}

RateResult max_certified_rate(const LureSystem& sys, RatePath path, double p, const WeightChoice& weight, double tol) {
  require_normalized(sys, "max_certified_rate");
  RateResult out;
  auto certify = [&](double c) {
    ++out.evaluations;
    switch (path) {
      case RatePath::lp_dual: return certify_lp_dual(sys, p, weight, c);
      case RatePath::metzler: return metzler_path(sys, p, c, weight.kind == WeightChoice::Kind::perron ? weight : WeightChoice::perron());
      case RatePath::l2_schur: return certify_l2_schur(sys, c);
    }
    fail(ErrorCode::invalid_argument, "max_certified_rate: unknown path");
  };

  double c_hi = 0.0;
  if (path == RatePath::l2_schur) {
    c_hi = -lambda_max_sym(sys.a);
  } else if (path == RatePath::metzler || weight.kind == WeightChoice::Kind::perron || !(p == 1.0 || p == 2.0 || p == kInf)) {
    c_hi = -spectral_abscissa(sys.a);
  } else {
    const ResolvedWeight w = resolve_weight(sys, p, weight, 0.0);
    c_hi = -log_norm(sys.a, NormSpec(p, w.state));
  }

  Certificate lo_cert = certify(0.0);
  if (!lo_cert.issued()) {
    out.cert = lo_cert;
    out.cert.metrics["c_hi"] = c_hi;
    return out;
  }
  double lo = 0.0;
  double hi = c_hi;
  if (hi > tol) {
    Certificate top = certify(hi);
    if (top.issued()) {
      lo = hi;
      lo_cert = top;
    } else {
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        Certificate m = certify(mid);
        if (m.issued()) {
          lo = mid;
          lo_cert = std::move(m);
        } else {
          hi = mid;
        }
      }
    }
  }
  out.c_star = lo;
  out.cert = lo_cert;
  out.cert.metrics["c_hi"] = c_hi;
  out.cert.metrics["c_star"] = lo;
  return out;
}

double SymmetrizationTests::decision_margin() const {
  double m = std::min({std::abs(value_i), std::abs(value_ii_0), std::abs(value_ii_k)});
  if (std::isfinite(value_iii)) m = std::min(m, std::abs(value_iii));
  return m;
}

SymmetrizationTests l2_symmetrization_tests(const LureSystem& sys) {
  require_normalized(sys, "l2_symmetrization_tests");
  require(sys.channels() == 1, ErrorCode::unsupported, "l2_symmetrization_tests: requires a single channel");
  require(finite_kappa(sys), ErrorCode::hypothesis, "l2_symmetrization_tests: requires ϰ < ∞");
  SymmetrizationTests out;
  const double kappa = sys.kappa(0);

  const ScalarMin i = minimize_schur(sys, 0.0);
  out.value_i = i.value;
  out.tau_i = std::exp(i.x);
  out.cond_i = out.value_i < 0.0;

  const Matrix as = symmetric_part(sys.a);
  const Matrix bcs = symmetric_part(sys.b * sys.c);
  out.value_ii_0 = lambda_max_sym(as);
  const Matrix ak = as + kappa * bcs;
  out.value_ii_k = lambda_max_sym(ak);
  out.cond_ii = out.value_ii_0 < 0.0 && out.value_ii_k < 0.0;

  if (!(out.value_ii_k < 0.0)) {
    out.value_iii = std::nan("");
    out.cond_iii = false;
    out.reason = "𝒜(ϰ) is not negative definite";
    return out;
  }
  const SymmetricEigen e = eig_sym(symmetric_part(-ak));
  const Matrix s = e.vectors * e.values.cwiseSqrt().cwiseInverse().asDiagonal() * e.vectors.transpose();
  const Vector bt = s * sys.b.col(0);
  const Vector ct = (sys.c.row(0) * s).transpose();
  out.value_iii = bt.norm() * ct.norm() - ct.dot(bt) - 2.0 / kappa;
  out.cond_iii = out.value_iii < 0.0;
  return out;
}

Certificate certify_l2_symmetrization(const LureSystem& sys) {
  require_normalized(sys, "certify_l2_symmetrization");
  Certificate cert = blank(sys, CertMethod::l2_symmetrization, 2.0, 0.0);
  if (sys.channels() != 1) return refuse(cert, "requires a single channel (scalar nonlinearity)");
  if (!finite_kappa(sys)) return refuse(cert, "requires ϰ < ∞");
  const SymmetrizationTests t = l2_symmetrization_tests(sys);
  cert.metrics["value_i"] = t.value_i;
  cert.metrics["value_ii_0"] = t.value_ii_0;
  cert.metrics["value_ii_kappa"] = t.value_ii_k;
  cert.metrics["value_iii"] = t.value_iii;
  if (!(t.cond_ii && t.cond_iii)) {
    cert.status = CertStatus::failed;
    cert.reason = t.reason.empty() ? "requires 𝒜(κ) ≺ 0 for all κ ∈ [0, ϰ] and ‖B̃‖‖C̃‖ − C̃B̃ < 2/ϰ" : t.reason;
    return cert;
  }
  const SymmetricEigen e = eig_sym(symmetric_part(-(symmetric_part(sys.a) + sys.kappa(0) * symmetric_part(sys.b * sys.c))));
  const Matrix s = e.vectors * e.values.cwiseSqrt().cwiseInverse().asDiagonal() * e.vectors.transpose();
  const double nb = (s * sys.b.col(0)).norm();
  const double nc = (sys.c.row(0) * s).norm();
  const double tau = (nb > 0.0 && nc > 0.0) ? nb / nc : t.tau_i;
  const double value = schur_form(symmetric_part(sys.a), sys.b.col(0), sys.c.row(0).transpose(), sys.kappa(0), 0.0, tau);
  cert.tau(0) = tau;
  cert.rate = std::max(0.0, -value);
  cert.status = CertStatus::certified_exact;
  return cert;
}

Certificate circle_halfplane(const LureSystem& sys, int grid_points, Execution exec) {
  require_normalized(sys, "circle_halfplane");
  Certificate cert = blank(sys, CertMethod::circle, 2.0, 0.0);
  if (sys.channels() != 1) return refuse(cert, "requires a single channel (scalar nonlinearity)");
  const double alpha = spectral_abscissa(sys.a);
  cert.metrics["spectral_abscissa"] = alpha;
  if (!(alpha < 0.0)) return refuse(cert, "requires A Hurwitz (spectral abscissa < 0)");
  cert.notes.push_back("controllability/observability of (A, B, C) assumed, not checked");

  const Vector omegas = frequency_grid(grid_points);
  const Vector re = frequency_response_real(sys.a, sys.b, sys.c, omegas, exec);
  Eigen::Index k = 0;
  re.maxCoeff(&k);
  double best = re(k), best_w = omegas(k);
  const double lo = omegas(std::max<Eigen::Index>(k - 1, 0));
  const double hi = omegas(std::min<Eigen::Index>(k + 1, omegas.size() - 1));
  if (hi > lo) {
    const ScalarMin g = golden_section(
        [&](double w) { return -frequency_response_real(sys.a, sys.b, sys.c, w); }, lo, hi, 1e-12 * std::max(1.0, hi));
    if (-g.value > best) {
      best = -g.value;
      best_w = g.x;
    }
  }
  const double threshold = std::isfinite(sys.kappa(0)) ? 1.0 / sys.kappa(0) : 0.0;
  cert.metrics["max_re"] = best;
  cert.metrics["omega_star"] = best_w;
  cert.metrics["threshold"] = threshold;
  if (!(best < threshold - 1e-9)) {
    cert.status = CertStatus::failed;
    cert.reason = "requires max_ω Re C(iωI−A)⁻¹B < 1/ϰ; max = " + fmt(best) + ", 1/ϰ = " + fmt(threshold);
    return cert;
  }
  cert.metrics["weight_available"] = 0.0;
  cert.status = CertStatus::certified_sampled;
  if (std::isfinite(sys.kappa(0))) {
    const RateResult r = max_certified_rate(sys, RatePath::l2_schur, 2.0, WeightChoice::identity());
    if (r.cert.issued()) {
      cert.rate = r.c_star;
      cert.tau = r.cert.tau;
      cert.metrics["weight_available"] = 1.0;
      cert.status = CertStatus::certified_exact;
      cert.notes.push_back("rate and τ from the ℓ2 Schur path with R = I");
    }
  }
  if (cert.metrics["weight_available"] == 0.0)
    cert.notes.push_back("frequency condition holds on the grid; no explicit weight with R = I (H not synthesized)");
  return cert;
}

LmiCheck verify_lmi(const LureSystem& sys, const Matrix& h, const Vector& tau, double c) {
  require_normalized(sys, "verify_lmi");
  const Eigen::Index d = sys.states();
  const Eigen::Index m = sys.channels();
  require_square(h, "verify_lmi H");
  require(h.rows() == d, ErrorCode::dimension_mismatch, "verify_lmi: H must be d×d");
  require(tau.size() == m, ErrorCode::dimension_mismatch, "verify_lmi: tau needs one entry per channel");
  require((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()),
          ErrorCode::invalid_argument, "verify_lmi: H must be symmetric");
  Matrix blk = Matrix::Zero(d + m, d + m);
  blk.topLeftCorner(d, d) = h * sys.a + sys.a.transpose() * h + 2.0 * c * h;
  blk.topRightCorner(d, m) = h * sys.b + sys.c.transpose() * tau.asDiagonal();
  blk.bottomLeftCorner(m, d) = blk.topRightCorner(d, m).transpose();
  for (Eigen::Index i = 0; i < m; ++i)
    blk(d + i, d + i) = std::isfinite(sys.kappa(i)) ? -2.0 * tau(i) / sys.kappa(i) : 0.0;
  LmiCheck out;
  out.lambda_max = eig_sym(0.5 * (blk + blk.transpose())).values(0);
  out.lambda_min_h = eig_sym(0.5 * (h + h.transpose())).values(d - 1);
  out.ok = out.lambda_max <= 1e-10 && out.lambda_min_h > 0.0;
  return out;
}

Certificate lmi_certificate(const LureSystem& sys, const Matrix& h, const Vector& tau, double c) {
  Certificate cert = blank(sys, CertMethod::lmi_verify, 2.0, c);
  const LmiCheck chk = verify_lmi(sys, h, tau, c);
  cert.tau = tau;
  cert.metrics["lambda_max"] = chk.lambda_max;
  cert.metrics["lambda_min_h"] = chk.lambda_min_h;
  if (!(chk.lambda_min_h > 0.0)) return refuse(cert, "requires H ≻ 0");
  const Eigen::LLT<Matrix> llt(0.5 * (h + h.transpose()));
  cert.weight = llt.matrixU();
  if (chk.ok) {
    cert.status = CertStatus::certified_exact;
  } else {
    cert.status = CertStatus::failed;
    cert.reason = "KYP block matrix has λ_max = " + fmt(chk.lambda_max) + " > 0";
  }
  return cert;
}

AizermanScan aizerman_scan(const LureSystem& sys, int grid_size) {
  validate_system(sys);
  require(grid_size >= 2, ErrorCode::invalid_argument, "aizerman_scan: grid_size must be at least 2");
  require(sys.zeta.allFinite() && sys.kappa.allFinite(), ErrorCode::hypothesis,
          "Aizerman scan requires finite sector bounds ζ, ϰ");
  AizermanScan out;
  out.worst_abscissa = -kInf;
  for (int t = 0; t < grid_size; ++t) {
    const double s = static_cast<double>(t) / (grid_size - 1);
    const Vector k = sys.zeta + s * (sys.kappa - sys.zeta);
    const double a = spectral_abscissa(sys.a + sys.b * k.asDiagonal() * sys.c);
    if (a > out.worst_abscissa) {
      out.worst_abscissa = a;
      out.worst_gain = k(0);
    }
  }
  const double scale = std::max(1.0, sys.a.cwiseAbs().maxCoeff());
  out.hurwitz_all = out.worst_abscissa < -1e-10 * scale;
  return out;
}

VerifyReport verify_certificate(const Certificate& cert) {
  VerifyReport rep;
  if (!cert.issued()) {
    rep.detail = "certificate not issued (" + std::string(to_string(cert.status)) + ")";
    return rep;
  }
  const LureSystem& sys = cert.system;
  require_normalized(sys, "verify_certificate");
  require(cert.weight.rows() == sys.states() && cert.input_weight.size() == sys.channels() &&
              cert.tau.size() == sys.channels(),
          ErrorCode::dimension_mismatch, "verify_certificate: stored fields do not match the system");

  auto check_form = [&]() {
    const FormFamily fam = build_forms(sys, cert.rate, extended_spec(cert.p, cert.weight, cert.input_weight));
    const Matrix pt = combined_form(fam, cert.tau);
    if (fam.spec.exact_log_norm()) {
      rep.value = log_norm(pt, fam.spec);
      rep.ok = rep.value <= kVerifySlack;
      rep.detail = "μ_{p,R̃}(P(τ)) = " + fmt(rep.value);
    } else {
      rep.value = log_norm_sampled(fam.spec.similarity(pt), cert.p, 4000, 7);
      rep.ok = rep.value <= kVerifySlack;
      rep.detail = "sampled lower bound of μ_{p,R̃}(P(τ)) = " + fmt(rep.value) + " (approximate)";
    }
    if (rep.ok && cert.p == kInf) {
      const double side = finite_kappa(sys) ? inf_side_condition(sys, cert.weight, cert.input_weight) : kInf;
      if (!(side < 1.0)) {
        rep.ok = false;
        rep.detail += "; ℓ∞ side condition fails";
      }
    }
  };

  switch (cert.method) {
    case CertMethod::lp_dual:
    case CertMethod::metzler:
    case CertMethod::l2_schur:
      check_form();
      break;
    case CertMethod::l2_symmetrization: {
      check_form();
      const SymmetrizationTests t = l2_symmetrization_tests(sys);
      rep.ok = rep.ok && t.cond_ii && t.cond_iii;
      break;
    }
    case CertMethod::circle: {
      const auto it = cert.metrics.find("weight_available");
      if (it != cert.metrics.end() && it->second == 1.0) {
        check_form();
      } else {
        const Certificate again = circle_halfplane(sys);
        rep.ok = again.issued();
        rep.value = again.metrics.at("max_re");
        rep.detail = "max_ω Re G(iω) = " + fmt(rep.value);
      }
      break;
    }
    case CertMethod::lmi_verify: {
      const Matrix h = cert.weight.transpose() * cert.weight;
      const Vector tau_eff = cert.input_weight.cwiseProduct(cert.input_weight).cwiseProduct(cert.tau);
      const LmiCheck chk = verify_lmi(sys, h, tau_eff, cert.rate);
      rep.ok = chk.ok;
      rep.value = chk.lambda_max;
      rep.detail = "KYP block λ_max = " + fmt(chk.lambda_max);
      break;
    }
  }
  return rep;
}

}  // namespace npsl
