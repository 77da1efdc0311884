#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "npsl/parallel.hpp"
#include "npsl/slemma.hpp"

namespace npsl {

/// ż = A z + B w, y = C z, w_i = φ_i(t, y_i) with ζ_i ≤ φ_i(t,y)/y ≤ ϰ_i per channel.
struct LureSystem {
  Matrix a;      // d×d
  Matrix b;      // d×m
  Matrix c;      // m×d
  Vector zeta;   // may hold -inf
  Vector kappa;  // may hold +inf

  Eigen::Index states() const { return a.rows(); }
  Eigen::Index channels() const { return b.cols(); }
  bool normalized() const { return (zeta.array() == 0.0).all(); }
};

void validate_system(const LureSystem& sys);

/// How a channel's input was rewritten by normalize_sector.
///  shift: v = w − ζ y   (finite ζ)
///  flip:  v = ϰ y − w   (ζ = −∞, finite ϰ); the channel's column of B changes sign.
struct ChannelSubstitution {
  enum class Kind { none, shift, flip } kind = Kind::none;
  double zeta = 0.0;
  double kappa = 0.0;
};

struct NormalizedLure {
  LureSystem system;
  std::vector<ChannelSubstitution> substitutions;
};

/// Brings every channel to the sector [0, ϰ'] (ϰ' may be ∞).
NormalizedLure normalize_sector(const LureSystem& sys);

/// Maps an original input w on channel i to the normalized input v.
double substitute_input(const ChannelSubstitution& sub, double y, double w);

/// Block-diagonal weight R̃ = diag(R, D) on x = [z; w].
NormSpec extended_spec(double p, const std::optional<Matrix>& state_weight, const Vector& input_weight);

/// P₀ = [[A + cI, B], [0, 0]], P_i = [[0, 0], [−e_i C_i, e_i e_iᵀ/ϰ_i]] (ϰ = ∞ gives 0), ρ = 0.
FormFamily build_forms(const LureSystem& normalized, double c, const NormSpec& extended);

enum class CertMethod { lp_dual, l2_schur, l2_symmetrization, circle, metzler, lmi_verify };
enum class CertStatus { certified_exact, certified_sampled, refused, failed };
const char* to_string(CertMethod m);
const char* to_string(CertStatus s);
CertMethod method_from_string(const std::string& s);
CertStatus status_from_string(const std::string& s);

/// Machine-checkable proof object: the normalized system, the norm (p, R, D)
/// and multipliers τ for which the defining inequality holds at rate c.
struct Certificate {
  CertMethod method = CertMethod::lp_dual;
  double p = 2.0;
  Matrix weight;        // state weight R (identity when unweighted)
  Vector input_weight;  // D, one entry per channel
  Vector tau;
  double rate = 0.0;
  CertStatus status = CertStatus::failed;
  std::string reason;
  std::vector<std::string> notes;
  std::map<std::string, double> metrics;
  LureSystem system;  // normalized

  bool issued() const { return status == CertStatus::certified_exact || status == CertStatus::certified_sampled; }
  NormSpec state_spec() const { return NormSpec(p, weight); }
};

struct WeightChoice {
  enum class Kind { identity, fixed, perron } kind = Kind::identity;
  Matrix state_weight;  // fixed only
  Vector input_weight;  // fixed only; empty means ones
  double perron_tau = 1.0;
  bool strict_irreducible = false;

  static WeightChoice identity() { return {}; }
  static WeightChoice perron() { return {Kind::perron, {}, {}, 1.0, false}; }
  static WeightChoice fixed(Matrix r) { return {Kind::fixed, std::move(r), {}, 1.0, false}; }
};

struct ResolvedWeight {
  Matrix state;
  Vector input;
  std::vector<std::string> notes;
};

/// Perron choice: diagonal weight from the Perron pair (w left, v right) of ⌈P(τ)⌉,
/// r_i = w_i^{1/p} v_i^{−1/q}, rescaled so the last entry is 1.
ResolvedWeight resolve_weight(const LureSystem& normalized, double p, const WeightChoice& choice, double c);

/// μ_{p,R̃}(P(τ)) ≤ 0 minimised over τ ≥ 0 by the dual solver.
Certificate certify_lp_dual(const LureSystem& normalized, double p, const WeightChoice& weight, double c);

/// ∃τ>0: Aˢ + cI + (ϰ/4τ)(B + τCᵀ)(Bᵀ + τC) ⪯ 0, golden section over log τ.
Certificate certify_l2_schur(const LureSystem& normalized, double c);

/// 𝔄(ϰ) = ⌈A⌉ + |B| diag(ϰ) |C| test, then a diagonal Perron weight for ⌈P(τ)⌉.
Certificate metzler_path(const LureSystem& normalized, double p, double c, const WeightChoice& options = WeightChoice::perron());

enum class RatePath { lp_dual, metzler, l2_schur };

struct RateResult {
  double c_star = 0.0;
  Certificate cert;
  int evaluations = 0;
};

/// Bisection on c ∈ [0, c_hi] (tolerance tol) for the largest certified rate.
RateResult max_certified_rate(const LureSystem& normalized, RatePath path, double p, const WeightChoice& weight,
                              double tol = 1e-8);

struct SymmetrizationTests {
  bool cond_i = false;
  bool cond_ii = false;
  bool cond_iii = false;
  double value_i = 0.0;        // min_τ λ_max of the strict Schur form (< 0 ⟺ cond_i)
  double value_ii_0 = 0.0;     // λ_max(𝒜(0))
  double value_ii_k = 0.0;     // λ_max(𝒜(ϰ))
  double value_iii = 0.0;      // ‖B̃‖‖C̃‖ − C̃B̃ − 2/ϰ (NaN when 𝒜(ϰ) is not negative definite)
  double tau_i = 0.0;
  std::string reason;
  /// min distance of any decision value to its threshold
  double decision_margin() const;
};

/// 𝒜(κ) = Aˢ + κ(BC)ˢ. Condition (ii) is checked at κ = 0 and κ = ϰ, which
/// suffices because κ ↦ λ_max(𝒜(κ)) is convex.
SymmetrizationTests l2_symmetrization_tests(const LureSystem& normalized);

/// Issued when (ii) and (iii) hold; τ = ‖B̃‖/‖C̃‖ and the rate is read off
/// the strict Schur form at that τ.
Certificate certify_l2_symmetrization(const LureSystem& normalized);

/// max_ω Re C(iωI − A)⁻¹B < 1/ϰ − 1e-9 over ω = 0 and a log grid on [1e-6, 1e6]
/// with golden refinement. Attaches an ℓ2 rate and weight from the Schur path
/// when one exists.
Certificate circle_halfplane(const LureSystem& normalized, int grid_points = 2000,
                             Execution exec = Execution::serial);

/// [[HA + AᵀH + 2cH, HB + Cᵀdiag(τ)], [∗, −2 diag(τ/ϰ)]] ⪯ 0 and H ≻ 0.
struct LmiCheck {
  bool ok = false;
  double lambda_max = 0.0;
  double lambda_min_h = 0.0;
};
LmiCheck verify_lmi(const LureSystem& normalized, const Matrix& h, const Vector& tau, double c);

/// Wraps a user-supplied H (with H = RᵀR, R upper Cholesky factor) as a certificate.
Certificate lmi_certificate(const LureSystem& normalized, const Matrix& h, const Vector& tau, double c);

struct AizermanScan {
  bool hurwitz_all = false;
  double worst_abscissa = 0.0;
  double worst_gain = 0.0;
};
/// spectral_abscissa(A + k BC) < 0 on a uniform grid of k over [ζ, ϰ] (original sector).
AizermanScan aizerman_scan(const LureSystem& sys, int grid_size = 201);

struct VerifyReport {
  bool ok = false;
  double value = 0.0;
  std::string detail;
};

/// Re-checks the defining inequality of a certificate from its stored fields (slack 1e-9).
VerifyReport verify_certificate(const Certificate& cert);

}  // namespace npsl
