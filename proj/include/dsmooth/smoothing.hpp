#pragma once

#include <cmath>
#include <string_view>
#include <utility>

#include "dsmooth/common.hpp"
#include "dsmooth/linops.hpp"
#include "dsmooth/oracles.hpp"

namespace dsmooth {

/// Which of the two regularizations of the dual are applied.
enum class Regime {
  General,  // smooth f* and add (κ/2)||p||^2
  FStrong,  // f strongly convex: f* already smooth, only the κ term
  GSmooth,  // ∇g Lipschitz: g* strongly convex, only the f* smoothing
  Both,     // neither regularization
};

constexpr std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::General: return "GENERAL";
    case Regime::FStrong: return "F_STRONG";
    case Regime::GSmooth: return "G_SMOOTH";
    case Regime::Both: return "BOTH";
  }
  return "?";
}

inline Regime regime_from_string(std::string_view s) {
  if (s == "GENERAL") return Regime::General;
  if (s == "F_STRONG") return Regime::FStrong;
  if (s == "G_SMOOTH") return Regime::GSmooth;
  if (s == "BOTH") return Regime::Both;
  throw InvalidArgument("unknown regime '" + std::string(s) + "'");
}

constexpr bool smooths_f(Regime r) { return r == Regime::General || r == Regime::GSmooth; }
constexpr bool adds_kappa(Regime r) { return r == Regime::General || r == Regime::FStrong; }

inline Regime select_regime(const PrimalFunctionOracle& f, const StrongFunctionOracle& g) {
  const bool f_strong = f.strong_convexity() > 0.0;
  const bool g_smooth = g.grad_lipschitz().has_value();
  if (f_strong && g_smooth) return Regime::Both;
  if (f_strong) return Regime::FStrong;
  if (g_smooth) return Regime::GSmooth;
  return Regime::General;
}

inline void validate_regime(Regime r, const PrimalFunctionOracle& f, const StrongFunctionOracle& g) {
  if (!smooths_f(r) && !(f.strong_convexity() > 0.0)) {
    throw InvalidConfiguration(std::string(to_string(r)) + " requires a strongly convex f");
  }
  if (!adds_kappa(r) && !g.grad_lipschitz().has_value()) {
    throw InvalidConfiguration(std::string(to_string(r)) + " requires g with Lipschitz gradient");
  }
}

/// (rho, kappa) as produced by the parameter rule of each regime. In FStrong
/// and Both, rho is the strong-convexity modulus of f used in L; in GSmooth
/// and Both, kappa is the inherited modulus 1 / Lip(∇g).
struct SmoothingParameters {
  double rho = 0.0;
  double kappa = 0.0;
};

struct DualEvaluation {
  double value = 0.0;           // objective handed to the fast gradient method
  double smoothed_value = 0.0;  // same without the (κ/2)||p||^2 term: θ_ρ (or θ)
  Vector grad;                  // gradient of value
  Vector x_f;                   // x_{f,p}
  Vector x_g;                   // x_{g,p}
  Vector residual;              // A x_f - x_g, the gradient of smoothed_value
  double unreg_grad_norm = 0.0; // ||residual||
};

/// Regime-tagged dual objective
///   θ_{ρ,κ}(p) = f*_ρ(A*p) + g*(-p) + (κ/2)||p||^2,
/// with the pieces dropped according to the regime. Values are rebuilt from
/// the oracle argmins, so value and gradient come from the same points.
/// Holds non-owning references; the operator and oracles must outlive it.
class SmoothedDual {
 public:
  SmoothedDual(const LinearMap& A, const PrimalFunctionOracle& f, const StrongFunctionOracle& g, Regime regime,
               SmoothingParameters params, double norm_sq)
      : A_(&A), f_(&f), g_(&g), regime_(regime), params_(params), norm_sq_(norm_sq) {
    detail::require_same_size(A.dim_in(), f.dim(), "SmoothedDual: A.dim_in vs f.dim");
    detail::require_same_size(A.dim_out(), g.dim(), "SmoothedDual: A.dim_out vs g.dim");
    validate_regime(regime, f, g);
    if (!(params.rho > 0.0)) throw InvalidConfiguration("SmoothedDual: rho must be positive");
    if (!smooths_f(regime) && params.rho > f.strong_convexity()) {
      throw InvalidConfiguration("SmoothedDual: rho exceeds the strong convexity of f");
    }
    if (!(params.kappa > 0.0)) throw InvalidConfiguration("SmoothedDual: kappa must be positive");
    if (!(norm_sq >= 0.0) || !std::isfinite(norm_sq)) throw InvalidConfiguration("SmoothedDual: bad ||A||^2");
    lipschitz_ = norm_sq / params.rho + 1.0 / g.mu() + (adds_kappa(regime) ? params.kappa : 0.0);
    if (params.kappa > lipschitz_) throw InvalidConfiguration("SmoothedDual: kappa exceeds L");
  }

  Regime regime() const { return regime_; }
  double rho() const { return params_.rho; }
  /// ρ passed to the f-argmin: 0 when f is used unsmoothed.
  double smoothing_rho() const { return smooths_f(regime_) ? params_.rho : 0.0; }
  double kappa() const { return params_.kappa; }
  double lipschitz() const { return lipschitz_; }
  double norm_sq() const { return norm_sq_; }
  Index dim() const { return A_->dim_out(); }

  const LinearMap& op() const { return *A_; }
  const PrimalFunctionOracle& f() const { return *f_; }
  const StrongFunctionOracle& g() const { return *g_; }

  DualEvaluation evaluate(const Vector& p) const {
    detail::require_same_size(p.size(), dim(), "SmoothedDual::evaluate");
    const double rho = smoothing_rho();
    DualEvaluation e;
    const Vector q = A_->apply_adjoint(p);
    e.x_f = f_->regularized_argmin(q, rho);
    e.x_g = g_->linear_tilt_argmin(p);
    const ExtendedReal fv = f_->value(e.x_f);
    const ExtendedReal gv = g_->value(e.x_g);
    if (!fv.is_finite() || !gv.is_finite()) throw NumericalFailure("oracle argmin left the domain");
    e.residual = A_->apply(e.x_f) - e.x_g;
    e.unreg_grad_norm = e.residual.norm();
    const double f_part = q.dot(e.x_f) - fv.value() - 0.5 * rho * e.x_f.squaredNorm();
    const double g_part = -p.dot(e.x_g) - gv.value();
    e.smoothed_value = f_part + g_part;
    if (adds_kappa(regime_)) {
      e.value = e.smoothed_value + 0.5 * params_.kappa * p.squaredNorm();
      e.grad = e.residual + params_.kappa * p;
    } else {
      e.value = e.smoothed_value;
      e.grad = e.residual;
    }
    return e;
  }

 private:
  const LinearMap* A_;
  const PrimalFunctionOracle* f_;
  const StrongFunctionOracle* g_;
  Regime regime_;
  SmoothingParameters params_;
  double norm_sq_;
  double lipschitz_ = 0.0;
};

/// (θ_ρ(p), θ_ρ(p) + ρ D_f): the interval that contains the unsmoothed θ(p).
inline std::pair<double, double> smoothed_sandwich_check(const SmoothedDual& sd, const Vector& p) {
  const double df = sd.f().domain_radius_sq_half();
  if (!std::isfinite(df)) throw Unsupported("sandwich bound needs a bounded dom f");
  const double lower = sd.evaluate(p).smoothed_value;
  return {lower, lower + sd.smoothing_rho() * df};
}

}  // namespace dsmooth
