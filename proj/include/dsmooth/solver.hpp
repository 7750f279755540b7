#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "dsmooth/common.hpp"
#include "dsmooth/fgm.hpp"
#include "dsmooth/linops.hpp"
#include "dsmooth/oracles.hpp"
#include "dsmooth/smoothing.hpp"

namespace dsmooth {

struct SolverConfig {
  double epsilon = 0.0;  // target accuracy on the dual objective
  double R = 0.0;        // bound on the norm of a dual solution
  std::optional<int> max_iters;
  std::optional<Regime> regime;
  // ||A||^2 to use in L; defaults to A.norm_sq_bound().
  std::optional<double> norm_sq;
  // v(P) from an independent source; fills SolveReport::certificate_gap.
  std::optional<double> reference_value;
  bool stop_at_target = true;
  bool record_trace = true;
};

inline constexpr int kDefaultMaxIters = 10000;

/// Parameter rule per regime:
///   GENERAL  ρ = ε/(3 D_f), κ = 2ε/(3R^2)
///   F_STRONG ρ = ρ_f,       κ = ε/R^2
///   G_SMOOTH ρ = ε/(2 D_f), κ = 1/Lip(∇g)
///   BOTH     ρ = ρ_f,       κ = 1/Lip(∇g)
inline SmoothingParameters choose_parameters(Regime regime, double epsilon, double R, double domain_radius,
                                             double rho_f, std::optional<double> g_grad_lipschitz) {
  if (!(epsilon > 0.0)) throw InvalidArgument("choose_parameters: epsilon must be positive");
  SmoothingParameters out;
  if (smooths_f(regime)) {
    if (!std::isfinite(domain_radius)) throw Unsupported("choose_parameters: dom f must be bounded");
    if (!(domain_radius > 0.0)) throw InvalidArgument("choose_parameters: D_f must be positive");
    out.rho = regime == Regime::General ? epsilon / (3.0 * domain_radius) : epsilon / (2.0 * domain_radius);
  } else {
    if (!(rho_f > 0.0)) throw InvalidArgument("choose_parameters: f is not strongly convex");
    out.rho = rho_f;
  }
  if (adds_kappa(regime)) {
    if (!(R > 0.0)) throw InvalidArgument("choose_parameters: R must be positive");
    out.kappa = regime == Regime::General ? 2.0 * epsilon / (3.0 * R * R) : epsilon / (R * R);
  } else {
    if (!g_grad_lipschitz || !(*g_grad_lipschitz > 0.0)) {
      throw InvalidArgument("choose_parameters: g has no Lipschitz gradient");
    }
    out.kappa = 1.0 / *g_grad_lipschitz;
  }
  return out;
}

/// A-priori iteration count guaranteeing ε-accuracy of the dual objective,
/// given an estimate of θ(0) - θ(p*). Returns 0 when the log argument is <= 1.
inline std::int64_t iteration_bound(Regime regime, double lipschitz, double kappa, double epsilon,
                                    double theta0_gap) {
  if (!(epsilon > 0.0) || !(kappa > 0.0) || !(lipschitz > 0.0)) {
    throw InvalidArgument("iteration_bound: L, kappa and epsilon must be positive");
  }
  if (theta0_gap < 0.0) throw InvalidArgument("iteration_bound: negative gap");
  const double cond = std::sqrt(lipschitz / kappa);
  double factor = 0.0;
  double arg = 0.0;
  switch (regime) {
    case Regime::General:
      factor = 2.0 * cond;
      arg = 75.0 * (theta0_gap + epsilon / 3.0) / (8.0 * epsilon);
      break;
    case Regime::FStrong:
      factor = 2.0 * cond;
      arg = 25.0 * theta0_gap / (4.0 * epsilon);
      break;
    case Regime::GSmooth:
      factor = cond;
      arg = 4.0 * (theta0_gap + epsilon / 2.0) / epsilon;
      break;
    case Regime::Both:
      factor = cond;
      arg = 2.0 * theta0_gap / epsilon;
      break;
  }
  if (arg <= 1.0) return 0;
  return static_cast<std::int64_t>(std::ceil(factor * std::log(arg)));
}

/// Gradient-norm stop target: 2ε/R in GENERAL, 3ε/R otherwise.
inline double grad_norm_target(Regime regime, double epsilon, double R) {
  return (regime == Regime::General ? 2.0 : 3.0) * epsilon / R;
}

struct SolveReport {
  Vector x_primal;  // x_{f,p_K}
  Vector y_primal;  // x_{g,p_K}
  Vector p_dual;    // p_K
  double dual_value = 0.0;         // θ_ρ(p_K) (θ itself when f is not smoothed)
  double regularized_value = 0.0;  // objective minimized by the FGM at p_K
  double grad_norm = 0.0;          // ||A x_primal - y_primal||
  ExtendedReal f_value;            // f(x_primal)
  ExtendedReal g_value;            // g(y_primal)
  std::optional<double> certificate_gap;
  int iterations = 0;
  StopReason stop_reason = StopReason::MaxIters;
  Regime regime = Regime::General;
  double rho = 0.0;    // parameter as chosen; a modulus of f when f is not smoothed
  double kappa = 0.0;
  double lipschitz = 0.0;
  double epsilon = 0.0;
  double R = 0.0;
  double target = 0.0;
  bool radius_heuristic = false;  // R came from the restart heuristic
  double theta0_gap_estimate = 0.0;
  std::int64_t iteration_bound_estimate = 0;
  FgmTrace trace;
};

/// |f(x) + g(y) - reference|; the pair must lie in dom f × dom g.
inline double primal_certificate(ExtendedReal f_value, ExtendedReal g_value, double reference_value) {
  if (!f_value.is_finite()) throw CertificateInvalid("primal point outside dom f");
  if (!g_value.is_finite()) throw CertificateInvalid("primal point outside dom g");
  return std::abs(f_value.value() + g_value.value() - reference_value);
}

inline double primal_certificate(const SolveReport& report, double reference_value) {
  return primal_certificate(report.f_value, report.g_value, reference_value);
}

inline double primal_certificate(const PrimalFunctionOracle& f, const StrongFunctionOracle& g, const Vector& x,
                                 const Vector& y, double reference_value) {
  return primal_certificate(f.value(x), g.value(y), reference_value);
}

/// The double smoothing driver. Runs the fast gradient method on the
/// regime's regularized dual until ||A x_f - x_g|| hits the target (or
/// max_iters), then reports the primal pair recovered from the last iterate.
/// The observer receives (k, p_k, DualEvaluation at p_k).
template <class Observer = NoObserver>
SolveReport solve(const LinearMap& A, const PrimalFunctionOracle& f, const StrongFunctionOracle& g,
                  const SolverConfig& cfg, Observer&& observer = {}) {
  if (!(cfg.epsilon > 0.0)) throw InvalidArgument("solve: epsilon must be positive");
  if (!(cfg.R > 0.0)) throw InvalidArgument("solve: R must be positive");
  const Regime regime = cfg.regime.value_or(select_regime(f, g));
  validate_regime(regime, f, g);
  const double norm_sq = cfg.norm_sq.value_or(A.norm_sq_bound());
  const SmoothingParameters params = choose_parameters(regime, cfg.epsilon, cfg.R, f.domain_radius_sq_half(),
                                                       f.strong_convexity(), g.grad_lipschitz());
  const SmoothedDual dual(A, f, g, regime, params, norm_sq);

  FgmConfig fcfg;
  fcfg.max_iters = cfg.max_iters.value_or(kDefaultMaxIters);
  fcfg.record_trace = true;
  const double target = grad_norm_target(regime, cfg.epsilon, cfg.R);
  if (cfg.stop_at_target) fcfg.grad_norm_target = target;

  auto run = fgm_minimize(dual, fcfg, std::forward<Observer>(observer));

  SolveReport report;
  report.x_primal = std::move(run.last.x_f);
  report.y_primal = std::move(run.last.x_g);
  report.p_dual = std::move(run.p);
  report.dual_value = run.last.smoothed_value;
  report.regularized_value = run.last.value;
  report.grad_norm = run.last.unreg_grad_norm;
  report.f_value = f.value(report.x_primal);
  report.g_value = g.value(report.y_primal);
  if (cfg.reference_value) report.certificate_gap = primal_certificate(report, *cfg.reference_value);
  report.iterations = run.iterations;
  report.stop_reason = run.reason;
  report.regime = regime;
  report.rho = params.rho;
  report.kappa = params.kappa;
  report.lipschitz = dual.lipschitz();
  report.epsilon = cfg.epsilon;
  report.R = cfg.R;
  report.target = target;

  double best = run.trace.front().smoothed_value;
  for (const auto& r : run.trace) best = std::min(best, r.smoothed_value);
  report.theta0_gap_estimate = run.trace.front().smoothed_value - best;
  report.iteration_bound_estimate =
      iteration_bound(regime, dual.lipschitz(), params.kappa, cfg.epsilon, report.theta0_gap_estimate);
  if (cfg.record_trace) report.trace = std::move(run.trace);
  return report;
}

/// Heuristic for an unknown R: solve with R0 and, if the final dual iterate
/// is longer than R0, solve once more with R = 2||p_K||. The report is always
/// flagged since R is then a guess rather than a proven bound.
template <class Observer = NoObserver>
SolveReport solve_with_radius_restart(const LinearMap& A, const PrimalFunctionOracle& f,
                                      const StrongFunctionOracle& g, SolverConfig cfg, double R0,
                                      Observer&& observer = {}) {
  cfg.R = R0;
  SolveReport first = solve(A, f, g, cfg);
  const double pn = first.p_dual.norm();
  if (pn <= R0) {
    // Replayed so the observer sees exactly one run.
    SolveReport again = solve(A, f, g, cfg, std::forward<Observer>(observer));
    again.radius_heuristic = true;
    return again;
  }
  cfg.R = 2.0 * pn;
  SolveReport second = solve(A, f, g, cfg, std::forward<Observer>(observer));
  second.radius_heuristic = true;
  return second;
}

}  // namespace dsmooth
