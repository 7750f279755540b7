#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "dsmooth/common.hpp"

namespace dsmooth {

/// A κ-strongly convex objective with L-Lipschitz gradient. evaluate() returns
/// at least value, smoothed_value, grad and unreg_grad_norm.
template <class T>
concept StronglyConvexObjective = requires(const T& obj, const Vector& p) {
  { obj.lipschitz() } -> std::convertible_to<double>;
  { obj.kappa() } -> std::convertible_to<double>;
  { obj.dim() } -> std::convertible_to<Index>;
  { obj.evaluate(p).value } -> std::convertible_to<double>;
  { obj.evaluate(p).smoothed_value } -> std::convertible_to<double>;
  { obj.evaluate(p).grad } -> std::convertible_to<Vector>;
  { obj.evaluate(p).unreg_grad_norm } -> std::convertible_to<double>;
};

struct FgmConfig {
  int max_iters = 1000;
  // Compared against unreg_grad_norm at p_{k+1} after every step.
  std::optional<double> grad_norm_target;
  bool record_trace = true;
};

struct FgmRecord {
  int k = 0;
  double value = 0.0;           // objective being minimized, at p_k
  double smoothed_value = 0.0;  // same without the second regularization
  double grad_norm = 0.0;       // ||∇ objective(p_k)||
  double unreg_grad_norm = 0.0;
  double p_norm = 0.0;
};

using FgmTrace = std::vector<FgmRecord>;

enum class StopReason { TargetMet, MaxIters };

constexpr std::string_view to_string(StopReason r) {
  return r == StopReason::TargetMet ? "TARGET_MET" : "MAX_ITERS";
}

template <class Eval>
struct FgmResult {
  Vector p;
  Eval last;  // evaluation at p
  FgmTrace trace;
  int iterations = 0;
  StopReason reason = StopReason::MaxIters;
};

inline double momentum_coefficient(double lipschitz, double kappa) {
  const double sl = std::sqrt(lipschitz);
  const double sk = std::sqrt(kappa);
  return (sl - sk) / (sl + sk);
}

struct NoObserver {
  template <class Eval>
  void operator()(int, const Vector&, const Eval&) const {}
};

/// Constant-step fast gradient method for strongly convex objectives:
///   p_{k+1} = w_k - ∇θ(w_k) / L
///   w_{k+1} = p_{k+1} + (√L - √κ)/(√L + √κ) (p_{k+1} - p_k),
/// from w_0 = p_0 = 0. The observer is called with (k, p_k, eval(p_k)) for
/// k = 0 and after every step. max_iters = 0 evaluates p_0 only.
template <StronglyConvexObjective Objective, class Observer = NoObserver>
auto fgm_minimize(const Objective& objective, const FgmConfig& cfg, Observer&& observer = {}) {
  using Eval = decltype(objective.evaluate(std::declval<const Vector&>()));
  const double L = objective.lipschitz();
  const double kappa = objective.kappa();
  if (!(L > 0.0) || !(kappa > 0.0)) throw InvalidConfiguration("fgm: L and kappa must be positive");
  if (kappa > L) throw InvalidConfiguration("fgm: kappa exceeds L");
  if (cfg.max_iters < 0) throw InvalidConfiguration("fgm: max_iters must be nonnegative");

  const double beta = momentum_coefficient(L, kappa);
  const Index m = objective.dim();

  FgmResult<Eval> result;
  auto record = [&](int k, const Vector& p, const Eval& e) {
    if (!e.grad.allFinite() || !std::isfinite(e.value)) {
      throw NumericalFailure("fgm: non-finite objective or gradient at iteration " + std::to_string(k));
    }
    if (cfg.record_trace) {
      result.trace.push_back({k, e.value, e.smoothed_value, e.grad.norm(), e.unreg_grad_norm, p.norm()});
    }
    observer(k, p, e);
  };

  Vector p = Vector::Zero(m);
  Vector w = p;
  Eval at_p = objective.evaluate(p);
  record(0, p, at_p);

  for (int k = 0; k < cfg.max_iters; ++k) {
    Vector next(m);
    if (k == 0) {
      next = w - at_p.grad / L;
    } else {
      const Eval at_w = objective.evaluate(w);
      if (!at_w.grad.allFinite()) throw NumericalFailure("fgm: non-finite gradient at w_" + std::to_string(k));
      next = w - at_w.grad / L;
    }
    w = next + beta * (next - p);
    p = std::move(next);
    at_p = objective.evaluate(p);
    result.iterations = k + 1;
    record(k + 1, p, at_p);
    if (cfg.grad_norm_target && at_p.unreg_grad_norm <= *cfg.grad_norm_target) {
      result.reason = StopReason::TargetMet;
      break;
    }
  }
  result.p = std::move(p);
  result.last = std::move(at_p);
  return result;
}

/// True iff every record satisfies
///   θ(p_k) - θ* <= 2 (θ(p_0) - θ*) e^{-k√(κ/L)}
///   ||∇θ(p_k)||^2 <= 4 L (θ(p_0) - θ*) e^{-k√(κ/L)}
/// up to the multiplicative slack. θ* defaults to the smallest traced value.
/// A round-off floor of a few ulps of the objective scale is allowed on the
/// gap, and the matching floor on the gradient.
inline bool geometric_decay_check(const FgmTrace& trace, double lipschitz, double kappa,
                                  std::optional<double> theta_star = std::nullopt, double slack = 1.05) {
  if (trace.empty()) return true;
  double best = theta_star.value_or(std::numeric_limits<double>::infinity());
  if (!theta_star) {
    for (const auto& r : trace) best = std::min(best, r.value);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max({1.0, std::abs(best), std::abs(trace.front().value)});
  const double gap_floor = 16.0 * eps * scale;
  const double gap0 = trace.front().value - best;
  const double rate = std::sqrt(kappa / lipschitz);
  for (const auto& r : trace) {
    const double decay = std::exp(-static_cast<double>(r.k) * rate);
    const double gap = r.value - best;
    if (gap > slack * 2.0 * gap0 * decay + gap_floor) return false;
    if (r.grad_norm * r.grad_norm > slack * 4.0 * lipschitz * (gap0 * decay + gap_floor)) return false;
  }
  return true;
}

}  // namespace dsmooth
