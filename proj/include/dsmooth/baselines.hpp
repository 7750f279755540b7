#pragma once

#include <cmath>
#include <vector>

#include "dsmooth/common.hpp"
#include "dsmooth/linops.hpp"

namespace dsmooth {

/// clamp(v_i - tλ, 0, u): prox of t(λ||.||_1 + δ_[0,u]^n).
inline Vector prox_step_l1(const Vector& v, double t, double lambda, double upper) {
  if (!(t > 0.0)) throw InvalidArgument("prox_step_l1: step must be positive");
  Vector x(v.size());
  for (Index i = 0; i < v.size(); ++i) x[i] = detail::clamp(v[i] - t * lambda, 0.0, upper);
  return x;
}

/// clamp((v_i - tλ) / (1 + 2tλ), 0, u): prox of t(λ(||.||^2 + ||.||_1) + δ_[0,u]^n).
inline Vector prox_step_l2l1(const Vector& v, double t, double lambda, double upper) {
  if (!(t > 0.0)) throw InvalidArgument("prox_step_l2l1: step must be positive");
  const double denom = 1.0 + 2.0 * t * lambda;
  Vector x(v.size());
  for (Index i = 0; i < v.size(); ++i) x[i] = detail::clamp((v[i] - t * lambda) / denom, 0.0, upper);
  return x;
}

enum class Penalty { L1, L2L1 };

/// min_x ||Ax - b||^2 + λ||x||_1 (+ λ||x||^2 for L2L1) over [0,u]^n.
struct CompositeProblem {
  const LinearMap* A = nullptr;
  Vector b;
  Penalty penalty = Penalty::L1;
  double lambda = 0.0;
  double upper = 1.0;
  double norm_sq = 1.0;  // ||A||^2

  CompositeProblem(const LinearMap& op, Vector data, Penalty pen, double lam, double u, double nsq)
      : A(&op), b(std::move(data)), penalty(pen), lambda(lam), upper(u), norm_sq(nsq) {
    detail::require_same_size(b.size(), op.dim_out(), "CompositeProblem");
    if (!(nsq > 0.0)) throw InvalidArgument("CompositeProblem: ||A||^2 must be positive");
    if (lam < 0.0 || !(u > 0.0)) throw InvalidArgument("CompositeProblem: need lambda >= 0 and u > 0");
  }

  double step() const { return 1.0 / (2.0 * norm_sq); }

  double smooth_value(const Vector& x) const { return (A->apply(x) - b).squaredNorm(); }

  Vector smooth_gradient(const Vector& x) const { return 2.0 * A->apply_adjoint(A->apply(x) - b); }

  double nonsmooth_value(const Vector& x) const {
    const double l1 = x.lpNorm<1>();
    return penalty == Penalty::L1 ? lambda * l1 : lambda * (x.squaredNorm() + l1);
  }

  double objective(const Vector& x) const { return smooth_value(x) + nonsmooth_value(x); }

  Vector prox(const Vector& v, double t) const {
    return penalty == Penalty::L1 ? prox_step_l1(v, t, lambda, upper) : prox_step_l2l1(v, t, lambda, upper);
  }
};

struct BaselineResult {
  Vector x;
  std::vector<double> objective;  // F(x_k), k = 0..iters
};

struct NoBaselineObserver {
  void operator()(int, const Vector&) const {}
};

/// x_{k+1} = prox_t(x_k - t ∇h(x_k)) with t = 1/(2||A||^2).
template <class Observer = NoBaselineObserver>
BaselineResult ista_run(const CompositeProblem& problem, const Vector& x0, int iters, Observer&& observer = {}) {
  if (iters < 0) throw InvalidArgument("ista_run: iters must be nonnegative");
  const double t = problem.step();
  BaselineResult out;
  out.x = x0;
  out.objective.reserve(static_cast<std::size_t>(iters) + 1);
  out.objective.push_back(problem.objective(out.x));
  observer(0, out.x);
  for (int k = 1; k <= iters; ++k) {
    out.x = problem.prox(out.x - t * problem.smooth_gradient(out.x), t);
    out.objective.push_back(problem.objective(out.x));
    observer(k, out.x);
  }
  return out;
}

/// Proximal gradient with Nesterov momentum (t_1 = 1,
/// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2), gradient steps taken at y_k.
template <class Observer = NoBaselineObserver>
BaselineResult fista_run(const CompositeProblem& problem, const Vector& x0, int iters, Observer&& observer = {}) {
  if (iters < 0) throw InvalidArgument("fista_run: iters must be nonnegative");
  const double step = problem.step();
  BaselineResult out;
  out.x = x0;
  out.objective.reserve(static_cast<std::size_t>(iters) + 1);
  out.objective.push_back(problem.objective(out.x));
  observer(0, out.x);
  Vector y = x0;
  double t = 1.0;
  for (int k = 1; k <= iters; ++k) {
    Vector next = problem.prox(y - step * problem.smooth_gradient(y), step);
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    y = next + ((t - 1.0) / t_next) * (next - out.x);
    out.x = std::move(next);
    t = t_next;
    out.objective.push_back(problem.objective(out.x));
    observer(k, out.x);
  }
  return out;
}

}  // namespace dsmooth
