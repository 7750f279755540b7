#pragma once

#include <cmath>
#include <optional>

#include "dsmooth/common.hpp"

namespace dsmooth {

/// Convex f : R^n -> R ∪ {+∞} seen through its value and the argmin map
///   x_{f,q,ρ} = argmin_x { f(x) - <q, x> + (ρ/2)||x||^2 },
/// which is the only thing the smoothed dual needs from f.
class PrimalFunctionOracle {
 public:
  virtual ~PrimalFunctionOracle() = default;

  virtual Index dim() const = 0;
  virtual ExtendedReal value(const Vector& x) const = 0;

  /// Unique minimizer of f(x) - <q,x> + (rho/2)||x||^2. Requires rho > 0
  /// unless strong_convexity() > 0, in which case rho = 0 is accepted.
  virtual Vector regularized_argmin(const Vector& q, double rho) const = 0;

  /// D_f = sup{ ||x||^2 / 2 : x in dom f }, or kInfinity.
  virtual double domain_radius_sq_half() const = 0;

  /// Modulus rho_f >= 0 such that f - (rho_f/2)||.||^2 is convex.
  virtual double strong_convexity() const { return 0.0; }
};

/// mu-strongly convex g : R^m -> R ∪ {+∞} given through its value and
///   x_{g,p} = argmin_y { <p, y> + g(y) } = ∇g*(-p).
class StrongFunctionOracle {
 public:
  virtual ~StrongFunctionOracle() = default;

  virtual Index dim() const = 0;
  virtual ExtendedReal value(const Vector& y) const = 0;
  virtual Vector linear_tilt_argmin(const Vector& p) const = 0;
  virtual double mu() const = 0;

  /// Lipschitz constant of ∇g when g is differentiable on all of R^m.
  virtual std::optional<double> grad_lipschitz() const { return std::nullopt; }
};

inline double box_domain_radius_sq_half(Index n, double upper) {
  if (n < 0 || upper < 0.0) throw InvalidArgument("box domain: n and upper must be nonnegative");
  return static_cast<double>(n) * upper * upper / 2.0;
}

inline double domain_radius(const PrimalFunctionOracle& f) { return f.domain_radius_sq_half(); }

/// clamp((q_i - lambda) / rho, 0, u) componentwise: the regularized argmin of
/// lambda ||x||_1 + δ_[0,u]^n.
inline Vector box_l1_regularized_argmin(const Vector& q, double rho, double lambda, double upper) {
  if (!(rho > 0.0)) throw InvalidArgument("box_l1_regularized_argmin: rho must be positive");
  Vector x(q.size());
  for (Index i = 0; i < q.size(); ++i) x[i] = detail::clamp((q[i] - lambda) / rho, 0.0, upper);
  return x;
}

/// clamp((q_i - lambda) / (2 lambda + rho), 0, u) componentwise: the
/// regularized argmin of lambda(||x||^2 + ||x||_1) + δ_[0,u]^n. rho = 0 gives
/// the unsmoothed map ∇f*(q).
inline Vector box_l2l1_argmin(const Vector& q, double lambda, double upper, double rho = 0.0) {
  if (!(lambda > 0.0)) throw InvalidArgument("box_l2l1_argmin: lambda must be positive");
  if (rho < 0.0) throw InvalidArgument("box_l2l1_argmin: rho must be nonnegative");
  const double denom = 2.0 * lambda + rho;
  Vector x(q.size());
  for (Index i = 0; i < q.size(); ++i) x[i] = detail::clamp((q[i] - lambda) / denom, 0.0, upper);
  return x;
}

/// b - p/2, the minimizer of <p,y> + ||y - b||^2.
inline Vector squared_distance_tilt_argmin(const Vector& p, const Vector& b) {
  detail::require_same_size(p.size(), b.size(), "squared_distance_tilt_argmin");
  return b - 0.5 * p;
}

namespace detail {

inline bool in_box(const Vector& x, double upper) {
  for (Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= upper)) return false;
  }
  return true;
}

}  // namespace detail

/// f(x) = lambda ||x||_1 + δ_[0,u]^n(x).
class BoxL1 final : public PrimalFunctionOracle {
 public:
  BoxL1(Index n, double lambda, double upper) : n_(n), lambda_(lambda), upper_(upper) {
    if (n <= 0) throw InvalidArgument("BoxL1: dimension must be positive");
    if (!(lambda >= 0.0)) throw InvalidArgument("BoxL1: lambda must be nonnegative");
    if (!(upper > 0.0)) throw InvalidArgument("BoxL1: upper bound must be positive");
  }

  Index dim() const override { return n_; }

  ExtendedReal value(const Vector& x) const override {
    detail::require_same_size(x.size(), n_, "BoxL1::value");
    if (!detail::in_box(x, upper_)) return ExtendedReal::plus_infinity();
    return ExtendedReal::finite(lambda_ * x.lpNorm<1>());
  }

  Vector regularized_argmin(const Vector& q, double rho) const override {
    detail::require_same_size(q.size(), n_, "BoxL1::regularized_argmin");
    return box_l1_regularized_argmin(q, rho, lambda_, upper_);
  }

  double domain_radius_sq_half() const override { return box_domain_radius_sq_half(n_, upper_); }

  double lambda() const { return lambda_; }
  double upper() const { return upper_; }

 private:
  Index n_;
  double lambda_;
  double upper_;
};

/// f(x) = lambda (||x||^2 + ||x||_1) + δ_[0,u]^n(x), which is 2 lambda-strongly convex.
class BoxL2L1 final : public PrimalFunctionOracle {
 public:
  BoxL2L1(Index n, double lambda, double upper) : n_(n), lambda_(lambda), upper_(upper) {
    if (n <= 0) throw InvalidArgument("BoxL2L1: dimension must be positive");
    if (!(lambda > 0.0)) throw InvalidArgument("BoxL2L1: lambda must be positive");
    if (!(upper > 0.0)) throw InvalidArgument("BoxL2L1: upper bound must be positive");
  }

  Index dim() const override { return n_; }

  ExtendedReal value(const Vector& x) const override {
    detail::require_same_size(x.size(), n_, "BoxL2L1::value");
    if (!detail::in_box(x, upper_)) return ExtendedReal::plus_infinity();
    return ExtendedReal::finite(lambda_ * (x.squaredNorm() + x.lpNorm<1>()));
  }

  Vector regularized_argmin(const Vector& q, double rho) const override {
    detail::require_same_size(q.size(), n_, "BoxL2L1::regularized_argmin");
    return box_l2l1_argmin(q, lambda_, upper_, rho);
  }

  double domain_radius_sq_half() const override { return box_domain_radius_sq_half(n_, upper_); }
  double strong_convexity() const override { return 2.0 * lambda_; }

  double lambda() const { return lambda_; }
  double upper() const { return upper_; }

 private:
  Index n_;
  double lambda_;
  double upper_;
};

/// g(y) = ||y - b||^2: 2-strongly convex with 2-Lipschitz gradient.
class SquaredDistance final : public StrongFunctionOracle {
 public:
  explicit SquaredDistance(Vector b) : b_(std::move(b)) {
    if (b_.size() == 0) throw InvalidArgument("SquaredDistance: empty data vector");
  }

  Index dim() const override { return b_.size(); }

  ExtendedReal value(const Vector& y) const override {
    detail::require_same_size(y.size(), b_.size(), "SquaredDistance::value");
    return ExtendedReal::finite((y - b_).squaredNorm());
  }

  Vector linear_tilt_argmin(const Vector& p) const override { return squared_distance_tilt_argmin(p, b_); }

  double mu() const override { return 2.0; }
  std::optional<double> grad_lipschitz() const override { return 2.0; }

  const Vector& data() const { return b_; }

 private:
  Vector b_;
};

}  // namespace dsmooth
