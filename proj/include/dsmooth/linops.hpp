#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dsmooth/common.hpp"
#include "dsmooth/random.hpp"

namespace dsmooth {

/// Matrix-free linear map A : R^dim_in -> R^dim_out together with its adjoint.
/// Implementations are immutable after construction; apply and apply_adjoint
/// may be called concurrently.
class LinearMap {
 public:
  virtual ~LinearMap() = default;

  virtual Index dim_in() const = 0;
  virtual Index dim_out() const = 0;

  /// Upper bound on ||A||^2.
  virtual double norm_sq_bound() const = 0;

  Vector apply(const Vector& x) const {
    detail::require_same_size(x.size(), dim_in(), "LinearMap::apply");
    Vector y(dim_out());
    apply_into(x, y);
    return y;
  }

  Vector apply_adjoint(const Vector& y) const {
    detail::require_same_size(y.size(), dim_out(), "LinearMap::apply_adjoint");
    Vector x(dim_in());
    apply_adjoint_into(y, x);
    return x;
  }

 protected:
  // Sizes are checked by the public wrappers; out is presized.
  virtual void apply_into(const Vector& x, Vector& out) const = 0;
  virtual void apply_adjoint_into(const Vector& y, Vector& out) const = 0;
};

class IdentityMap final : public LinearMap {
 public:
  explicit IdentityMap(Index n) : n_(n) {
    if (n <= 0) throw InvalidArgument("IdentityMap: dimension must be positive");
  }

  Index dim_in() const override { return n_; }
  Index dim_out() const override { return n_; }
  double norm_sq_bound() const override { return 1.0; }

 protected:
  void apply_into(const Vector& x, Vector& out) const override { out = x; }
  void apply_adjoint_into(const Vector& y, Vector& out) const override { out = y; }

 private:
  Index n_;
};

class DenseMatrixMap final : public LinearMap {
 public:
  explicit DenseMatrixMap(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.cols() == 0) throw InvalidArgument("DenseMatrixMap: empty matrix");
  }

  Index dim_in() const override { return m_.cols(); }
  Index dim_out() const override { return m_.rows(); }
  // Frobenius norm squared dominates the spectral norm squared.
  double norm_sq_bound() const override { return m_.squaredNorm(); }

  const Matrix& matrix() const { return m_; }

 protected:
  void apply_into(const Vector& x, Vector& out) const override { out.noalias() = m_ * x; }
  void apply_adjoint_into(const Vector& y, Vector& out) const override {
    out.noalias() = m_.transpose() * y;
  }

 private:
  Matrix m_;
};

/// Normalized Gaussian lowpass kernel of odd size: entries proportional to
/// exp(-(i^2 + j^2) / (2 sigma^2)) on the centered grid, summing to one.
inline Matrix gaussian_kernel(int size, double sigma) {
  if (size <= 0 || size % 2 == 0) throw InvalidArgument("gaussian_kernel: size must be odd and positive");
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian_kernel: sigma must be positive");
  const int half = size / 2;
  Matrix k(size, size);
  for (int i = -half; i <= half; ++i) {
    for (int j = -half; j <= half; ++j) {
      k(i + half, j + half) = std::exp(-static_cast<double>(i * i + j * j) / (2.0 * sigma * sigma));
    }
  }
  k /= k.sum();
  return k;
}

namespace detail {

/// Half-sample symmetric reflection of an index into [0, n): ... 1 0 | 0 1 ... n-1 | n-1 n-2 ...
inline Index reflect_index(Index i, Index n) {
  const Index period = 2 * n;
  Index r = i % period;
  if (r < 0) r += period;
  return r < n ? r : period - 1 - r;
}

}  // namespace detail

/// 2-D correlation of a row-major image with a square odd kernel under
/// reflexive ("symmetric") boundary conditions.
class BlurOperator final : public LinearMap {
 public:
  BlurOperator(Index rows, Index cols, Matrix kernel)
      : rows_(rows), cols_(cols), kernel_(std::move(kernel)) {
    if (rows <= 0 || cols <= 0) throw InvalidArgument("BlurOperator: image size must be positive");
    if (kernel_.rows() != kernel_.cols() || kernel_.rows() % 2 == 0) {
      throw InvalidArgument("BlurOperator: kernel must be square with odd size");
    }
    if ((kernel_.array() < 0.0).any()) throw InvalidArgument("BlurOperator: kernel entries must be nonnegative");
    if (std::abs(kernel_.sum() - 1.0) > 1e-12) throw InvalidArgument("BlurOperator: kernel must sum to 1");
    half_ = kernel_.rows() / 2;
    row_index_ = reflect_table(rows_);
    col_index_ = reflect_table(cols_);
    symmetric_ = kernel_.isApprox(kernel_.colwise().reverse(), 0.0) &&
                 kernel_.isApprox(kernel_.rowwise().reverse(), 0.0);
    // ||A||^2 <= ||A||_1 ||A||_inf; rows sum to one, so only column sums are needed.
    norm_sq_bound_ = apply_adjoint(Vector::Ones(rows_ * cols_)).maxCoeff();
  }

  Index dim_in() const override { return rows_ * cols_; }
  Index dim_out() const override { return rows_ * cols_; }
  double norm_sq_bound() const override { return norm_sq_bound_; }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const Matrix& kernel() const { return kernel_; }
  /// Kernel mirror-symmetric in both axes; the operator is then self-adjoint.
  bool is_symmetric() const { return symmetric_; }

 protected:
  void apply_into(const Vector& x, Vector& out) const override {
    const Index size = kernel_.rows();
    for (Index r = 0; r < rows_; ++r) {
      for (Index c = 0; c < cols_; ++c) {
        double acc = 0.0;
        for (Index a = 0; a < size; ++a) {
          const Index src_row = row_index_[r * size + a] * cols_;
          for (Index b = 0; b < size; ++b) {
            acc += kernel_(a, b) * x[src_row + col_index_[c * size + b]];
          }
        }
        out[r * cols_ + c] = acc;
      }
    }
  }

  void apply_adjoint_into(const Vector& y, Vector& out) const override {
    const Index size = kernel_.rows();
    out.setZero();
    for (Index r = 0; r < rows_; ++r) {
      for (Index c = 0; c < cols_; ++c) {
        const double v = y[r * cols_ + c];
        for (Index a = 0; a < size; ++a) {
          const Index dst_row = row_index_[r * size + a] * cols_;
          for (Index b = 0; b < size; ++b) {
            out[dst_row + col_index_[c * size + b]] += kernel_(a, b) * v;
          }
        }
      }
    }
  }

 private:
  // table[i * size + a] = reflected source index for output i and kernel offset a - half.
  std::vector<Index> reflect_table(Index n) const {
    const Index size = kernel_.rows();
    std::vector<Index> table(static_cast<std::size_t>(n * size));
    for (Index i = 0; i < n; ++i) {
      for (Index a = 0; a < size; ++a) {
        table[static_cast<std::size_t>(i * size + a)] = detail::reflect_index(i + a - half_, n);
      }
    }
    return table;
  }

  Index rows_;
  Index cols_;
  Matrix kernel_;
  Index half_ = 0;
  std::vector<Index> row_index_;
  std::vector<Index> col_index_;
  bool symmetric_ = false;
  double norm_sq_bound_ = 1.0;
};

struct PowerIterationOptions {
  int max_iters = 100;
  std::uint64_t seed = 1;
  double rel_tol = 1e-8;
};

struct PowerIterationResult {
  double estimate = 0.0;
  int iterations = 0;
  // Rayleigh quotient of A*A at each normalized iterate.
  std::vector<double> rayleigh;
};

/// Power iteration on A*A. The estimate is clamped to A.norm_sq_bound().
inline PowerIterationResult power_iteration(const LinearMap& A, const PowerIterationOptions& opts = {}) {
  if (opts.max_iters < 1) throw InvalidArgument("power_iteration: iters must be >= 1");
  PowerIterationResult result;
  GaussianSampler rng(opts.seed);
  Vector x(A.dim_in());
  for (Index i = 0; i < x.size(); ++i) x[i] = 2.0 * rng.uniform_open() - 1.0;
  x.normalize();

  double previous = 0.0;
  for (int k = 0; k < opts.max_iters; ++k) {
    const Vector y = A.apply(x);
    const double rq = y.squaredNorm();
    result.rayleigh.push_back(rq);
    result.iterations = k + 1;
    result.estimate = rq;
    if (rq == 0.0) break;
    if (k > 0 && std::abs(rq - previous) <= opts.rel_tol * rq) break;
    previous = rq;
    Vector z = A.apply_adjoint(y);
    const double zn = z.norm();
    if (zn == 0.0) break;
    x = z / zn;
  }
  result.estimate = std::min(result.estimate, A.norm_sq_bound());
  return result;
}

inline double operator_norm_sq(const LinearMap& A, int iters = 100, std::uint64_t seed = 1) {
  PowerIterationOptions opts;
  opts.max_iters = iters;
  opts.seed = seed;
  return power_iteration(A, opts).estimate;
}

}  // namespace dsmooth
