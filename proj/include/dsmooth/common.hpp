#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dsmooth {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a problem falls outside what the method supports
// (e.g. unbounded dom f where the smoothing bias needs D_f).
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertificateInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& reason, std::size_t offset)
      : std::runtime_error(reason + " (at byte " + std::to_string(offset) + ")"),
        reason_(reason),
        offset_(offset) {}

  const std::string& reason() const noexcept { return reason_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string reason_;
  std::size_t offset_;
};

/// A value in R ∪ {+∞}. Convex oracles return this so that indicator terms
/// never leak an infinite double into arithmetic.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  static constexpr ExtendedReal finite(double v) { return ExtendedReal(v, true); }
  static constexpr ExtendedReal plus_infinity() { return ExtendedReal(0.0, false); }

  constexpr bool is_finite() const noexcept { return finite_; }

  double value() const {
    if (!finite_) throw NumericalFailure("extended real is +inf");
    return value_;
  }

  // +inf is mapped to the IEEE value only at the reporting boundary.
  constexpr double to_double() const noexcept { return finite_ ? value_ : kInfinity; }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (!a.finite_ || !b.finite_) return plus_infinity();
    return finite(a.value_ + b.value_);
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }

 private:
  constexpr ExtendedReal(double v, bool finite) : value_(v), finite_(finite) {}

  double value_ = 0.0;
  bool finite_ = true;
};

namespace detail {

inline void require_same_size(Index a, Index b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
  }
}

inline double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace detail
}  // namespace dsmooth
