#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dsmooth {

/// Portable Gaussian sampler.
///
/// The bit stream is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard for a given seed. Each 64-bit word is mapped to an open unit
/// interval sample as ((w >> 11) + 0.5) * 2^-53, and consecutive uniform pairs
/// (u1, u2) are turned into two normals with the Box–Muller transform
///   z0 = sqrt(-2 ln u1) cos(2π u2),  z1 = sqrt(-2 ln u1) sin(2π u2).
/// z0 is returned first, then z1. std::normal_distribution is not used since
/// its algorithm differs between standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dsmooth
