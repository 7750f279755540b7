#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include "dsmooth/common.hpp"
#include "dsmooth/random.hpp"

namespace dsmooth {

/// Row-major grayscale image with pixels in [0, scale].
struct GrayImage {
  Index rows = 0;
  Index cols = 0;
  double scale = 1.0;
  Vector pixels;
};

namespace detail {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000) throw FormatError(std::string("PGM: ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= bytes_.size()) throw FormatError(std::string("PGM: truncated, expected ") + what, pos_);
      throw FormatError(std::string("PGM: expected ") + what, pos_);
    }
    return v;
  }

  std::string_view rest() const { return bytes_.substr(pos_); }
  char peek() const { return pos_ < bytes_.size() ? bytes_[pos_] : '\0'; }
  void advance(std::size_t n) { pos_ += n; }
  bool at_end() const { return pos_ >= bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace detail

/// Decodes an 8-bit PGM (P2 or P5, maxval 255); level p maps to p/255 * scale.
inline GrayImage parse_pgm(std::string_view bytes, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("parse_pgm: scale must be positive");
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw FormatError("PGM: bad magic, expected P2 or P5", 0);
  }
  const bool binary = bytes[1] == '5';
  detail::PgmReader reader(bytes);
  reader.advance(2);
  if (!reader.at_end() && !std::isspace(static_cast<unsigned char>(reader.peek())) && reader.peek() != '#') {
    throw FormatError("PGM: bad magic, expected P2 or P5", 0);
  }
  GrayImage img;
  img.cols = reader.read_uint("width");
  img.rows = reader.read_uint("height");
  const std::size_t maxval_at = (reader.skip_separators(), reader.offset());
  const long maxval = reader.read_uint("maxval");
  if (img.rows <= 0 || img.cols <= 0) throw FormatError("PGM: zero image dimension", maxval_at);
  if (maxval != 255) throw FormatError("PGM: maxval must be 255", maxval_at);
  img.scale = scale;
  const Index n = img.rows * img.cols;
  img.pixels.resize(n);
  if (binary) {
    if (reader.at_end() || !std::isspace(static_cast<unsigned char>(reader.peek()))) {
      throw FormatError("PGM: missing separator before raster", reader.offset());
    }
    reader.advance(1);
    const std::string_view raster = reader.rest();
    if (raster.size() < static_cast<std::size_t>(n)) {
      throw FormatError("PGM: truncated raster", reader.offset() + raster.size());
    }
    for (Index i = 0; i < n; ++i) {
      img.pixels[i] = static_cast<unsigned char>(raster[static_cast<std::size_t>(i)]) / 255.0 * scale;
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      const std::size_t at = (reader.skip_separators(), reader.offset());
      const long v = reader.read_uint("pixel");
      if (v > 255) throw FormatError("PGM: pixel exceeds maxval", at);
      img.pixels[i] = static_cast<double>(v) / 255.0 * scale;
    }
  }
  return img;
}

/// 8-bit level of a pixel: round-half-up of v/scale*255, clamped to [0,255].
inline int pixel_level(double v, double scale) {
  const double level = std::floor(v / scale * 255.0 + 0.5);
  if (!(level > 0.0)) return 0;
  return level > 255.0 ? 255 : static_cast<int>(level);
}

inline std::string encode_pgm(const GrayImage& img, bool binary = true) {
  if (img.pixels.size() != img.rows * img.cols) throw InvalidArgument("encode_pgm: pixel count mismatch");
  std::string out = (binary ? "P5\n" : "P2\n") + std::to_string(img.cols) + " " + std::to_string(img.rows) +
                    "\n255\n";
  for (Index i = 0; i < img.pixels.size(); ++i) {
    const int level = pixel_level(img.pixels[i], img.scale);
    if (binary) {
      out.push_back(static_cast<char>(static_cast<unsigned char>(level)));
    } else {
      out += std::to_string(level);
      out.push_back((i + 1) % img.cols == 0 ? '\n' : ' ');
    }
  }
  return out;
}

inline GrayImage load_pgm(const std::string& path, double scale) {
  try {
    return parse_pgm(detail::read_file(path), scale);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.reason(), e.offset());
  }
}

inline void save_pgm(const std::string& path, const GrayImage& img, bool binary = true) {
  detail::write_file(path, encode_pgm(img, binary));
}

/// Adds i.i.d. N(0, std^2) from GaussianSampler(seed); no clamping.
inline Vector add_gaussian_noise(const Vector& x, double std_dev, std::uint64_t seed) {
  if (!(std_dev >= 0.0)) throw InvalidArgument("add_gaussian_noise: std must be nonnegative");
  if (std_dev == 0.0) return x;
  GaussianSampler rng(seed);
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = x[i] + std_dev * rng.standard_normal();
  return out;
}

/// 10 log10(||x - b||^2 / ||x - x_k||^2) in dB; ±inf when a norm vanishes.
inline double isnr(const Vector& x_true, const Vector& b_observed, const Vector& x_k) {
  detail::require_same_size(x_true.size(), b_observed.size(), "isnr");
  detail::require_same_size(x_true.size(), x_k.size(), "isnr");
  const double num = (x_true - b_observed).squaredNorm();
  const double den = (x_true - x_k).squaredNorm();
  if (den == 0.0) return kInfinity;
  if (num == 0.0) return -kInfinity;
  return 10.0 * std::log10(num / den);
}

/// Deterministic binary test image: white discs and ellipses on a black
/// background, in the spirit of the classic "blobs" test picture.
inline GrayImage synthetic_blobs(Index rows, Index cols, double scale = 1.0) {
  if (rows <= 0 || cols <= 0) throw InvalidArgument("synthetic_blobs: size must be positive");
  struct Blob {
    double cy, cx, ry, rx;
  };
  constexpr Blob blobs[] = {
      {0.25, 0.22, 0.15, 0.12}, {0.70, 0.20, 0.10, 0.14}, {0.42, 0.66, 0.18, 0.13},
      {0.84, 0.72, 0.08, 0.10}, {0.14, 0.82, 0.07, 0.07}, {0.60, 0.45, 0.05, 0.05},
  };
  GrayImage img;
  img.rows = rows;
  img.cols = cols;
  img.scale = scale;
  img.pixels.resize(rows * cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(rows);
      const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(cols);
      bool inside = false;
      for (const Blob& b : blobs) {
        const double dy = (y - b.cy) / b.ry;
        const double dx = (x - b.cx) / b.rx;
        inside = inside || dy * dy + dx * dx <= 1.0;
      }
      img.pixels[r * cols + c] = inside ? scale : 0.0;
    }
  }
  return img;
}

/// Real-valued image sidecar: "DSVEC 1\n<rows> <cols>\n" followed by one
/// value per line in %.17g, which round-trips doubles exactly.
inline std::string encode_vector_sidecar(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw InvalidArgument("sidecar: size mismatch");
  std::string out = "DSVEC 1\n" + std::to_string(rows) + " " + std::to_string(cols) + "\n";
  char buf[32];
  for (Index i = 0; i < v.size(); ++i) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g\n", v[i]);
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

struct SidecarImage {
  Index rows = 0;
  Index cols = 0;
  Vector values;
};

inline SidecarImage parse_vector_sidecar(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  std::string magic;
  int version = 0;
  SidecarImage out;
  if (!(in >> magic >> version) || magic != "DSVEC" || version != 1) {
    throw FormatError("sidecar: bad header", 0);
  }
  if (!(in >> out.rows >> out.cols) || out.rows <= 0 || out.cols <= 0) {
    throw FormatError("sidecar: bad dimensions", static_cast<std::size_t>(std::max<std::streamoff>(0, in.tellg())));
  }
  out.values.resize(out.rows * out.cols);
  for (Index i = 0; i < out.values.size(); ++i) {
    std::string tok;
    const auto at = in.tellg();
    if (!(in >> tok)) throw FormatError("sidecar: truncated payload", bytes.size());
    char* end = nullptr;
    out.values[i] = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      throw FormatError("sidecar: bad number '" + tok + "'", static_cast<std::size_t>(at));
    }
  }
  return out;
}

inline SidecarImage load_vector_sidecar(const std::string& path) {
  try {
    return parse_vector_sidecar(detail::read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.reason(), e.offset());
  }
}

inline void save_vector_sidecar(const std::string& path, const Vector& v, Index rows, Index cols) {
  detail::write_file(path, encode_vector_sidecar(v, rows, cols));
}

}  // namespace dsmooth
