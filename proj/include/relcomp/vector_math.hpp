#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace relcomp {

using Vec = std::vector<double>;

inline double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("dot: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Norms below this are treated as degenerate (zero vector) in cosine.
inline constexpr double kDegenerateNorm = 1e-12;

// Cosine similarity in [-1, 1]. A vector with norm below kDegenerateNorm
// yields 0 and sets *degenerate when provided.
inline double cosine(std::span<const double> x, std::span<const double> y,
                     bool* degenerate = nullptr) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cosine: length mismatch");
  }
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x[i] * x[i];
    yy += y[i] * y[i];
    xy += x[i] * y[i];
  }
  const double nx = std::sqrt(xx);
  const double ny = std::sqrt(yy);
  if (nx < kDegenerateNorm || ny < kDegenerateNorm) {
    if (degenerate != nullptr) *degenerate = true;
    return 0.0;
  }
  double c = xy / (nx * ny);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

// Scales x to unit length in place; returns false (and leaves x unchanged)
// when the norm is below kDegenerateNorm.
inline bool normalize_in_place(std::span<double> x) {
  const double n = l2_norm(x);
  if (n < kDegenerateNorm) return false;
  for (double& v : x) v /= n;
  return true;
}

}  // namespace relcomp
