#pragma once
#include <cmath>

namespace homloc {

/// @brief Minimal 3-vector used for momentum differences and direction vectors.
/// Component order follows the measurement axes: (frequency, x, y).
struct Vec3 {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

inline Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2}; }
inline Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2}; }
inline Vec3 operator-(const Vec3 &a) { return {-a.x0, -a.x1, -a.x2}; }
inline Vec3 operator*(double c, const Vec3 &a) { return {c * a.x0, c * a.x1, c * a.x2}; }

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm_squared(const Vec3 &a) { return dot(a, a); }
inline double norm(const Vec3 &a) { return std::sqrt(norm_squared(a)); }

}  // namespace homloc
