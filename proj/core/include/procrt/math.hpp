// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>

namespace procrt {

template <typename T>
struct Vec3T {
  T x{};
  T y{};
  T z{};

  constexpr Vec3T() = default;
  constexpr Vec3T(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

  template <typename U>
  constexpr explicit Vec3T(const Vec3T<U>& o)
      : x(static_cast<T>(o.x)), y(static_cast<T>(o.y)), z(static_cast<T>(o.z)) {}

  constexpr T operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3T operator-() const { return {-x, -y, -z}; }
  constexpr Vec3T& operator+=(const Vec3T& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3T& operator-=(const Vec3T& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3T& operator*=(T s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3T operator+(Vec3T a, const Vec3T& b) { return a += b; }
  friend constexpr Vec3T operator-(Vec3T a, const Vec3T& b) { return a -= b; }
  friend constexpr Vec3T operator*(Vec3T a, T s) { return a *= s; }
  friend constexpr Vec3T operator*(T s, Vec3T a) { return a *= s; }
  friend constexpr Vec3T operator/(const Vec3T& a, T s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(const Vec3T&, const Vec3T&) = default;
};

using Vec3 = Vec3T<double>;
using Float3 = Vec3T<float>;

template <typename T>
constexpr T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T>
constexpr Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename T>
T length(const Vec3T<T>& v) {
  return std::sqrt(dot(v, v));
}

template <typename T>
Vec3T<T> normalize(const Vec3T<T>& v) {
  const T len = length(v);
  return len > T(0) ? v / len : v;
}

template <typename T>
constexpr Vec3T<T> min(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}

template <typename T>
constexpr Vec3T<T> max(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

/// Row-major 4x4 matrix acting on column vectors (p' = M * p).
struct Mat4 {
  std::array<double, 16> m{};

  static constexpr Mat4 identity() {
    Mat4 r;
    r.m[0] = r.m[5] = r.m[10] = r.m[15] = 1.0;
    return r;
  }

  /// Builds an affine matrix from 12 row-major numbers (the top 3x4 block).
  static Mat4 from_affine_rows(std::span<const double, 12> rows);
  static Mat4 translation(const Vec3& t);
  static Mat4 scale(const Vec3& s);
  static Mat4 rotation_x(double radians);
  static Mat4 rotation_y(double radians);

  constexpr double operator()(int row, int col) const { return m[row * 4 + col]; }
  constexpr double& operator()(int row, int col) { return m[row * 4 + col]; }

  std::array<double, 12> affine_rows() const;

  Vec3 transform_point(const Vec3& p) const;
  Vec3 transform_vector(const Vec3& v) const;
  /// Full homogeneous transform followed by the perspective divide.
  Vec3 transform_projective(const Vec3& p) const;
  /// Applies the transpose of the upper 3x3 block; for a world-to-local matrix
  /// this maps a local-space normal to world space.
  Vec3 transform_normal_transposed(const Vec3& n) const;

  Mat4 transposed() const;
  double determinant() const;
  /// General inverse; empty when |det| <= 1e-12.
  std::optional<Mat4> inverse() const;

  friend Mat4 operator*(const Mat4& a, const Mat4& b);
  friend bool operator==(const Mat4&, const Mat4&) = default;
};

/// Maximum absolute elementwise difference between a*b and the identity.
double identity_error(const Mat4& a, const Mat4& b);

struct Aabb {
  Vec3 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
  Vec3 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};

  constexpr Aabb() = default;
  constexpr Aabb(const Vec3& lo, const Vec3& hi) : min(lo), max(hi) {}

  bool valid() const { return min.x <= max.x && min.y <= max.y && min.z <= max.z; }
  bool strictly_positive_extent() const { return min.x < max.x && min.y < max.y && min.z < max.z; }
  void expand(const Vec3& p) {
    min = procrt::min(min, p);
    max = procrt::max(max, p);
  }
  void expand(const Aabb& b) {
    min = procrt::min(min, b.min);
    max = procrt::max(max, b.max);
  }
  Vec3 centroid() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  int longest_axis() const;
  bool contains(const Aabb& inner, double slack = 0.0) const;
  bool contains(const Vec3& p, double slack = 0.0) const;
  /// Bounds of the eight transformed corners.
  Aabb transformed(const Mat4& m) const;
  std::array<Vec3, 8> corners() const;
};

/// Ray-slab test. Returns the parametric interval [t_enter, t_exit] where the
/// ray is inside the box, clipped to [t_min, t_max]; empty when disjoint.
std::optional<std::pair<double, double>> intersect_slabs(const Aabb& box, const Vec3& origin, const Vec3& inv_direction,
                                                         double t_min, double t_max);

inline Vec3 reciprocal(const Vec3& d) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto inv = [](double v) { return v != 0.0 ? 1.0 / v : (std::signbit(v) ? -kInf : kInf); };
  return {inv(d.x), inv(d.y), inv(d.z)};
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace procrt
