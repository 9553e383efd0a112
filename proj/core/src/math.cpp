// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/math.hpp"

namespace procrt {

Mat4 Mat4::from_affine_rows(std::span<const double, 12> rows) {
  Mat4 r = identity();
  std::copy(rows.begin(), rows.end(), r.m.begin());
  return r;
}

Mat4 Mat4::translation(const Vec3& t) {
  Mat4 r = identity();
  r(0, 3) = t.x;
  r(1, 3) = t.y;
  r(2, 3) = t.z;
  return r;
}

Mat4 Mat4::scale(const Vec3& s) {
  Mat4 r = identity();
  r(0, 0) = s.x;
  r(1, 1) = s.y;
  r(2, 2) = s.z;
  return r;
}

Mat4 Mat4::rotation_x(double radians) {
  Mat4 r = identity();
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  r(1, 1) = c;
  r(1, 2) = -s;
  r(2, 1) = s;
  r(2, 2) = c;
  return r;
}

Mat4 Mat4::rotation_y(double radians) {
  Mat4 r = identity();
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  r(0, 0) = c;
  r(0, 2) = s;
  r(2, 0) = -s;
  r(2, 2) = c;
  return r;
}

std::array<double, 12> Mat4::affine_rows() const {
  std::array<double, 12> rows{};
  std::copy_n(m.begin(), 12, rows.begin());
  return rows;
}

Vec3 Mat4::transform_point(const Vec3& p) const {
  const Mat4& a = *this;
  return {a(0, 0) * p.x + a(0, 1) * p.y + a(0, 2) * p.z + a(0, 3),
          a(1, 0) * p.x + a(1, 1) * p.y + a(1, 2) * p.z + a(1, 3),
          a(2, 0) * p.x + a(2, 1) * p.y + a(2, 2) * p.z + a(2, 3)};
}

Vec3 Mat4::transform_vector(const Vec3& v) const {
  const Mat4& a = *this;
  return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z, a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
          a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

Vec3 Mat4::transform_projective(const Vec3& p) const {
  const Mat4& a = *this;
  const Vec3 xyz = transform_point(p);
  const double w = a(3, 0) * p.x + a(3, 1) * p.y + a(3, 2) * p.z + a(3, 3);
  return xyz / w;
}

Vec3 Mat4::transform_normal_transposed(const Vec3& n) const {
  const Mat4& a = *this;
  return {a(0, 0) * n.x + a(1, 0) * n.y + a(2, 0) * n.z, a(0, 1) * n.x + a(1, 1) * n.y + a(2, 1) * n.z,
          a(0, 2) * n.x + a(1, 2) * n.y + a(2, 2) * n.z};
}

Mat4 Mat4::transposed() const {
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r(i, j) = (*this)(j, i);
  }
  return r;
}

namespace {

// Cofactor expansion; returns the adjugate (transposed cofactors) and det.
double adjugate(const Mat4& a, Mat4& adj) {
  const auto& m = a.m;
  std::array<double, 16> inv{};
  inv[0] = m[5] * m[10] * m[15] - m[5] * m[11] * m[14] - m[9] * m[6] * m[15] + m[9] * m[7] * m[14] +
           m[13] * m[6] * m[11] - m[13] * m[7] * m[10];
  inv[4] = -m[4] * m[10] * m[15] + m[4] * m[11] * m[14] + m[8] * m[6] * m[15] - m[8] * m[7] * m[14] -
           m[12] * m[6] * m[11] + m[12] * m[7] * m[10];
  inv[8] = m[4] * m[9] * m[15] - m[4] * m[11] * m[13] - m[8] * m[5] * m[15] + m[8] * m[7] * m[13] +
           m[12] * m[5] * m[11] - m[12] * m[7] * m[9];
  inv[12] = -m[4] * m[9] * m[14] + m[4] * m[10] * m[13] + m[8] * m[5] * m[14] - m[8] * m[6] * m[13] -
            m[12] * m[5] * m[10] + m[12] * m[6] * m[9];
  inv[1] = -m[1] * m[10] * m[15] + m[1] * m[11] * m[14] + m[9] * m[2] * m[15] - m[9] * m[3] * m[14] -
           m[13] * m[2] * m[11] + m[13] * m[3] * m[10];
  inv[5] = m[0] * m[10] * m[15] - m[0] * m[11] * m[14] - m[8] * m[2] * m[15] + m[8] * m[3] * m[14] +
           m[12] * m[2] * m[11] - m[12] * m[3] * m[10];
  inv[9] = -m[0] * m[9] * m[15] + m[0] * m[11] * m[13] + m[8] * m[1] * m[15] - m[8] * m[3] * m[13] -
           m[12] * m[1] * m[11] + m[12] * m[3] * m[9];
  inv[13] = m[0] * m[9] * m[14] - m[0] * m[10] * m[13] - m[8] * m[1] * m[14] + m[8] * m[2] * m[13] +
            m[12] * m[1] * m[10] - m[12] * m[2] * m[9];
  inv[2] = m[1] * m[6] * m[15] - m[1] * m[7] * m[14] - m[5] * m[2] * m[15] + m[5] * m[3] * m[14] + m[13] * m[2] * m[7] -
           m[13] * m[3] * m[6];
  inv[6] = -m[0] * m[6] * m[15] + m[0] * m[7] * m[14] + m[4] * m[2] * m[15] - m[4] * m[3] * m[14] -
           m[12] * m[2] * m[7] + m[12] * m[3] * m[6];
  inv[10] = m[0] * m[5] * m[15] - m[0] * m[7] * m[13] - m[4] * m[1] * m[15] + m[4] * m[3] * m[13] +
            m[12] * m[1] * m[7] - m[12] * m[3] * m[5];
  inv[14] = -m[0] * m[5] * m[14] + m[0] * m[6] * m[13] + m[4] * m[1] * m[14] - m[4] * m[2] * m[13] -
            m[12] * m[1] * m[6] + m[12] * m[2] * m[5];
  inv[3] = -m[1] * m[6] * m[11] + m[1] * m[7] * m[10] + m[5] * m[2] * m[11] - m[5] * m[3] * m[10] - m[9] * m[2] * m[7] +
           m[9] * m[3] * m[6];
  inv[7] = m[0] * m[6] * m[11] - m[0] * m[7] * m[10] - m[4] * m[2] * m[11] + m[4] * m[3] * m[10] + m[8] * m[2] * m[7] -
           m[8] * m[3] * m[6];
  inv[11] = -m[0] * m[5] * m[11] + m[0] * m[7] * m[9] + m[4] * m[1] * m[11] - m[4] * m[3] * m[9] - m[8] * m[1] * m[7] +
            m[8] * m[3] * m[5];
  inv[15] = m[0] * m[5] * m[10] - m[0] * m[6] * m[9] - m[4] * m[1] * m[10] + m[4] * m[2] * m[9] + m[8] * m[1] * m[6] -
            m[8] * m[2] * m[5];
  adj.m = inv;
  return m[0] * inv[0] + m[1] * inv[4] + m[2] * inv[8] + m[3] * inv[12];
}

}  // namespace

double Mat4::determinant() const {
  Mat4 adj;
  return adjugate(*this, adj);
}

std::optional<Mat4> Mat4::inverse() const {
  Mat4 adj;
  const double det = adjugate(*this, adj);
  if (!(std::abs(det) > 1e-12)) return std::nullopt;
  const double inv_det = 1.0 / det;
  for (double& v : adj.m) v *= inv_det;
  return adj;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

double identity_error(const Mat4& a, const Mat4& b) {
  const Mat4 p = a * b;
  double err = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      err = std::max(err, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  return err;
}

int Aabb::longest_axis() const {
  const Vec3 e = extent();
  if (e.x >= e.y && e.x >= e.z) return 0;
  return e.y >= e.z ? 1 : 2;
}

bool Aabb::contains(const Aabb& inner, double slack) const {
  return inner.min.x >= min.x - slack && inner.min.y >= min.y - slack && inner.min.z >= min.z - slack &&
         inner.max.x <= max.x + slack && inner.max.y <= max.y + slack && inner.max.z <= max.z + slack;
}

bool Aabb::contains(const Vec3& p, double slack) const {
  return p.x >= min.x - slack && p.y >= min.y - slack && p.z >= min.z - slack && p.x <= max.x + slack &&
         p.y <= max.y + slack && p.z <= max.z + slack;
}

std::array<Vec3, 8> Aabb::corners() const {
  std::array<Vec3, 8> c;
  for (int i = 0; i < 8; ++i) {
    c[i] = {(i & 1) ? max.x : min.x, (i & 2) ? max.y : min.y, (i & 4) ? max.z : min.z};
  }
  return c;
}

Aabb Aabb::transformed(const Mat4& m) const {
  Aabb out;
  for (const Vec3& c : corners()) out.expand(m.transform_point(c));
  return out;
}

std::optional<std::pair<double, double>> intersect_slabs(const Aabb& box, const Vec3& origin, const Vec3& inv_direction,
                                                         double t_min, double t_max) {
  double t0 = t_min;
  double t1 = t_max;
  for (int axis = 0; axis < 3; ++axis) {
    double near = (box.min[axis] - origin[axis]) * inv_direction[axis];
    double far = (box.max[axis] - origin[axis]) * inv_direction[axis];
    // 0 * inf yields NaN for origins on a slab plane with a parallel direction.
    if (std::isnan(near)) near = -std::numeric_limits<double>::infinity();
    if (std::isnan(far)) far = std::numeric_limits<double>::infinity();
    if (near > far) std::swap(near, far);
    t0 = near > t0 ? near : t0;
    t1 = far < t1 ? far : t1;
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

}  // namespace procrt
