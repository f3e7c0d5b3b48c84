#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace skillbench {

using Vec3 = Eigen::Vector3d;

/// Angle between two direction vectors in [0, pi]. 0 means the second
/// continues straight along the first. atan2 keeps precision near 0 and pi.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar turn_angle(const Eigen::MatrixBase<DerivedA>& incoming,
                                     const Eigen::MatrixBase<DerivedB>& outgoing) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedA, 3)
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedB, 3)
  using std::atan2;
  const auto cross = incoming.cross(outgoing).norm();
  const auto dot = incoming.dot(outgoing);
  return atan2(cross, dot);
}

/// Distance from `point` to the segment [a, b].
template <typename DerivedP, typename DerivedA, typename DerivedB>
typename DerivedP::Scalar distance_to_segment(const Eigen::MatrixBase<DerivedP>& point,
                                              const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedP::Scalar;
  const Eigen::Matrix<Scalar, 3, 1> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return (point - a).norm();
  Scalar t = (point - a).dot(ab) / len2;
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (point - (a + t * ab)).norm();
}

/// Circle through three points. Returns false when the points are
/// (numerically) collinear.
struct Circle3 {
  Vec3 center;
  Vec3 normal;  // unit, orientation such that start -> mid -> end is counter-clockwise
  double radius = 0.0;
  double sweep = 0.0;  // radians, start to end passing through mid, in (0, 2pi)
};

bool circle_through(const Vec3& start, const Vec3& mid, const Vec3& end, Circle3& out);

}  // namespace skillbench
