#pragma once

// SO(3) and SO(3)^d primitives.
//
// Hat-map convention: hat(v) * y == v.cross(y), so e_1 maps to the generator
// of rotations about x. Every Lie-algebra coordinate in the library (SRV
// values, signature letters) uses this basis, joint-major: letter 3j+a is
// axis a of joint j.

#include <span>
#include <vector>

#include <Eigen/Core>

namespace sigshape {

using Rotation = Eigen::Matrix3d;
using AxisVector = Eigen::Vector3d;

Eigen::Matrix3d hat(const AxisVector& v);
AxisVector vee(const Eigen::Matrix3d& m);

/// Rodrigues formula, with Taylor expansions below 1e-6 rad.
Rotation exp_so3(const AxisVector& v);

/// Principal logarithm, ||result|| <= pi. Near angle pi the axis comes from the
/// symmetric part of R; at exactly pi the axis sign is fixed by making the
/// first nonzero component positive. Throws AngleAtPi only if no stable axis
/// can be extracted (non-rotation input).
AxisVector log_so3(const Rotation& r);

/// kappa(s) = exp(s log(B A^T)) A.
Rotation geodesic_interp(const Rotation& a, const Rotation& b, double s);

/// Frobenius norm of R^T R - I.
double orthonormality_error(const Rotation& r);

/// Nearest rotation in the Frobenius sense (polar factor, det +1).
Rotation project_to_rotation(const Eigen::Matrix3d& m);

/// Re-orthonormalizes only when the drift exceeds 1e-8.
Rotation reorthonormalize(const Rotation& r);

/// An element of SO(3)^d.
class Pose {
 public:
  Pose() = default;
  explicit Pose(std::vector<Rotation> joints);

  static Pose identity(int joint_count);

  int joint_count() const noexcept { return static_cast<int>(joints_.size()); }
  const Rotation& operator[](int j) const { return joints_[static_cast<std::size_t>(j)]; }
  Rotation& operator[](int j) { return joints_[static_cast<std::size_t>(j)]; }
  std::span<const Rotation> joints() const noexcept { return joints_; }

 private:
  std::vector<Rotation> joints_;
};

void require_same_joints(const Pose& p, const Pose& q);

/// Componentwise binary map; f(P_j, Q_j, s) for each joint.
template <typename F>
Pose pose_map(F&& f, const Pose& p, const Pose& q, double s) {
  require_same_joints(p, q);
  std::vector<Rotation> out;
  out.reserve(static_cast<std::size_t>(p.joint_count()));
  for (int j = 0; j < p.joint_count(); ++j) out.push_back(f(p[j], q[j], s));
  return Pose(std::move(out));
}

Pose pose_interp(const Pose& p, const Pose& q, double s);
Pose pose_compose(const Pose& p, const Pose& q);
Pose pose_inverse(const Pose& p);
/// R_g(P) = P * g, componentwise.
Pose right_translate(const Pose& p, const Pose& g);

/// Largest componentwise deviation, Frobenius per joint.
double pose_distance_max(const Pose& p, const Pose& q);

}  // namespace sigshape
