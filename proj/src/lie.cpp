#include "sigshape/lie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "sigshape/error.hpp"

namespace sigshape {

Eigen::Matrix3d hat(const AxisVector& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

AxisVector vee(const Eigen::Matrix3d& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

Rotation exp_so3(const AxisVector& v) {
  const double theta2 = v.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;
  double b;
  if (theta < 1e-6) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Eigen::Matrix3d k = hat(v);
  return Eigen::Matrix3d::Identity() + a * k + b * (k * k);
}

AxisVector log_so3(const Rotation& r) {
  const double trace = r.trace();
  const double cos_theta = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  const AxisVector w = 0.5 * vee(r - r.transpose());
  const double sin_theta = w.norm();
  const double theta = std::atan2(sin_theta, cos_theta);

  if (trace > -1.0 + 1e-6) {
    if (theta < 1e-6) return (1.0 + theta * theta / 6.0) * w;
    return (theta / sin_theta) * w;
  }

  // Near pi: symmetric part is cos(t) I + (1 - cos(t)) a a^T.
  const Eigen::Matrix3d sym = 0.5 * (r + r.transpose());
  const Eigen::Matrix3d outer = (sym - cos_theta * Eigen::Matrix3d::Identity()) / (1.0 - cos_theta);
  int pivot = 0;
  outer.diagonal().maxCoeff(&pivot);
  const double p = outer(pivot, pivot);
  if (!(p > 1e-12) || !std::isfinite(p)) {
    throw Error(ErrorCode::AngleAtPi, "rotation angle at pi with no stable axis (trace " +
                                          std::to_string(trace) + ")");
  }
  AxisVector axis = outer.col(pivot) / std::sqrt(p);
  axis.normalize();
  if (sin_theta > 1e-12) {
    if (axis.dot(w) < 0.0) axis = -axis;
  } else {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) > 1e-12) {
        if (axis[i] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return theta * axis;
}

Rotation geodesic_interp(const Rotation& a, const Rotation& b, double s) {
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  return exp_so3(s * log_so3(b * a.transpose())) * a;
}

double orthonormality_error(const Rotation& r) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
}

Rotation project_to_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) = -u.col(2);
  return u * v.transpose();
}

Rotation reorthonormalize(const Rotation& r) {
  if (orthonormality_error(r) > 1e-8) return project_to_rotation(r);
  return r;
}

Pose::Pose(std::vector<Rotation> joints) : joints_(std::move(joints)) {}

Pose Pose::identity(int joint_count) {
  return Pose(std::vector<Rotation>(static_cast<std::size_t>(joint_count), Rotation::Identity()));
}

void require_same_joints(const Pose& p, const Pose& q) {
  if (p.joint_count() != q.joint_count()) {
    throw Error(ErrorCode::JointCountMismatch, "poses have " + std::to_string(p.joint_count()) +
                                                   " and " + std::to_string(q.joint_count()) + " joints");
  }
}

Pose pose_interp(const Pose& p, const Pose& q, double s) {
  return pose_map([](const Rotation& a, const Rotation& b, double t) { return geodesic_interp(a, b, t); },
                  p, q, s);
}

Pose pose_compose(const Pose& p, const Pose& q) {
  return pose_map([](const Rotation& a, const Rotation& b, double) -> Rotation { return a * b; }, p, q, 0.0);
}

Pose pose_inverse(const Pose& p) {
  std::vector<Rotation> out;
  out.reserve(static_cast<std::size_t>(p.joint_count()));
  for (const auto& r : p.joints()) out.push_back(r.transpose());
  return Pose(std::move(out));
}

Pose right_translate(const Pose& p, const Pose& g) { return pose_compose(p, g); }

double pose_distance_max(const Pose& p, const Pose& q) {
  require_same_joints(p, q);
  double worst = 0.0;
  for (int j = 0; j < p.joint_count(); ++j) worst = std::max(worst, (p[j] - q[j]).norm());
  return worst;
}

}  // namespace sigshape
