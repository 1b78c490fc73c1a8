#include "sigshape/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigshape/error.hpp"

namespace sigshape {

namespace {

bool strictly_increasing(std::span<const double> xs) {
  return std::adjacent_find(xs.begin(), xs.end(), [](double a, double b) { return !(a < b); }) == xs.end();
}

// Segment lookup shared by curves and reparameterizations.
int locate(std::span<const double> knots, double t) {
  const auto it = std::upper_bound(knots.begin(), knots.end(), t);
  const int k = static_cast<int>(it - knots.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(knots.size()) - 2);
}

}  // namespace

PiecewiseGeodesicCurve::PiecewiseGeodesicCurve(std::vector<double> knots, std::vector<Pose> poses)
    : knots_(std::move(knots)), poses_(std::move(poses)) {
  for (std::size_t k = 0; k + 1 < poses_.size() && !stationary_; ++k) {
    const double dt = knots_[k + 1] - knots_[k];
    double speed2 = 0.0;
    for (int j = 0; j < poses_[k].joint_count(); ++j) {
      speed2 += log_so3(poses_[k + 1][j] * poses_[k][j].transpose()).squaredNorm();
    }
    if (std::sqrt(speed2) / dt <= kSpeedTolerance) stationary_ = true;
  }
}

PiecewiseGeodesicCurve PiecewiseGeodesicCurve::from_frames(std::vector<Pose> frames,
                                                           std::optional<std::vector<double>> times) {
  if (frames.size() < 2) {
    throw Error(ErrorCode::TooFewFrames, "a curve needs at least 2 frames, got " + std::to_string(frames.size()));
  }
  const int d = frames.front().joint_count();
  if (d <= 0) throw Error(ErrorCode::JointCountMismatch, "frames have no joints");
  for (const auto& f : frames) require_same_joints(frames.front(), f);

  std::vector<double> knots;
  if (times) {
    if (times->size() != frames.size()) {
      throw Error(ErrorCode::NonMonotoneTimes, "got " + std::to_string(times->size()) + " times for " +
                                                   std::to_string(frames.size()) + " frames");
    }
    if (!strictly_increasing(*times)) throw Error(ErrorCode::NonMonotoneTimes, "frame times must strictly increase");
    knots = std::move(*times);
    const double t0 = knots.front();
    const double span = knots.back() - t0;
    if (t0 != 0.0 || knots.back() != 1.0) {
      for (double& t : knots) t = (t - t0) / span;
    }
    knots.front() = 0.0;
    knots.back() = 1.0;
  } else {
    const auto m = frames.size() - 1;
    knots.resize(frames.size());
    for (std::size_t k = 0; k <= m; ++k) knots[k] = static_cast<double>(k) / static_cast<double>(m);
  }
  return PiecewiseGeodesicCurve(std::move(knots), std::move(frames));
}

int PiecewiseGeodesicCurve::segment_index(double t) const { return locate(knots_, t); }

Pose PiecewiseGeodesicCurve::evaluate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " outside [0,1]");
  const int k = segment_index(t);
  if (t == knots_[k]) return poses_[k];
  if (t == knots_[k + 1]) return poses_[k + 1];
  const double s = (t - knots_[k]) / (knots_[k + 1] - knots_[k]);
  return pose_interp(poses_[k], poses_[k + 1], s);
}

Reparameterization::Reparameterization(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  if (breaks_.size() < 2 || breaks_.size() != values_.size()) {
    throw Error(ErrorCode::NonMonotone, "reparameterization needs matching breakpoint and value lists");
  }
  if (breaks_.front() != 0.0 || breaks_.back() != 1.0 || values_.front() != 0.0 || values_.back() != 1.0) {
    throw Error(ErrorCode::NonMonotone, "reparameterization must map 0 to 0 and 1 to 1");
  }
  if (!strictly_increasing(breaks_) || !strictly_increasing(values_)) {
    throw Error(ErrorCode::NonMonotone, "reparameterization must be strictly increasing");
  }
}

Reparameterization Reparameterization::identity() { return Reparameterization({0.0, 1.0}, {0.0, 1.0}); }

int Reparameterization::piece_index(double s) const { return locate(breaks_, s); }

double Reparameterization::slope(int piece) const {
  return (values_[piece + 1] - values_[piece]) / (breaks_[piece + 1] - breaks_[piece]);
}

double Reparameterization::operator()(double s) const {
  const int p = piece_index(s);
  if (s == breaks_[p]) return values_[p];
  if (s == breaks_[p + 1]) return values_[p + 1];
  return values_[p] + (s - breaks_[p]) * slope(p);
}

double Reparameterization::inverse(double u) const {
  const int p = locate(values_, u);
  if (u == values_[p]) return breaks_[p];
  if (u == values_[p + 1]) return breaks_[p + 1];
  return breaks_[p] + (u - values_[p]) / slope(p);
}

Reparameterization Reparameterization::inverted() const { return Reparameterization(values_, breaks_); }

LogDerivative::LogDerivative(std::vector<double> knots, int dim, std::vector<double> slopes)
    : knots_(std::move(knots)), dim_(dim), slopes_(std::move(slopes)) {}

LogDerivative log_derivative(const PiecewiseGeodesicCurve& c) {
  const int d = c.joint_count();
  const int m = c.segment_count();
  const auto knots = c.knots();
  const auto poses = c.poses();
  std::vector<double> slopes(static_cast<std::size_t>(m) * 3 * static_cast<std::size_t>(d));
  for (int k = 0; k < m; ++k) {
    const double dt = knots[k + 1] - knots[k];
    for (int j = 0; j < d; ++j) {
      const AxisVector v = log_so3(poses[k + 1][j] * poses[k][j].transpose()) / dt;
      double* out = slopes.data() + (static_cast<std::size_t>(k) * d + j) * 3;
      out[0] = v.x();
      out[1] = v.y();
      out[2] = v.z();
    }
  }
  return LogDerivative({knots.begin(), knots.end()}, 3 * d, std::move(slopes));
}

PiecewiseGeodesicCurve right_translate(const PiecewiseGeodesicCurve& c, const Pose& g) {
  std::vector<Pose> poses;
  poses.reserve(c.poses().size());
  for (const auto& p : c.poses()) poses.push_back(right_translate(p, g));
  return PiecewiseGeodesicCurve::from_frames(std::move(poses),
                                             std::vector<double>(c.knots().begin(), c.knots().end()));
}

PiecewiseGeodesicCurve normalize_to_identity(const PiecewiseGeodesicCurve& c) {
  const Pose inv = pose_inverse(c.poses().front());
  std::vector<Pose> poses;
  poses.reserve(c.poses().size());
  for (const auto& p : c.poses()) poses.push_back(right_translate(p, inv));
  poses.front() = Pose::identity(c.joint_count());
  return PiecewiseGeodesicCurve::from_frames(std::move(poses),
                                             std::vector<double>(c.knots().begin(), c.knots().end()));
}

PiecewiseGeodesicCurve reparameterize(const PiecewiseGeodesicCurve& c, const Reparameterization& phi) {
  // Candidate knots; source index >= 0 marks the preimage of knot k of c, whose
  // pose is then taken verbatim.
  struct Candidate {
    double s;
    int source;
  };
  std::vector<Candidate> cand;
  const auto knots = c.knots();
  cand.reserve(knots.size() + phi.breaks().size());
  for (std::size_t k = 0; k < knots.size(); ++k) cand.push_back({phi.inverse(knots[k]), static_cast<int>(k)});
  for (double b : phi.breaks()) cand.push_back({b, -1});
  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    return a.s < b.s || (a.s == b.s && a.source > b.source);
  });

  std::vector<Candidate> merged;
  for (const auto& x : cand) {
    if (!merged.empty() && x.s - merged.back().s <= kBreakTolerance) {
      if (merged.back().source < 0 && x.source >= 0) merged.back().source = x.source;
      continue;
    }
    merged.push_back(x);
  }
  merged.front().s = 0.0;
  if (merged.size() > 1 && 1.0 - merged.back().s <= kBreakTolerance) merged.back().s = 1.0;

  std::vector<double> new_knots;
  std::vector<Pose> poses;
  new_knots.reserve(merged.size());
  poses.reserve(merged.size());
  for (const auto& x : merged) {
    new_knots.push_back(x.s);
    poses.push_back(x.source >= 0 ? c.poses()[static_cast<std::size_t>(x.source)] : c.evaluate(phi(x.s)));
  }
  return PiecewiseGeodesicCurve::from_frames(std::move(poses), std::move(new_knots));
}

PiecewiseGeodesicCurve reverse(const PiecewiseGeodesicCurve& c) {
  std::vector<double> knots;
  std::vector<Pose> poses;
  for (std::size_t i = c.poses().size(); i-- > 0;) {
    knots.push_back(1.0 - c.knots()[i]);
    poses.push_back(c.poses()[i]);
  }
  return PiecewiseGeodesicCurve::from_frames(std::move(poses), std::move(knots));
}

PiecewiseGeodesicCurve concatenate(const PiecewiseGeodesicCurve& a, const PiecewiseGeodesicCurve& b) {
  require_same_joints(a.poses().front(), b.poses().front());
  const Pose shift = pose_compose(pose_inverse(b.poses().front()), a.poses().back());
  std::vector<double> knots;
  std::vector<Pose> poses;
  for (std::size_t i = 0; i < a.poses().size(); ++i) {
    knots.push_back(0.5 * a.knots()[i]);
    poses.push_back(a.poses()[i]);
  }
  for (std::size_t i = 1; i < b.poses().size(); ++i) {
    knots.push_back(0.5 + 0.5 * b.knots()[i]);
    poses.push_back(right_translate(b.poses()[i], shift));
  }
  return PiecewiseGeodesicCurve::from_frames(std::move(poses), std::move(knots));
}

PiecewiseGeodesicCurve insert_knot(const PiecewiseGeodesicCurve& c, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " outside [0,1]");
  const int k = c.segment_index(t);
  const auto knots = c.knots();
  if (t - knots[k] <= kBreakTolerance || knots[k + 1] - t <= kBreakTolerance) return c;
  std::vector<double> new_knots(knots.begin(), knots.end());
  std::vector<Pose> poses(c.poses().begin(), c.poses().end());
  const Pose mid = c.evaluate(t);
  new_knots.insert(new_knots.begin() + k + 1, t);
  poses.insert(poses.begin() + k + 1, mid);
  return PiecewiseGeodesicCurve::from_frames(std::move(poses), std::move(new_knots));
}

}  // namespace sigshape
