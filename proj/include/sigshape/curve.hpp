#pragma once

// Piecewise-geodesic curves on SO(3)^d.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sigshape/lie.hpp"

namespace sigshape {

/// Segments whose log-derivative slope norm is at or below this are stationary.
inline constexpr double kSpeedTolerance = 1e-8;
/// Breakpoints closer than this are treated as one when refining partitions.
inline constexpr double kBreakTolerance = 1e-12;

class PiecewiseGeodesicCurve {
 public:
  /// Uniform knots on [0,1] unless times are given; given times are rescaled
  /// affinely so that they span [0,1].
  static PiecewiseGeodesicCurve from_frames(std::vector<Pose> frames,
                                            std::optional<std::vector<double>> times = std::nullopt);

  int joint_count() const noexcept { return poses_.front().joint_count(); }
  int segment_count() const noexcept { return static_cast<int>(knots_.size()) - 1; }
  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const Pose> poses() const noexcept { return poses_; }

  /// True when some segment has (numerically) zero velocity, e.g. repeated frames.
  bool has_stationary_segments() const noexcept { return stationary_; }

  /// Index k of the segment [t_k, t_{k+1}] containing t (last segment for t = 1).
  int segment_index(double t) const;

  Pose evaluate(double t) const;

 private:
  PiecewiseGeodesicCurve(std::vector<double> knots, std::vector<Pose> poses);

  std::vector<double> knots_;
  std::vector<Pose> poses_;
  bool stationary_ = false;
};

/// Piecewise-linear orientation-preserving bijection of [0,1].
class Reparameterization {
 public:
  /// Throws NonMonotone unless breakpoints and values are strictly increasing
  /// from (0,0) to (1,1).
  Reparameterization(std::vector<double> breaks, std::vector<double> values);

  static Reparameterization identity();

  std::span<const double> breaks() const noexcept { return breaks_; }
  std::span<const double> values() const noexcept { return values_; }
  int piece_count() const noexcept { return static_cast<int>(breaks_.size()) - 1; }
  int piece_index(double s) const;
  double slope(int piece) const;

  double operator()(double s) const;
  double inverse(double u) const;
  Reparameterization inverted() const;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// Right-trivialized derivative of a piecewise-geodesic curve; one constant
/// slope in R^{3d} per segment.
class LogDerivative {
 public:
  LogDerivative(std::vector<double> knots, int dim, std::vector<double> slopes);

  int dim() const noexcept { return dim_; }
  int segment_count() const noexcept { return static_cast<int>(knots_.size()) - 1; }
  std::span<const double> knots() const noexcept { return knots_; }
  double duration(int k) const { return knots_[k + 1] - knots_[k]; }
  Eigen::Map<const Eigen::VectorXd> slope(int k) const {
    return {slopes_.data() + static_cast<std::ptrdiff_t>(k) * dim_, dim_};
  }

 private:
  std::vector<double> knots_;
  int dim_;
  std::vector<double> slopes_;
};

LogDerivative log_derivative(const PiecewiseGeodesicCurve& c);

/// c(t) * c(0)^{-1}; the result starts at the identity pose.
PiecewiseGeodesicCurve normalize_to_identity(const PiecewiseGeodesicCurve& c);

/// c(t) * g for every t.
PiecewiseGeodesicCurve right_translate(const PiecewiseGeodesicCurve& c, const Pose& g);

/// c o phi, re-knotted at phi^{-1}(knots of c) merged with the breakpoints of phi.
PiecewiseGeodesicCurve reparameterize(const PiecewiseGeodesicCurve& c, const Reparameterization& phi);

/// t -> c(1 - t).
PiecewiseGeodesicCurve reverse(const PiecewiseGeodesicCurve& c);

/// Traverse a on [0, 1/2] and then b, right-translated to start at a(1), on [1/2, 1].
PiecewiseGeodesicCurve concatenate(const PiecewiseGeodesicCurve& a, const PiecewiseGeodesicCurve& b);

/// Same curve with an extra knot at t (no-op when t is already a knot).
PiecewiseGeodesicCurve insert_knot(const PiecewiseGeodesicCurve& c, double t);

}  // namespace sigshape
