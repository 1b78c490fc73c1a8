#pragma once

// Square root velocity transform on SO(3)^d and the pulled-back L2 distance.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "sigshape/curve.hpp"

namespace sigshape {

/// Piecewise-constant Lie-algebra valued function on [0,1].
class SRVRepresentation {
 public:
  SRVRepresentation(std::vector<double> breaks, int dim, std::vector<double> values);

  int dim() const noexcept { return dim_; }
  int piece_count() const noexcept { return static_cast<int>(breaks_.size()) - 1; }
  std::span<const double> breaks() const noexcept { return breaks_; }
  std::span<const double> raw_values() const noexcept { return values_; }
  const double* value_ptr(int k) const { return values_.data() + static_cast<std::ptrdiff_t>(k) * dim_; }
  Eigen::Map<const Eigen::VectorXd> value(int k) const { return {value_ptr(k), dim_}; }
  /// Index of the piece containing t (right-continuous; last piece at t = 1).
  int piece_index(double t) const;

 private:
  std::vector<double> breaks_;
  int dim_;
  std::vector<double> values_;
};

struct SrvtOptions {
  /// Per-joint weights w_j of the norm sum_j w_j |x_j|^2 on so(3)^d; empty means all ones.
  std::vector<double> joint_weights;
};

/// q_k = b_k / sqrt(|b_k|) per segment. Stationary segments (|b_k| <= 1e-8) are
/// excised first and the remaining durations rescaled to fill [0,1]. Throws
/// NotImmersed when nothing is left.
SRVRepresentation srv_transform(const PiecewiseGeodesicCurve& c, const SrvtOptions& options = {});
SRVRepresentation srv_transform(const LogDerivative& ld, const SrvtOptions& options = {});

/// Union of two sorted partitions of [0,1]; points within kBreakTolerance of
/// the previous kept point are dropped.
std::vector<double> refine_breaks(std::span<const double> a, std::span<const double> b);

/// sqrt(int_0^1 |q0 - q1|^2 dt), exact on the common refinement.
double l2_distance(const SRVRepresentation& q0, const SRVRepresentation& q1);
double l2_norm(const SRVRepresentation& q);

/// (q o phi) * sqrt(phi').
SRVRepresentation warp_srv(const SRVRepresentation& q, const Reparameterization& phi);

}  // namespace sigshape
