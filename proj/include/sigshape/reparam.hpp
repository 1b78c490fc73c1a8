#pragma once

// Elastic shape distance: infimum over reparameterizations of the SRV L2
// distance, approximated by dynamic programming on a square lattice.

#include <utility>
#include <vector>

#include "sigshape/curve.hpp"
#include "sigshape/srvt.hpp"

namespace sigshape {

struct Step {
  int di;
  int dj;
  friend bool operator==(const Step&, const Step&) = default;
};

/// Lattice {0, 1/M, ..., 1}^2 and the admissible steps between lattice nodes.
class DPGrid {
 public:
  /// Throws GridTooCoarse when M < 2 and InvalidArgument for an empty step set
  /// or a step that does not increase both coordinates.
  DPGrid(int size, std::vector<Step> steps);

  /// Steps {(i,j) : 1 <= i,j <= max_step}.
  static DPGrid square(int size = 64, int max_step = 4);

  int size() const noexcept { return size_; }
  const std::vector<Step>& steps() const noexcept { return steps_; }

 private:
  int size_;
  std::vector<Step> steps_;
};

enum class Symmetrization {
  /// min(DP(q0, q1), DP(q1, q0))
  MinOfBoth,
  /// DP(q0, q1) only
  OneSided,
};

struct DPOptions {
  /// Weight of sum_m |phi(s_m) - s_m|^2 over lattice times; 0 disables it.
  double penalty = 0.0;
  Symmetrization symmetrization = Symmetrization::MinOfBoth;
};

struct AlignmentResult {
  Reparameterization phi;
  double distance;
  double cost;
};

/// Cost of the lattice edge (k,l) -> (i,j): the integral over [k/M, i/M] of
/// |q0(t) - q1(phi(t)) sqrt(phi')|^2 with phi linear onto [l/M, j/M], plus the
/// penalty term.
double dp_edge_cost(const SRVRepresentation& q0, const SRVRepresentation& q1, int grid_size, int k, int l, int i,
                    int j, double penalty = 0.0);

/// Global optimum over monotone lattice paths (0,0) -> (M,M). Among equal-cost
/// predecessors the lexicographically smallest (k,l) wins.
AlignmentResult optimal_reparam_dp(const SRVRepresentation& q0, const SRVRepresentation& q1, const DPGrid& grid,
                                   double penalty = 0.0);

/// DP distance between two SRV representations under the symmetrization policy.
double srv_shape_distance(const SRVRepresentation& q0, const SRVRepresentation& q1, const DPGrid& grid,
                          const DPOptions& options = {});

/// Normalize both curves to start at the identity, transform, align.
double shape_distance(const PiecewiseGeodesicCurve& c0, const PiecewiseGeodesicCurve& c1,
                      const DPGrid& grid = DPGrid::square(), const DPOptions& options = {},
                      const SrvtOptions& srvt = {});

}  // namespace sigshape
