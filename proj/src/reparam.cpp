#include "sigshape/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sigshape/error.hpp"

namespace sigshape {

DPGrid::DPGrid(int size, std::vector<Step> steps) : size_(size), steps_(std::move(steps)) {
  if (size_ < 2) throw Error(ErrorCode::GridTooCoarse, "DP grid size must be at least 2, got " + std::to_string(size));
  if (steps_.empty()) throw Error(ErrorCode::InvalidArgument, "DP step set is empty");
  for (const auto& s : steps_) {
    if (s.di < 1 || s.dj < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "DP step (" + std::to_string(s.di) + "," + std::to_string(s.dj) + ") must increase both coordinates");
    }
  }
  // Predecessors (i - di, j - dj) visited in increasing lexicographic order.
  std::sort(steps_.begin(), steps_.end(),
            [](const Step& a, const Step& b) { return a.di > b.di || (a.di == b.di && a.dj > b.dj); });
  steps_.erase(std::unique(steps_.begin(), steps_.end()), steps_.end());
}

DPGrid DPGrid::square(int size, int max_step) {
  if (max_step < 1) throw Error(ErrorCode::InvalidArgument, "max step must be at least 1");
  std::vector<Step> steps;
  for (int i = 1; i <= max_step; ++i) {
    for (int j = 1; j <= max_step; ++j) steps.push_back({i, j});
  }
  return DPGrid(size, std::move(steps));
}

namespace {

void require_same_dim(const SRVRepresentation& q0, const SRVRepresentation& q1) {
  if (q0.dim() != q1.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "SRV dimensions " + std::to_string(q0.dim()) + " and " + std::to_string(q1.dim()));
  }
}

// Edge integrals with per-node piece lookups cached.
class EdgeIntegrator {
 public:
  EdgeIntegrator(const SRVRepresentation& q0, const SRVRepresentation& q1, int grid_size, double penalty)
      : q0_(q0), q1_(q1), m_(grid_size), penalty_(penalty), start0_(grid_size + 1), start1_(grid_size + 1) {
    for (int n = 0; n <= m_; ++n) {
      start0_[n] = q0.piece_index(node(n));
      start1_[n] = q1.piece_index(node(n));
    }
  }

  double node(int n) const { return static_cast<double>(n) / static_cast<double>(m_); }

  double operator()(int k, int l, int i, int j) const {
    const double ta = node(k);
    const double tb = node(i);
    const double ua = node(l);
    const double slope = static_cast<double>(j - l) / static_cast<double>(i - k);
    const double root = std::sqrt(slope);
    const auto b0 = q0_.breaks();
    const auto b1 = q1_.breaks();
    const int n0 = q0_.piece_count();
    const int n1 = q1_.piece_count();
    const int dim = q0_.dim();
    const auto mapped = [&](int p) { return ta + (b1[p] - ua) / slope; };

    int p0 = start0_[k];
    int p1 = start1_[l];
    while (p0 + 1 < n0 && b0[p0 + 1] <= ta + kBreakTolerance) ++p0;
    while (p1 + 1 < n1 && mapped(p1 + 1) <= ta + kBreakTolerance) ++p1;

    double total = 0.0;
    double cur = ta;
    while (true) {
      const double e0 = p0 + 1 < n0 ? b0[p0 + 1] : 2.0;
      const double e1 = p1 + 1 < n1 ? mapped(p1 + 1) : 2.0;
      double next = std::min(e0, e1);
      const bool last = next >= tb - kBreakTolerance;
      if (last) next = tb;
      if (next > cur) {
        const double* x = q0_.value_ptr(p0);
        const double* y = q1_.value_ptr(p1);
        double s = 0.0;
        for (int c = 0; c < dim; ++c) {
          const double d = x[c] - root * y[c];
          s += d * d;
        }
        total += (next - cur) * s;
        cur = next;
      }
      if (last) break;
      if (e0 <= next + kBreakTolerance) ++p0;
      if (e1 <= next + kBreakTolerance) ++p1;
    }

    if (penalty_ != 0.0) {
      double pen = 0.0;
      for (int s = k + 1; s <= i; ++s) {
        const double dev = ua + (node(s) - ta) * slope - node(s);
        pen += dev * dev;
      }
      total += penalty_ * pen;
    }
    return total;
  }

 private:
  const SRVRepresentation& q0_;
  const SRVRepresentation& q1_;
  int m_;
  double penalty_;
  std::vector<int> start0_;
  std::vector<int> start1_;
};

}  // namespace

double dp_edge_cost(const SRVRepresentation& q0, const SRVRepresentation& q1, int grid_size, int k, int l, int i,
                    int j, double penalty) {
  require_same_dim(q0, q1);
  if (!(0 <= k && k < i && i <= grid_size && 0 <= l && l < j && j <= grid_size)) {
    throw Error(ErrorCode::InvalidArgument, "lattice edge must strictly increase both coordinates inside the grid");
  }
  return EdgeIntegrator(q0, q1, grid_size, penalty)(k, l, i, j);
}

AlignmentResult optimal_reparam_dp(const SRVRepresentation& q0, const SRVRepresentation& q1, const DPGrid& grid,
                                   double penalty) {
  require_same_dim(q0, q1);
  const int m = grid.size();
  const int w = m + 1;
  const EdgeIntegrator edge(q0, q1, m, penalty);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(static_cast<std::size_t>(w) * w, inf);
  std::vector<int> pred(static_cast<std::size_t>(w) * w, -1);
  const auto at = [w](int i, int j) { return static_cast<std::size_t>(i) * w + j; };
  cost[at(0, 0)] = 0.0;

  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      double best = inf;
      int best_pred = -1;
      for (const auto& s : grid.steps()) {
        const int k = i - s.di;
        const int l = j - s.dj;
        if (k < 0 || l < 0) continue;
        const double base = cost[at(k, l)];
        if (base == inf) continue;
        const double c = base + edge(k, l, i, j);
        if (c < best) {
          best = c;
          best_pred = static_cast<int>(at(k, l));
        }
      }
      cost[at(i, j)] = best;
      pred[at(i, j)] = best_pred;
    }
  }

  const double total = cost[at(m, m)];
  if (total == inf) throw Error(ErrorCode::InvalidArgument, "no lattice path reaches (M,M) with this step set");

  std::vector<double> breaks;
  std::vector<double> values;
  for (int node = static_cast<int>(at(m, m)); node >= 0; node = pred[static_cast<std::size_t>(node)]) {
    breaks.push_back(static_cast<double>(node / w) / m);
    values.push_back(static_cast<double>(node % w) / m);
    if (node == 0) break;
  }
  std::reverse(breaks.begin(), breaks.end());
  std::reverse(values.begin(), values.end());
  return {Reparameterization(std::move(breaks), std::move(values)), std::sqrt(std::max(total, 0.0)), total};
}

double srv_shape_distance(const SRVRepresentation& q0, const SRVRepresentation& q1, const DPGrid& grid,
                          const DPOptions& options) {
  const double forward = optimal_reparam_dp(q0, q1, grid, options.penalty).distance;
  if (options.symmetrization == Symmetrization::OneSided) return forward;
  return std::min(forward, optimal_reparam_dp(q1, q0, grid, options.penalty).distance);
}

double shape_distance(const PiecewiseGeodesicCurve& c0, const PiecewiseGeodesicCurve& c1, const DPGrid& grid,
                      const DPOptions& options, const SrvtOptions& srvt) {
  require_same_joints(c0.poses().front(), c1.poses().front());
  const auto q0 = srv_transform(normalize_to_identity(c0), srvt);
  const auto q1 = srv_transform(normalize_to_identity(c1), srvt);
  return srv_shape_distance(q0, q1, grid, options);
}

}  // namespace sigshape
