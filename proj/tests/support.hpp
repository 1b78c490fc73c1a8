#pragma once

// Random inputs and independent reference computations for the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sigshape/curve.hpp"
#include "sigshape/error.hpp"
#include "sigshape/lie.hpp"
#include "sigshape/reparam.hpp"
#include "sigshape/srvt.hpp"

namespace testing {

using namespace sigshape;
using Rng = std::mt19937_64;

/// Code of the sigshape::Error thrown by f.
inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("no sigshape::Error thrown");
}

inline AxisVector random_vector(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng)};
}

inline Rotation random_rotation(Rng& rng) { return exp_so3(random_vector(rng, 1.0)); }

inline Pose random_pose(Rng& rng, int joints) {
  Pose p = Pose::identity(joints);
  for (int j = 0; j < joints; ++j) p[j] = random_rotation(rng);
  return p;
}

/// Random walk of small rotations with random (nonuniform) knot times.
inline PiecewiseGeodesicCurve random_curve(Rng& rng, int joints, int segments, double step = 0.4,
                                           bool uniform = false) {
  std::vector<Pose> frames{random_pose(rng, joints)};
  for (int k = 0; k < segments; ++k) {
    Pose p = frames.back();
    for (int j = 0; j < joints; ++j) p[j] = exp_so3(random_vector(rng, step)) * p[j];
    frames.push_back(p);
  }
  if (uniform) return PiecewiseGeodesicCurve::from_frames(std::move(frames));
  std::uniform_real_distribution<double> u(0.3, 1.7);
  std::vector<double> times{0.0};
  for (int k = 0; k < segments; ++k) times.push_back(times.back() + u(rng));
  return PiecewiseGeodesicCurve::from_frames(std::move(frames), std::move(times));
}

/// Piecewise-linear warp with up to max_breaks interior breakpoints and every
/// slope in [1/4, 4].
inline Reparameterization random_phi(Rng& rng, int max_breaks = 16) {
  const int interior = std::uniform_int_distribution<int>(0, max_breaks)(rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts;
  for (int i = 0; i < interior; ++i) cuts.push_back(u(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> b{0.0};
  for (double c : cuts) {
    if (c - b.back() > 1e-3 && 1.0 - c > 1e-3) b.push_back(c);
  }
  b.push_back(1.0);
  std::uniform_real_distribution<double> logslope(std::log(0.5), std::log(2.0));
  std::vector<double> v{0.0};
  for (std::size_t i = 0; i + 1 < b.size(); ++i) v.push_back(v.back() + std::exp(logslope(rng)) * (b[i + 1] - b[i]));
  const double total = v.back();
  for (auto& x : v) x /= total;
  v.back() = 1.0;
  return {b, v};
}

/// Random monotone lattice path (0,0) -> (M,M) with steps in {1..max_step}^2,
/// returned as a warp through the lattice nodes.
inline Reparameterization random_grid_phi(Rng& rng, int m, int max_step) {
  const auto reachable = [&](int r1, int r2) {
    if (r1 == 0 || r2 == 0) return r1 == r2;
    return std::max(r1, r2) <= max_step * std::min(r1, r2);
  };
  std::vector<double> b{0.0}, v{0.0};
  int k = 0, l = 0;
  while (k < m || l < m) {
    std::vector<std::pair<int, int>> options;
    for (int di = 1; di <= max_step; ++di) {
      for (int dj = 1; dj <= max_step; ++dj) {
        if (k + di <= m && l + dj <= m && reachable(m - k - di, m - l - dj)) options.emplace_back(di, dj);
      }
    }
    const auto [di, dj] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    k += di;
    l += dj;
    b.push_back(static_cast<double>(k) / m);
    v.push_back(static_cast<double>(l) / m);
  }
  b.back() = 1.0;
  v.back() = 1.0;
  return {b, v};
}

/// Iterated integrals of x' = b_k on each knot interval by nested trapezoid
/// sums, keyed by word (1-based letters), up to the given depth.
inline std::map<std::vector<int>, double> riemann_signature(const LogDerivative& ld, int depth, int substeps) {
  const int dim = ld.dim();
  // Running values of every iterated integral, over all words of length <= depth.
  std::vector<std::vector<int>> words{{}};
  for (int n = 1; n <= depth; ++n) {
    const std::size_t start = words.size();
    for (std::size_t w = 0; w < start; ++w) {
      if (static_cast<int>(words[w].size()) != n - 1) continue;
      for (int i = 1; i <= dim; ++i) {
        auto next = words[w];
        next.push_back(i);
        words.push_back(next);
      }
    }
  }
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t w = 0; w < words.size(); ++w) index[words[w]] = w;
  std::vector<double> value(words.size(), 0.0);
  value[0] = 1.0;
  const double h = 1.0 / substeps;
  for (int s = 0; s < substeps; ++s) {
    const double t = (s + 0.5) * h;
    int k = 0;
    while (k + 1 < ld.segment_count() && t > ld.knots()[static_cast<std::size_t>(k) + 1]) ++k;
    const auto slope = ld.slope(k);
    std::vector<double> next = value;
    // Prefixes come before their extensions, so next[p] is already the
    // end-of-step value.
    for (std::size_t w = 1; w < words.size(); ++w) {
      const auto& word = words[w];
      std::vector<int> prefix(word.begin(), word.end() - 1);
      const std::size_t p = index[prefix];
      const double dx = slope[word.back() - 1] * h;
      next[w] = value[w] + 0.5 * (value[p] + next[p]) * dx;
    }
    value = std::move(next);
  }
  std::map<std::vector<int>, double> out;
  for (std::size_t w = 0; w < words.size(); ++w) out[words[w]] = value[w];
  return out;
}

/// Minimum DP cost over all monotone lattice paths, summed along the path in
/// forward order.
inline double brute_force_cost(const SRVRepresentation& q0, const SRVRepresentation& q1, const DPGrid& grid,
                               double penalty = 0.0) {
  const int m = grid.size();
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int, double)> walk = [&](int k, int l, double acc) {
    if (k == m && l == m) {
      best = std::min(best, acc);
      return;
    }
    for (const auto& s : grid.steps()) {
      const int i = k + s.di, j = l + s.dj;
      if (i > m || j > m) continue;
      walk(i, j, acc + dp_edge_cost(q0, q1, m, k, l, i, j, penalty));
    }
  };
  walk(0, 0, 0.0);
  return best;
}

/// RMSD between x and y after the best rigid motion (rotation or reflection
/// plus translation) applied to x.
inline double procrustes_rmsd(Eigen::MatrixXd x, Eigen::MatrixXd y) {
  x.rowwise() -= x.colwise().mean();
  y.rowwise() -= y.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x.transpose() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
  return std::sqrt((x * r - y).squaredNorm() / static_cast<double>(x.rows()));
}

inline Eigen::MatrixXd euclidean_distances(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (p.row(i) - p.row(j)).norm();
  }
  return d;
}

}  // namespace testing
