#include "sigshape/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "sigshape/reparam.hpp"
#include "sigshape/signature.hpp"
#include "sigshape/srvt.hpp"

namespace sigshape {

namespace {

using Rng = std::mt19937_64;

AxisVector random_axis(Rng& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng)};
}

PiecewiseGeodesicCurve random_curve(Rng& rng, int joints, int segments) {
  std::vector<Pose> frames;
  Pose p = Pose::identity(joints);
  for (int j = 0; j < joints; ++j) p[j] = exp_so3(random_axis(rng, 1.0));
  frames.push_back(p);
  for (int k = 0; k < segments; ++k) {
    for (int j = 0; j < joints; ++j) p[j] = exp_so3(random_axis(rng, 0.4)) * p[j];
    frames.push_back(p);
  }
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> times{0.0};
  for (int k = 0; k < segments; ++k) times.push_back(times.back() + u(rng));
  return PiecewiseGeodesicCurve::from_frames(std::move(frames), std::move(times));
}

Reparameterization random_phi(Rng& rng, int pieces) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> b{0.0}, v{0.0};
  for (int i = 1; i < pieces; ++i) {
    b.push_back(static_cast<double>(i) / pieces);
  }
  b.push_back(1.0);
  std::vector<double> w;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    w.push_back(0.25 + u(rng));
    total += w.back();
  }
  for (int i = 0; i + 1 < pieces; ++i) v.push_back(v.back() + w[static_cast<std::size_t>(i)] / total);
  v.push_back(1.0);
  return {b, v};
}

double relative_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
  return max_abs_diff(a, b) / std::max(1.0, norm(a, true));
}

double brute_force_cost(const SRVRepresentation& q0, const SRVRepresentation& q1, const DPGrid& grid) {
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
      walk(i, j, acc + dp_edge_cost(q0, q1, m, k, l, i, j));
    }
  };
  walk(0, 0, 0.0);
  return best;
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed, int trials) {
  Rng rng(seed);
  double reparam = 0.0, chen = 0.0, rev = 0.0, shuffle = 0.0;
  double equivariance = 0.0, translation = 0.0, warp_iso = 0.0, dp = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto c = random_curve(rng, 2, 6);
    const auto phi = random_phi(rng, 5);
    const auto s = signature(c, 3);
    reparam = std::max(reparam, relative_diff(s.tensor, signature(reparameterize(c, phi), 3).tensor));

    const double split = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const auto joined = chen_concat(signature(c, 3, 0.0, split), signature(c, 3, split, 1.0));
    chen = std::max(chen, max_abs_diff(joined.tensor, s.tensor));
    const auto back = truncated_product(signature(reverse(c), 3).tensor, s.tensor);
    rev = std::max(rev, max_abs_diff(back, TruncatedTensor::unit(back.alphabet(), 3)));
    shuffle = std::max(shuffle, shuffle_check(s.tensor));

    const auto c0 = normalize_to_identity(c);
    const auto q = srv_transform(c0);
    equivariance = std::max(equivariance, l2_distance(srv_transform(reparameterize(c0, phi)), warp_srv(q, phi)));
    Pose g = Pose::identity(c.joint_count());
    for (int j = 0; j < g.joint_count(); ++j) g[j] = exp_so3(random_axis(rng, 1.0));
    translation = std::max(translation, l2_distance(srv_transform(right_translate(c0, g)), q));

    const auto c1 = normalize_to_identity(random_curve(rng, 2, 5));
    const auto q1 = srv_transform(c1);
    const double before = l2_distance(q, q1);
    const double after = l2_distance(warp_srv(q, phi), warp_srv(q1, phi));
    warp_iso = std::max(warp_iso, std::abs(before - after));

    const DPGrid grid(5, {{1, 1}, {1, 2}, {2, 1}});
    const double expected = brute_force_cost(q, q1, grid);
    dp = std::max(dp, std::abs(optimal_reparam_dp(q, q1, grid).cost - expected));
  }
  const auto check = [](std::string name, double worst, double tol) {
    return CheckResult{std::move(name), worst <= tol, worst, tol};
  };
  return {
      check("signature reparameterization invariance", reparam, 1e-10),
      check("signature Chen identity", chen, 1e-12),
      check("signature reversal inverse", rev, 1e-12),
      check("signature shuffle identities", shuffle, 1e-10),
      check("srvt reparameterization equivariance", equivariance, 1e-12),
      check("srvt right-translation invariance", translation, 1e-12),
      check("srvt simultaneous warp isometry", warp_iso, 1e-12),
      check("dp optimality vs enumeration (M=5)", dp, 0.0),
  };
}

}  // namespace sigshape
