#include "sigshape/srvt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigshape/error.hpp"

namespace sigshape {

SRVRepresentation::SRVRepresentation(std::vector<double> breaks, int dim, std::vector<double> values)
    : breaks_(std::move(breaks)), dim_(dim), values_(std::move(values)) {}

int SRVRepresentation::piece_index(double t) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  const int k = static_cast<int>(it - breaks_.begin()) - 1;
  return std::clamp(k, 0, piece_count() - 1);
}

SRVRepresentation srv_transform(const LogDerivative& ld, const SrvtOptions& options) {
  const int dim = ld.dim();
  const int m = ld.segment_count();
  if (!options.joint_weights.empty() && static_cast<int>(options.joint_weights.size()) * 3 != dim) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(dim / 3) + " joint weights, got " +
                                                  std::to_string(options.joint_weights.size()));
  }
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(dim);
  for (std::size_t j = 0; j < options.joint_weights.size(); ++j) {
    scale.segment<3>(static_cast<Eigen::Index>(3 * j)).setConstant(std::sqrt(options.joint_weights[j]));
  }

  std::vector<int> kept;
  double mass = 0.0;
  for (int k = 0; k < m; ++k) {
    if (ld.slope(k).cwiseProduct(scale).norm() > kSpeedTolerance) {
      kept.push_back(k);
      mass += ld.duration(k);
    }
  }
  if (kept.empty()) throw Error(ErrorCode::NotImmersed, "every segment of the curve is stationary");

  const bool rescale = kept.size() != static_cast<std::size_t>(m);
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  values.reserve(kept.size() * static_cast<std::size_t>(dim));
  double t = 0.0;
  for (int k : kept) {
    Eigen::VectorXd b = ld.slope(k).cwiseProduct(scale);
    if (rescale) {
      t += ld.duration(k) / mass;
      b *= mass;
    } else {
      t = ld.knots()[k + 1];
    }
    breaks.push_back(t);
    const Eigen::VectorXd q = b / std::sqrt(b.norm());
    values.insert(values.end(), q.data(), q.data() + dim);
  }
  breaks.back() = 1.0;
  return SRVRepresentation(std::move(breaks), dim, std::move(values));
}

SRVRepresentation srv_transform(const PiecewiseGeodesicCurve& c, const SrvtOptions& options) {
  return srv_transform(log_derivative(c), options);
}

std::vector<double> refine_breaks(std::span<const double> a, std::span<const double> b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
  std::vector<double> out;
  out.reserve(all.size());
  for (double x : all) {
    if (!out.empty() && x - out.back() <= kBreakTolerance) continue;
    out.push_back(x);
  }
  if (out.size() >= 2 && 1.0 - out.back() <= kBreakTolerance) out.back() = 1.0;
  return out;
}

namespace {

double squared_diff(const double* x, const double* y, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

}  // namespace

double l2_distance(const SRVRepresentation& q0, const SRVRepresentation& q1) {
  if (q0.dim() != q1.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "SRV dimensions " + std::to_string(q0.dim()) + " and " + std::to_string(q1.dim()));
  }
  const auto breaks = refine_breaks(q0.breaks(), q1.breaks());
  double total = 0.0;
  int i0 = 0;
  int i1 = 0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    while (i0 + 1 < q0.piece_count() && q0.breaks()[i0 + 1] <= mid) ++i0;
    while (i1 + 1 < q1.piece_count() && q1.breaks()[i1 + 1] <= mid) ++i1;
    total += (breaks[p + 1] - breaks[p]) * squared_diff(q0.value_ptr(i0), q1.value_ptr(i1), q0.dim());
  }
  return std::sqrt(total);
}

double l2_norm(const SRVRepresentation& q) {
  double total = 0.0;
  for (int k = 0; k < q.piece_count(); ++k) {
    total += (q.breaks()[k + 1] - q.breaks()[k]) * q.value(k).squaredNorm();
  }
  return std::sqrt(total);
}

SRVRepresentation warp_srv(const SRVRepresentation& q, const Reparameterization& phi) {
  std::vector<double> preimages;
  preimages.reserve(q.breaks().size());
  for (double b : q.breaks()) preimages.push_back(phi.inverse(b));
  const auto breaks = refine_breaks(phi.breaks(), preimages);

  const int dim = q.dim();
  std::vector<double> values;
  values.reserve((breaks.size() - 1) * static_cast<std::size_t>(dim));
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const int piece = phi.piece_index(mid);
    const double root = std::sqrt(phi.slope(piece));
    const double* v = q.value_ptr(q.piece_index(phi(mid)));
    for (int i = 0; i < dim; ++i) values.push_back(v[i] * root);
  }
  return SRVRepresentation(breaks, dim, std::move(values));
}

}  // namespace sigshape
