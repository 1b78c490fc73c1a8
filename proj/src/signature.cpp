#include "sigshape/signature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigshape/error.hpp"

namespace sigshape {

Signature signature(const LogDerivative& ld, int depth, double s, double t) {
  if (!(0.0 <= s && s < t && t <= 1.0)) {
    throw Error(ErrorCode::BadInterval, "signature interval [" + std::to_string(s) + ", " + std::to_string(t) +
                                            "] must satisfy 0 <= s < t <= 1");
  }
  Signature sig{TruncatedTensor::unit(ld.dim(), depth), s, t};
  const auto knots = ld.knots();
  std::vector<double> step(static_cast<std::size_t>(ld.dim()));
  for (int k = 0; k < ld.segment_count(); ++k) {
    const double lo = std::max(s, knots[k]);
    const double hi = std::min(t, knots[k + 1]);
    if (!(hi > lo)) continue;
    const auto b = ld.slope(k);
    const double dt = hi - lo;
    for (int i = 0; i < ld.dim(); ++i) step[i] = dt * b[i];
    multiply_by_exp(sig.tensor, step);
  }
  return sig;
}

Signature signature(const PiecewiseGeodesicCurve& c, int depth, double s, double t) {
  return signature(log_derivative(c), depth, s, t);
}

Signature chen_concat(const Signature& left, const Signature& right) {
  if (std::abs(left.end - right.start) > 1e-12) {
    throw Error(ErrorCode::NonAdjacentIntervals, "left interval ends at " + std::to_string(left.end) +
                                                     ", right starts at " + std::to_string(right.start));
  }
  return {truncated_product(left.tensor, right.tensor), left.start, right.end};
}

Signature reverse_signature(const Signature& sig) {
  return {group_inverse(sig.tensor), 1.0 - sig.end, 1.0 - sig.start};
}

LogSignature log_signature(const Signature& sig) {
  LogSignature out{tensor_log(sig.tensor)};
  out.tensor.scalar() = 0.0;
  return out;
}

LogSignature log_signature(const PiecewiseGeodesicCurve& c, int depth) {
  return log_signature(signature(c, depth));
}

namespace {

void append_levels(std::vector<double>& out, const TruncatedTensor& t, const std::vector<double>& scaling) {
  for (int n = 1; n <= t.depth(); ++n) {
    const double f = scaling.empty() ? 1.0 : scaling[static_cast<std::size_t>(n - 1)];
    for (double x : t.level(n)) out.push_back(f * x);
  }
}

}  // namespace

std::vector<double> signature_features(const LogDerivative& ld, const SignatureOptions& options) {
  if (!options.level_scaling.empty() && static_cast<int>(options.level_scaling.size()) != options.depth) {
    throw Error(ErrorCode::InvalidArgument, "level scaling needs " + std::to_string(options.depth) + " entries");
  }
  std::vector<double> features;
  if (options.mode == SignatureMode::FullCurve) {
    append_levels(features, log_signature(signature(ld, options.depth)).tensor, options.level_scaling);
  } else {
    const int joints = ld.dim() / 3;
    for (int j = 0; j < joints; ++j) {
      std::vector<double> slopes;
      slopes.reserve(static_cast<std::size_t>(ld.segment_count()) * 3);
      for (int k = 0; k < ld.segment_count(); ++k) {
        const auto b = ld.slope(k);
        slopes.insert(slopes.end(), b.data() + 3 * j, b.data() + 3 * j + 3);
      }
      const LogDerivative joint(std::vector<double>(ld.knots().begin(), ld.knots().end()), 3, std::move(slopes));
      append_levels(features, log_signature(signature(joint, options.depth)).tensor, options.level_scaling);
    }
  }
  double n2 = 0.0;
  for (double x : features) n2 += x * x;
  const double n = std::sqrt(n2);
  if (n < 1e-12) throw Error(ErrorCode::ZeroLogSignature, "log-signature vanishes (constant curve?)");
  for (double& x : features) x /= n;
  return features;
}

std::vector<double> signature_features(const PiecewiseGeodesicCurve& c, const SignatureOptions& options) {
  return signature_features(log_derivative(c), options);
}

double feature_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double d_sig(const PiecewiseGeodesicCurve& c0, const PiecewiseGeodesicCurve& c1, const SignatureOptions& options) {
  if (c0.joint_count() != c1.joint_count()) {
    throw Error(ErrorCode::DimensionMismatch, "curves have " + std::to_string(c0.joint_count()) + " and " +
                                                  std::to_string(c1.joint_count()) + " joints");
  }
  return feature_distance(signature_features(c0, options), signature_features(c1, options));
}

}  // namespace sigshape
