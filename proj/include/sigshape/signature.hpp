#pragma once

// Signatures of piecewise-geodesic curves on SO(3)^d against the
// Maurer-Cartan form, and the log-signature shape distance.

#include <span>
#include <vector>

#include "sigshape/curve.hpp"
#include "sigshape/tensor.hpp"

namespace sigshape {

struct Signature {
  TruncatedTensor tensor;
  double start = 0.0;
  double end = 1.0;
};

struct LogSignature {
  TruncatedTensor tensor;
};

/// exp(dt_1 b_1) (x) ... (x) exp(dt_m b_m) over the part of each segment inside
/// [s, t]. Throws BadInterval unless 0 <= s < t <= 1.
Signature signature(const LogDerivative& ld, int depth, double s = 0.0, double t = 1.0);
Signature signature(const PiecewiseGeodesicCurve& c, int depth, double s = 0.0, double t = 1.0);

/// S_{s,u} (x) S_{u,t}. Throws NonAdjacentIntervals when left.end != right.start.
Signature chen_concat(const Signature& left, const Signature& right);

/// Signature of the time-reversed path, i.e. the group inverse.
Signature reverse_signature(const Signature& sig);

LogSignature log_signature(const Signature& sig);
LogSignature log_signature(const PiecewiseGeodesicCurve& c, int depth);

enum class SignatureMode {
  /// One curve over the alphabet of size 3d.
  FullCurve,
  /// One 3-letter log-signature per joint, concatenated.
  PerJoint,
};

struct SignatureOptions {
  int depth = 3;
  SignatureMode mode = SignatureMode::FullCurve;
  /// Optional factor per level 1..N applied before normalization.
  std::vector<double> level_scaling;
};

/// Unit-normalized log-signature coordinates (levels 1..N). Throws
/// ZeroLogSignature when the log-signature norm is below 1e-12.
std::vector<double> signature_features(const PiecewiseGeodesicCurve& c, const SignatureOptions& options = {});
std::vector<double> signature_features(const LogDerivative& ld, const SignatureOptions& options = {});

/// Euclidean distance between two feature vectors of equal length.
double feature_distance(std::span<const double> a, std::span<const double> b);

/// | log S(c0)/|log S(c0)| - log S(c1)/|log S(c1)| |.
double d_sig(const PiecewiseGeodesicCurve& c0, const PiecewiseGeodesicCurve& c1,
             const SignatureOptions& options = {});

}  // namespace sigshape
