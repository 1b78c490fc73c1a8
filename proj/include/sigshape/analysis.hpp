#pragma once

// Distance matrices over clip collections, classical MDS and cluster
// statistics.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sigshape/curve.hpp"
#include "sigshape/reparam.hpp"
#include "sigshape/signature.hpp"
#include "sigshape/srvt.hpp"

namespace sigshape {

enum class Method {
  /// SRV L2 distance without alignment.
  Srvt,
  /// SRV distance minimized over reparameterizations by DP.
  SrvtDp,
  /// Normalized log-signature distance.
  Signature,
};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct DistanceParams {
  Method method = Method::Signature;
  SignatureOptions signature;
  DPGrid grid = DPGrid::square();
  DPOptions dp;
  SrvtOptions srvt;
};

struct DistanceMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> ids;
  Method method = Method::Signature;
  double build_seconds = 0.0;

  int size() const noexcept { return static_cast<int>(values.rows()); }
};

/// Pair-parallel kernel (OpenMP). Per-curve representations (SRVs or
/// normalized log-signatures) are computed once; each off-diagonal pair once
/// and mirrored; the diagonal is exactly 0. Results do not depend on thread
/// count. A failing curve or pair aborts with its indices in the message.
DistanceMatrix distance_matrix(std::span<const PiecewiseGeodesicCurve> curves, const DistanceParams& params,
                               std::vector<std::string> ids = {}, bool parallel = true);

/// Reference: every entry from the public pairwise functions, one thread, no
/// caching.
DistanceMatrix distance_matrix_serial(std::span<const PiecewiseGeodesicCurve> curves, const DistanceParams& params,
                                      std::vector<std::string> ids = {});

/// The single distance used for entry (i,j) of a matrix.
double pair_distance(const PiecewiseGeodesicCurve& a, const PiecewiseGeodesicCurve& b, const DistanceParams& params);

struct Embedding {
  /// n x dim coordinates, centered.
  Eigen::MatrixXd points;
  /// Full spectrum of the double-centered matrix, descending.
  Eigen::VectorXd eigenvalues;
  /// Share of |negative eigenvalues| in the total absolute spectrum.
  double negative_mass = 0.0;
};

/// Torgerson MDS: B = -1/2 J D^2 J, top-dim eigenpairs scaled by sqrt(lambda),
/// negative eigenvalues clamped to 0, first nonzero loading of each axis
/// positive. Throws TooFewPoints when n < dim + 1.
Embedding classical_mds(const Eigen::MatrixXd& distances, int dim = 2);
inline Embedding classical_mds(const DistanceMatrix& d, int dim = 2) { return classical_mds(d.values, dim); }

/// Leave-one-out k-NN: majority label among the k nearest other clips
/// (neighbours ordered by distance, then index; label ties go to the label
/// with the nearest member). Throws LabelMismatch.
double loo_knn_accuracy(const Eigen::MatrixXd& distances, std::span<const std::string> labels, int k = 1);

/// Mean silhouette coefficient. Throws DegenerateClass for fewer than two
/// classes or a class with one member.
double silhouette(const Eigen::MatrixXd& distances, std::span<const std::string> labels);

}  // namespace sigshape
