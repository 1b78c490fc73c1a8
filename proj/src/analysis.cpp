#include "sigshape/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <string>
#include <variant>

#include <Eigen/Eigenvalues>

#include "sigshape/error.hpp"

namespace sigshape {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Srvt: return "srvt";
    case Method::SrvtDp: return "srvt_dp";
    case Method::Signature: return "signature";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "srvt") return Method::Srvt;
  if (name == "srvt_dp") return Method::SrvtDp;
  if (name == "signature") return Method::Signature;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

void check_inputs(std::span<const PiecewiseGeodesicCurve> curves, std::vector<std::string>& ids) {
  if (curves.size() < 2) throw Error(ErrorCode::TooFewPoints, "a distance matrix needs at least 2 curves");
  for (const auto& c : curves) {
    if (c.joint_count() != curves.front().joint_count()) {
      throw Error(ErrorCode::DimensionMismatch, "curves must share the joint count");
    }
  }
  if (ids.empty()) {
    for (std::size_t i = 0; i < curves.size(); ++i) ids.push_back(std::to_string(i));
  }
  if (ids.size() != curves.size()) throw Error(ErrorCode::LabelMismatch, "one id per curve required");
}

[[noreturn]] void rethrow_with_context(const std::exception_ptr& ep, const std::string& where) {
  try {
    std::rethrow_exception(ep);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidArgument, where + ": " + e.what());
  }
}

// Per-curve representation reused across all pairs.
using Prepared = std::variant<SRVRepresentation, std::vector<double>>;

Prepared prepare(const PiecewiseGeodesicCurve& c, const DistanceParams& params) {
  if (params.method == Method::Signature) return signature_features(c, params.signature);
  return srv_transform(normalize_to_identity(c), params.srvt);
}

double prepared_distance(const Prepared& a, const Prepared& b, const DistanceParams& params) {
  switch (params.method) {
    case Method::Signature: return feature_distance(std::get<1>(a), std::get<1>(b));
    case Method::Srvt: return l2_distance(std::get<0>(a), std::get<0>(b));
    case Method::SrvtDp: return srv_shape_distance(std::get<0>(a), std::get<0>(b), params.grid, params.dp);
  }
  return 0.0;
}

}  // namespace

double pair_distance(const PiecewiseGeodesicCurve& a, const PiecewiseGeodesicCurve& b, const DistanceParams& params) {
  switch (params.method) {
    case Method::Signature: return d_sig(a, b, params.signature);
    case Method::Srvt:
      return l2_distance(srv_transform(normalize_to_identity(a), params.srvt),
                         srv_transform(normalize_to_identity(b), params.srvt));
    case Method::SrvtDp: return shape_distance(a, b, params.grid, params.dp, params.srvt);
  }
  return 0.0;
}

DistanceMatrix distance_matrix(std::span<const PiecewiseGeodesicCurve> curves, const DistanceParams& params,
                               std::vector<std::string> ids, bool parallel) {
  check_inputs(curves, ids);
  const auto start = Clock::now();
  const int n = static_cast<int>(curves.size());

  std::vector<std::optional<Prepared>> prepared(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> prep_errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      prepared[static_cast<std::size_t>(i)] = prepare(curves[static_cast<std::size_t>(i)], params);
    } catch (...) {
      prep_errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (prep_errors[static_cast<std::size_t>(i)]) {
      rethrow_with_context(prep_errors[static_cast<std::size_t>(i)], "curve " + std::to_string(i));
    }
  }

  // Upper-triangle pairs in row-major order.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const int count = static_cast<int>(pairs.size());
  std::vector<double> values(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int p = 0; p < count; ++p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    try {
      values[static_cast<std::size_t>(p)] =
          prepared_distance(*prepared[static_cast<std::size_t>(i)], *prepared[static_cast<std::size_t>(j)], params);
    } catch (...) {
      errors[static_cast<std::size_t>(p)] = std::current_exception();
    }
  }

  DistanceMatrix out;
  out.values = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < count; ++p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    if (errors[static_cast<std::size_t>(p)]) {
      rethrow_with_context(errors[static_cast<std::size_t>(p)],
                           "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    out.values(i, j) = out.values(j, i) = values[static_cast<std::size_t>(p)];
  }
  out.ids = std::move(ids);
  out.method = params.method;
  out.build_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

DistanceMatrix distance_matrix_serial(std::span<const PiecewiseGeodesicCurve> curves, const DistanceParams& params,
                                      std::vector<std::string> ids) {
  check_inputs(curves, ids);
  const auto start = Clock::now();
  const int n = static_cast<int>(curves.size());
  DistanceMatrix out;
  out.values = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      try {
        out.values(i, j) = out.values(j, i) =
            pair_distance(curves[static_cast<std::size_t>(i)], curves[static_cast<std::size_t>(j)], params);
      } catch (...) {
        rethrow_with_context(std::current_exception(), "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  out.ids = std::move(ids);
  out.method = params.method;
  out.build_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

Embedding classical_mds(const Eigen::MatrixXd& distances, int dim) {
  const Eigen::Index n = distances.rows();
  if (dim < 1 || n < dim + 1) {
    throw Error(ErrorCode::TooFewPoints,
                "MDS into " + std::to_string(dim) + " dimensions needs at least " + std::to_string(dim + 1) + " points");
  }
  if (distances.cols() != n) throw Error(ErrorCode::DimensionMismatch, "distance matrix must be square");

  const Eigen::MatrixXd sq = distances.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd b = -0.5 * centering * sq * centering;
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  // Eigen sorts ascending.
  const Eigen::VectorXd evals = solver.eigenvalues().reverse();
  const Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();

  Embedding out;
  out.eigenvalues = evals;
  const double total = evals.cwiseAbs().sum();
  double negative = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) negative += std::max(0.0, -evals[i]);
  out.negative_mass = total > 0.0 ? negative / total : 0.0;

  out.points = Eigen::MatrixXd::Zero(n, dim);
  for (int a = 0; a < dim; ++a) {
    const double lambda = std::max(0.0, evals[a]);
    Eigen::VectorXd axis = evecs.col(a) * std::sqrt(lambda);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(axis[i]) > 1e-12) {
        if (axis[i] < 0.0) axis = -axis;
        break;
      }
    }
    out.points.col(a) = axis;
  }
  out.points.rowwise() -= out.points.colwise().mean();
  return out;
}

namespace {

void check_labels(const Eigen::MatrixXd& d, std::span<const std::string> labels) {
  if (d.rows() != d.cols() || static_cast<std::size_t>(d.rows()) != labels.size()) {
    throw Error(ErrorCode::LabelMismatch, std::to_string(labels.size()) + " labels for a " +
                                              std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + " matrix");
  }
}

}  // namespace

double loo_knn_accuracy(const Eigen::MatrixXd& distances, std::span<const std::string> labels, int k) {
  check_labels(distances, labels);
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  const int n = static_cast<int>(labels.size());
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "leave-one-out needs at least 2 clips");
  int correct = 0;
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    order.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return distances(i, a) < distances(i, b) || (distances(i, a) == distances(i, b) && a < b);
    });
    const int take = std::min<int>(k, static_cast<int>(order.size()));
    // label -> (votes, rank of nearest member)
    std::map<std::string, std::pair<int, int>> votes;
    for (int r = 0; r < take; ++r) {
      auto [it, inserted] = votes.try_emplace(labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])],
                                              0, r);
      ++it->second.first;
    }
    const auto best = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
      return a.second.first < b.second.first || (a.second.first == b.second.first && a.second.second > b.second.second);
    });
    if (best->first == labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / n;
}

double silhouette(const Eigen::MatrixXd& distances, std::span<const std::string> labels) {
  check_labels(distances, labels);
  std::map<std::string, std::vector<int>> classes;
  for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(static_cast<int>(i));
  if (classes.size() < 2) throw Error(ErrorCode::DegenerateClass, "silhouette needs at least two classes");
  for (const auto& [name, members] : classes) {
    if (members.size() < 2) throw Error(ErrorCode::DegenerateClass, "class '" + name + "' has a single member");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [name, members] : classes) {
      double s = 0.0;
      for (int j : members) s += distances(static_cast<Eigen::Index>(i), j);
      if (name == labels[i]) {
        a = s / static_cast<double>(members.size() - 1);
      } else {
        b = std::min(b, s / static_cast<double>(members.size()));
      }
    }
    const double denom = std::max(a, b);
    sum += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return sum / static_cast<double>(labels.size());
}

}  // namespace sigshape
