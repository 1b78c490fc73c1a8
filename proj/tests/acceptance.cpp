// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-9 decide the
// exit status; criterion 10 (the mocap fixtures) only reports.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sigshape/analysis.hpp"
#include "sigshape/io.hpp"
#include "sigshape/mocap.hpp"
#include "sigshape/signature.hpp"
#include "support.hpp"

using namespace sigshape;
using testing::Rng;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome bounded(const std::string& what, double worst, double tol) {
  return {worst <= tol, what + " " + fmt(worst) + " <= " + fmt(tol)};
}

Outcome all_of(std::vector<Outcome> parts) {
  Outcome out{true, ""};
  for (auto& p : parts) {
    out.passed = out.passed && p.passed;
    out.detail += (out.detail.empty() ? "" : "; ") + p.detail;
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double relative(const TruncatedTensor& a, const TruncatedTensor& b) {
  return max_abs_diff(a, b) / std::max(1.0, norm(a, true));
}

// Straight line with constant velocity b: S(w) = prod b_{w_i} / |w|!.
Outcome closed_form() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> b{1, 2, 3};
  const auto s = signature(LogDerivative({0.0, 1.0}, 3, b), 4);
  double worst = 0.0;
  std::function<void(std::vector<int>&, double, double)> visit = [&](std::vector<int>& word, double prod,
                                                                     double fact) {
    if (!word.empty()) worst = std::max(worst, std::abs(s.tensor.coefficient(Word(word)) - prod / fact));
    if (word.size() == 4) return;
    for (int i = 1; i <= 3; ++i) {
      word.push_back(i);
      visit(word, prod * b[static_cast<std::size_t>(i) - 1], fact * static_cast<double>(word.size()));
      word.pop_back();
    }
  };
  std::vector<int> word;
  visit(word, 1.0, 1.0);
  const double elapsed = seconds_since(start);
  return all_of({bounded("max coefficient error", worst, 1e-12), bounded("seconds", elapsed, 1.0)});
}

Outcome reparam_invariance() {
  Rng rng(101);
  double rel = 0.0, dist = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto c = testing::random_curve(rng, 2, 8);
    const auto warped = reparameterize(c, testing::random_phi(rng, 16));
    rel = std::max(rel, relative(signature(c, 3).tensor, signature(warped, 3).tensor));
    dist = std::max(dist, d_sig(c, warped));
  }
  return all_of({bounded("relative", rel, 1e-10), bounded("d_sig", dist, 1e-10)});
}

Outcome algebraic_identities() {
  Rng rng(202);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double chen = 0.0, rev = 0.0, shuffle = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto c = testing::random_curve(rng, 2, 6);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const auto whole = signature(c, 3);
    const auto joined = chen_concat(chen_concat(signature(c, 3, 0.0, a), signature(c, 3, a, b)), signature(c, 3, b, 1.0));
    chen = std::max(chen, max_abs_diff(joined.tensor, whole.tensor));
    const auto back = truncated_product(whole.tensor, signature(reverse(c), 3).tensor);
    rev = std::max(rev, max_abs_diff(back, TruncatedTensor::unit(whole.tensor.alphabet(), 3)));
    shuffle = std::max(shuffle, shuffle_check(whole.tensor));
  }
  return all_of({bounded("chen", chen, 1e-12), bounded("reverse", rev, 1e-12), bounded("shuffle", shuffle, 1e-10)});
}

Outcome riemann_oracle() {
  Rng rng(303);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  double worst = 0.0;
  for (int dim : {2, 6}) {
    for (int t = 0; t < 10; ++t) {
      std::vector<double> knots{0.0};
      for (int k = 0; k < 5; ++k) knots.push_back(knots.back() + u(rng));
      for (auto& k : knots) k /= knots.back();
      knots.back() = 1.0;
      std::vector<double> slopes(static_cast<std::size_t>(5 * dim));
      for (auto& x : slopes) x = n(rng);
      const LogDerivative ld(knots, dim, slopes);
      const auto s = signature(ld, 3);
      const auto oracle = testing::riemann_signature(ld, 3, 10000);
      double err = 0.0, scale = 0.0;
      for (const auto& [w, value] : oracle) {
        err = std::max(err, std::abs(s.tensor.coefficient(Word(w)) - value));
        scale = std::max(scale, std::abs(value));
      }
      worst = std::max(worst, err / scale);
    }
  }
  return bounded("relative", worst, 1e-3);
}

Outcome srvt_properties() {
  Rng rng(404);
  double equivariance = 0.0, translation = 0.0, isometry = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto c0 = normalize_to_identity(testing::random_curve(rng, 2, 6));
    const auto c1 = normalize_to_identity(testing::random_curve(rng, 2, 5));
    const auto phi = testing::random_phi(rng, 16);
    const auto q0 = srv_transform(c0), q1 = srv_transform(c1);
    equivariance = std::max(equivariance, l2_distance(srv_transform(reparameterize(c0, phi)), warp_srv(q0, phi)));
    translation = std::max(translation,
                           l2_distance(srv_transform(right_translate(c0, testing::random_pose(rng, 2))), q0));
    isometry = std::max(isometry, std::abs(l2_distance(warp_srv(q0, phi), warp_srv(q1, phi)) - l2_distance(q0, q1)));
  }
  return all_of({bounded("equivariance", equivariance, 1e-12), bounded("translation", translation, 1e-12),
                 bounded("warp isometry", isometry, 1e-12)});
}

Outcome dp_solver() {
  Rng rng(505);
  double enumeration = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int m = 2 + t % 5;
    const DPGrid grid(m, {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}});
    const auto q0 = srv_transform(normalize_to_identity(testing::random_curve(rng, 2, 4)));
    const auto q1 = srv_transform(normalize_to_identity(testing::random_curve(rng, 2, 5)));
    enumeration = std::max(enumeration,
                           std::abs(optimal_reparam_dp(q0, q1, grid).cost - testing::brute_force_cost(q0, q1, grid)));
  }
  double recovered = 0.0, above_flat = -1.0, increase = -1.0;
  for (int t = 0; t < 10; ++t) {
    const auto c = testing::random_curve(rng, 2, 6);
    recovered = std::max(recovered, shape_distance(c, reparameterize(c, testing::random_grid_phi(rng, 64, 4))));
    const auto d = testing::random_curve(rng, 2, 7);
    const auto q0 = srv_transform(normalize_to_identity(c)), q1 = srv_transform(normalize_to_identity(d));
    double previous = l2_distance(q0, q1);
    above_flat = std::max(above_flat, srv_shape_distance(q0, q1, DPGrid::square(64, 4)) - previous);
    for (int m : {8, 16, 32, 64}) {
      const double dm = srv_shape_distance(q0, q1, DPGrid::square(m, 4));
      increase = std::max(increase, dm - previous);
      previous = dm;
    }
  }
  return all_of({bounded("enumeration gap", enumeration, 0.0), bounded("grid warp recovery", recovered, 1e-6),
                 bounded("d_S* - d_P*", above_flat, 1e-12), bounded("refinement increase", increase, 1e-12)});
}

DistanceParams params_for(Method m) {
  DistanceParams p;
  p.method = m;
  return p;
}

std::vector<PiecewiseGeodesicCurve> curves_of(const LabeledDataset& data) {
  std::vector<PiecewiseGeodesicCurve> out;
  for (const auto& clip : data.clips) out.push_back(clip.curve());
  return out;
}

std::vector<std::string> labels_of(const LabeledDataset& data) {
  std::vector<std::string> out;
  for (const auto& clip : data.clips) out.push_back(clip.label);
  return out;
}

Outcome clustering() {
  SynthSpec spec;
  spec.noise = 0.02;
  const auto data = synth_classes(spec);
  const auto curves = curves_of(data);
  const auto labels = labels_of(data);
  const auto sig = distance_matrix(curves, params_for(Method::Signature));
  const auto flat = distance_matrix(curves, params_for(Method::Srvt));
  const auto dp = distance_matrix(curves, params_for(Method::SrvtDp));
  const double acc_sig = loo_knn_accuracy(sig.values, labels), acc_dp = loo_knn_accuracy(dp.values, labels);
  const double sil_dp = silhouette(dp.values, labels), sil_flat = silhouette(flat.values, labels);
  return {acc_sig >= 0.9 && acc_dp >= 0.9 && sil_dp >= sil_flat,
          "1-NN accuracy signature " + fmt(acc_sig) + ", srvt_dp " + fmt(acc_dp) + " (>= 0.9); silhouette srvt_dp " +
              fmt(sil_dp) + " >= srvt " + fmt(sil_flat)};
}

Outcome speed() {
  SynthSpec spec;
  spec.joints = 10;
  spec.noise = 0.02;
  const auto curves = curves_of(synth_classes(spec));
  auto start = std::chrono::steady_clock::now();
  distance_matrix(curves, params_for(Method::Signature), {}, false);
  const double sig = seconds_since(start);
  start = std::chrono::steady_clock::now();
  distance_matrix(curves, params_for(Method::SrvtDp), {}, false);
  const double dp = seconds_since(start);
  return {sig <= dp / 10.0, "signature " + fmt(sig) + " s vs srvt_dp " + fmt(dp) + " s (ratio " + fmt(dp / sig) + ")"};
}

Outcome mds() {
  Rng rng(909);
  std::normal_distribution<double> n(0.0, 2.0);
  Eigen::MatrixXd planted(10, 2);
  for (int i = 0; i < 10; ++i) planted.row(i) << n(rng), n(rng);
  const double rmsd = testing::procrustes_rmsd(classical_mds(testing::euclidean_distances(planted)).points, planted);
  const Eigen::MatrixXd tri = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  const double equilateral =
      (testing::euclidean_distances(classical_mds(tri).points) - tri).cwiseAbs().maxCoeff();
  return all_of({bounded("planted RMSD", rmsd, 1e-8), bounded("equilateral", equilateral, 1e-9)});
}

Outcome fixtures(const std::filesystem::path& out_dir) {
  const std::filesystem::path dir = std::filesystem::path(SIGSHAPE_FIXTURES) / "mocap";
  const auto skeleton = parse_asf(read_file((dir / "skeleton.asf").string()));
  LabeledDataset data;
  for (const char* label : {"walk", "jog", "run", "jump"}) {
    data.class_names.push_back(label);
    for (int rep : {1, 2}) {
      const std::string id = std::string(label) + "_" + std::to_string(rep);
      auto clip = parse_amc(read_file((dir / (id + ".amc")).string()), skeleton, id);
      clip.label = label;
      data.clips.push_back(clip_to_pose_clip(clip, skeleton));
    }
  }
  const auto curves = curves_of(data);
  const auto labels = labels_of(data);
  std::vector<std::string> ids;
  for (const auto& clip : data.clips) ids.push_back(clip.id);
  std::filesystem::create_directories(out_dir);
  std::string detail;
  for (Method m : {Method::Signature, Method::Srvt, Method::SrvtDp}) {
    const auto d = distance_matrix(curves, params_for(m), ids);
    const auto e = classical_mds(d);
    const auto path = out_dir / ("mds_" + std::string(to_string(m)) + ".svg");
    write_file(path.string(), render_svg(ids, e.points, labels, "MDS, " + std::string(to_string(m))));
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(m)) + " 1-NN " +
              fmt(loo_knn_accuracy(d.values, labels));
  }
  return {true, detail + "; SVGs in " + out_dir.string()};
}

bool report(int id, const std::string& name, const std::function<Outcome()>& run, bool gating = true) {
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s [%d] %s: %s%s\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              gating ? "" : " (optional)");
  std::fflush(stdout);
  return o.passed || !gating;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "acceptance_svg";
  bool ok = true;
  ok &= report(1, "closed-form signature of a straight line", closed_form);
  ok &= report(2, "signature reparameterization invariance", reparam_invariance);
  ok &= report(3, "Chen, reversal and shuffle identities", algebraic_identities);
  ok &= report(4, "signature vs nested Riemann sums", riemann_oracle);
  ok &= report(5, "SRVT equivariance and invariances", srvt_properties);
  ok &= report(6, "DP optimality, recovery and refinement", dp_solver);
  ok &= report(7, "clustering of synthetic motion classes", clustering);
  ok &= report(8, "signature distances at least 10x faster than DP", speed);
  ok &= report(9, "classical MDS recovers planted configurations", mds);
  report(10, "mocap fixtures through the pipeline", [&] { return fixtures(out_dir); }, false);
  std::printf("%s\n", ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED");
  return ok ? 0 : 1;
}
