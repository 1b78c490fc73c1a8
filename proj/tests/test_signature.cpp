#include <doctest.h>

#include "sigshape/error.hpp"
#include "sigshape/signature.hpp"
#include "support.hpp"

using namespace sigshape;
using testing::Rng;

using testing::code_of;

namespace {

// One segment over [0,1] with the given slopes, as a LogDerivative.
LogDerivative segments(std::vector<double> knots, int dim, std::vector<double> slopes) {
  return LogDerivative(std::move(knots), dim, std::move(slopes));
}

double relative(const TruncatedTensor& a, const TruncatedTensor& b) {
  return max_abs_diff(a, b) / std::max(1.0, norm(a, true));
}

}  // namespace

TEST_SUITE("signature") {
  TEST_CASE("constant curve") {
    const auto c = PiecewiseGeodesicCurve::from_frames(std::vector<Pose>(3, Pose::identity(2)));
    CHECK(max_abs_diff(signature(c, 3).tensor, TruncatedTensor::unit(6, 3)) == 0.0);
    CHECK(norm(log_signature(c, 3).tensor, true) == 0.0);
    CHECK(code_of([&] { signature_features(c); }) == ErrorCode::ZeroLogSignature);
  }

  TEST_CASE("straight line") {
    const std::vector<double> b{1, 2, 3};
    const auto ld = segments({0, 1}, 3, b);
    const auto s = signature(ld, 4);
    CHECK(max_abs_diff(s.tensor, tensor_exp(TruncatedTensor::from_letters(4, b))) <= 1e-13);
    // Sub-interval [s,t]: coefficients (t-s)^k/k! prod b.
    const auto sub = signature(ld, 3, 0.2, 0.7);
    CHECK(sub.tensor.coefficient(Word{3, 2}) == doctest::Approx(0.5 * 0.5 * 0.5 * 6.0).epsilon(1e-14));
    const auto log = log_signature(s);
    for (int i = 1; i <= 3; ++i) CHECK(log.tensor.coefficient(Word{i}) == doctest::Approx(b[i - 1]));
    for (int n = 2; n <= 4; ++n) {
      for (double x : log.tensor.level(n)) CHECK(std::abs(x) < 1e-12);
    }
  }

  TEST_CASE("interval errors") {
    const auto ld = segments({0, 1}, 3, {1, 0, 0});
    CHECK(code_of([&] { signature(ld, 2, 0.5, 0.4); }) == ErrorCode::BadInterval);
    CHECK(code_of([&] { signature(ld, 2, -0.1, 0.4); }) == ErrorCode::BadInterval);
    CHECK(code_of([&] { signature(ld, 2, 0.0, 1.5); }) == ErrorCode::BadInterval);
    const auto a = signature(ld, 2, 0.0, 0.3), b = signature(ld, 2, 0.4, 1.0);
    CHECK(code_of([&] { chen_concat(a, b); }) == ErrorCode::NonAdjacentIntervals);
  }

  TEST_CASE("Chen's rule") {
    const auto ld = segments({0, 0.5, 1}, 2, {2, 0, 0, 2});
    const auto unit = Signature{TruncatedTensor::unit(2, 3), 1.0, 1.0};
    const auto full = signature(ld, 3);
    CHECK(max_abs_diff(chen_concat(full, unit).tensor, full.tensor) == 0.0);
    // Unit-time segments e1 then e2.
    CHECK(full.tensor.coefficient(Word{1, 2}) == doctest::Approx(1.0));
    CHECK(full.tensor.coefficient(Word{2, 1}) == doctest::Approx(0.0));
    CHECK(full.tensor.coefficient(Word{1, 1}) == doctest::Approx(0.5));

    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
      const auto c = testing::random_curve(rng, 2, 6);
      const auto joined = chen_concat(signature(c, 3, 0.0, 0.37), signature(c, 3, 0.37, 1.0));
      CHECK(max_abs_diff(joined.tensor, signature(c, 3).tensor) <= 1e-12);
      CHECK(joined.start == 0.0);
      CHECK(joined.end == 1.0);
    }
  }

  TEST_CASE("L-shaped path log-signature") {
    const auto ld = segments({0, 0.5, 1}, 2, {2, 0, 0, 2});
    const auto l = log_signature(signature(ld, 2));
    CHECK(l.tensor.coefficient(Word{1, 2}) == doctest::Approx(0.5));
    CHECK(l.tensor.coefficient(Word{2, 1}) == doctest::Approx(-0.5));
  }

  TEST_CASE("reversal") {
    const std::vector<double> b{0.3, -0.7, 1.1};
    const auto s = signature(segments({0, 1}, 3, b), 3);
    const auto r = reverse_signature(s);
    const std::vector<double> nb{-0.3, 0.7, -1.1};
    CHECK(max_abs_diff(r.tensor, tensor_exp(TruncatedTensor::from_letters(3, nb))) <= 1e-14);
    const Signature unit{TruncatedTensor::unit(3, 3), 0.0, 1.0};
    CHECK(max_abs_diff(reverse_signature(unit).tensor, unit.tensor) == 0.0);

    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
      const auto c = testing::random_curve(rng, 2, 5);
      const auto sc = signature(c, 3);
      CHECK(max_abs_diff(truncated_product(signature(reverse(c), 3).tensor, sc.tensor), TruncatedTensor::unit(6, 3)) <=
            1e-12);
      CHECK(max_abs_diff(reverse_signature(sc).tensor, signature(reverse(c), 3).tensor) <= 1e-12);
    }
  }

  TEST_CASE("agrees with nested Riemann sums") {
    Rng rng(3);
    for (int joints : {1, 2}) {
      const auto c = testing::random_curve(rng, joints, 5);
      const auto ld = log_derivative(c);
      const auto s = signature(ld, 3);
      const auto oracle = testing::riemann_signature(ld, 3, 20000);
      double worst = 0.0, scale = 0.0;
      for (const auto& [word, value] : oracle) {
        worst = std::max(worst, std::abs(s.tensor.coefficient(Word(word)) - value));
        scale = std::max(scale, std::abs(value));
      }
      CHECK(worst / scale <= 1e-3);
    }
  }

  TEST_CASE("invariances") {
    Rng rng(4);
    for (int i = 0; i < 10; ++i) {
      const auto c = testing::random_curve(rng, 2, 6);
      const auto s = signature(c, 3).tensor;
      CHECK(relative(s, signature(reparameterize(c, testing::random_phi(rng)), 3).tensor) <= 1e-10);
      CHECK(relative(s, signature(right_translate(c, testing::random_pose(rng, 2)), 3).tensor) <= 1e-12);
      CHECK(relative(s, signature(insert_knot(c, 0.4321), 3).tensor) <= 1e-10);
      CHECK(shuffle_check(s) <= 1e-10);
    }
  }

  TEST_CASE("concatenation homomorphism") {
    Rng rng(5);
    const auto a = testing::random_curve(rng, 2, 4), b = testing::random_curve(rng, 2, 3);
    CHECK(max_abs_diff(signature(concatenate(a, b), 3).tensor,
                       truncated_product(signature(a, 3).tensor, signature(b, 3).tensor)) <= 1e-12);
  }

  TEST_CASE("factorial decay") {
    Rng rng(6);
    const auto c = testing::random_curve(rng, 1, 6);
    const auto ld = log_derivative(c);
    double length = 0.0;
    for (int k = 0; k < ld.segment_count(); ++k) length += ld.slope(k).lpNorm<Eigen::Infinity>() * ld.duration(k);
    const auto s = signature(ld, 5);
    double fact = 1.0;
    for (int n = 1; n <= 5; ++n) {
      fact *= n;
      double top = 0.0;
      for (double x : s.tensor.level(n)) top = std::max(top, std::abs(x));
      CHECK(top <= std::pow(length, n) / fact + 1e-15);
    }
  }

  TEST_CASE("d_sig") {
    Rng rng(7);
    const auto c = testing::random_curve(rng, 2, 6);
    CHECK(d_sig(c, c) == 0.0);
    CHECK(d_sig(c, reparameterize(c, testing::random_phi(rng))) <= 1e-10);

    const auto x = PiecewiseGeodesicCurve::from_frames(
        {Pose::identity(1), Pose(std::vector<Rotation>{exp_so3(AxisVector(1, 0, 0))})});
    const auto y = PiecewiseGeodesicCurve::from_frames(
        {Pose::identity(1), Pose(std::vector<Rotation>{exp_so3(AxisVector(0, 1, 0))})});
    CHECK(d_sig(x, y, {1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    for (int i = 0; i < 10; ++i) {
      const auto a = testing::random_curve(rng, 2, 4), b = testing::random_curve(rng, 2, 5),
                 e = testing::random_curve(rng, 2, 3);
      CHECK(d_sig(a, b) == d_sig(b, a));
      CHECK(d_sig(a, e) <= d_sig(a, b) + d_sig(b, e) + 1e-12);
    }
    CHECK(code_of([&] { d_sig(c, x); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("feature options") {
    Rng rng(8);
    const auto c = testing::random_curve(rng, 3, 5);
    const auto full = signature_features(c, {3});
    CHECK(full.size() == 9 + 81 + 729);
    double n2 = 0.0;
    for (double x : full) n2 += x * x;
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-14));

    const auto per_joint = signature_features(c, {3, SignatureMode::PerJoint});
    CHECK(per_joint.size() == 3 * (3 + 9 + 27));
    // Per-joint features are the single-joint log-signatures, stacked.
    const auto ld = log_derivative(c);
    std::vector<double> first_joint;
    for (int k = 0; k < ld.segment_count(); ++k) {
      for (int i = 0; i < 3; ++i) first_joint.push_back(ld.slope(k)[i]);
    }
    const auto lj = log_signature(signature(LogDerivative(std::vector<double>(ld.knots().begin(), ld.knots().end()), 3,
                                                          first_joint),
                                            3));
    double scale = 0.0;
    for (double x : per_joint) scale = std::max(scale, std::abs(x));
    CHECK(lj.tensor.coefficient(Word{1}) / per_joint[0] > 0.0);
    CHECK(per_joint[1] / per_joint[0] == doctest::Approx(lj.tensor.coefficient(Word{2}) / lj.tensor.coefficient(Word{1})));

    // Level scaling with a zero weight drops that level.
    const auto scaled = signature_features(c, {2, SignatureMode::FullCurve, {1.0, 0.0}});
    for (std::size_t i = 9; i < scaled.size(); ++i) CHECK(scaled[i] == 0.0);
    CHECK(code_of([&] { signature_features(c, {3, SignatureMode::FullCurve, {1.0}}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { feature_distance(full, per_joint); }) == ErrorCode::DimensionMismatch);
  }
}
