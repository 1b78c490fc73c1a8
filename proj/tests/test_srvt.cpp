#include <doctest.h>

#include "sigshape/error.hpp"
#include "sigshape/srvt.hpp"
#include "support.hpp"

using namespace sigshape;
using testing::Rng;

namespace {

SRVRepresentation constant_srv(const Eigen::VectorXd& u) {
  return SRVRepresentation({0.0, 1.0}, static_cast<int>(u.size()), std::vector<double>(u.data(), u.data() + u.size()));
}

// Independent evaluation of the L2 distance by midpoint sampling.
double sampled_distance(const SRVRepresentation& a, const SRVRepresentation& b, int samples) {
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = (s + 0.5) / samples;
    sum += (a.value(a.piece_index(t)) - b.value(b.piece_index(t))).squaredNorm();
  }
  return std::sqrt(sum / samples);
}

}  // namespace

TEST_SUITE("srvt") {
  TEST_CASE("unit-speed segment maps to its slope") {
    const Eigen::Vector3d b = Eigen::Vector3d(1, 2, 2) / 3.0;
    const auto c = PiecewiseGeodesicCurve::from_frames(
        {Pose::identity(1), Pose(std::vector<Rotation>{exp_so3(b)})});
    const auto q = srv_transform(c);
    REQUIRE(q.piece_count() == 1);
    CHECK((q.value(0) - b).norm() < 1e-15);
  }

  TEST_CASE("double speed scales by sqrt 2 on the halved interval") {
    Eigen::VectorXd slopes(6);
    slopes << 0, 2, 0, 0, 0, 1;
    const LogDerivative ld({0.0, 0.5, 1.0}, 3, std::vector<double>(slopes.data(), slopes.data() + 6));
    const auto q = srv_transform(ld);
    REQUIRE(q.piece_count() == 2);
    CHECK(q.breaks()[1] == 0.5);
    CHECK((q.value(0) - Eigen::Vector3d(0, std::sqrt(2.0), 0)).norm() < 1e-15);
    CHECK((q.value(1) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  }

  TEST_CASE("right translation invariance") {
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
      const auto c = testing::random_curve(rng, 3, 6);
      const auto g = testing::random_pose(rng, 3);
      CHECK(l2_distance(srv_transform(right_translate(c, g)), srv_transform(c)) < 1e-13);
    }
  }

  TEST_CASE("l2_distance") {
    Rng rng(2);
    const auto c0 = testing::random_curve(rng, 2, 5);
    const auto c1 = testing::random_curve(rng, 2, 7);
    const auto q0 = srv_transform(c0), q1 = srv_transform(c1);
    CHECK(l2_distance(q0, q0) == 0.0);

    Eigen::VectorXd u(3), v(3);
    u << 1, 2, 3;
    v << -1, 0, 0.5;
    CHECK(l2_distance(constant_srv(u), constant_srv(v)) == doctest::Approx((u - v).norm()).epsilon(1e-15));

    CHECK(l2_distance(q0, q1) == doctest::Approx(sampled_distance(q0, q1, 200000)).epsilon(1e-4));

    const auto g = testing::random_pose(rng, 2);
    CHECK(std::abs(l2_distance(srv_transform(right_translate(c0, g)), srv_transform(right_translate(c1, g))) -
                   l2_distance(q0, q1)) < 1e-12);

    CHECK_THROWS_AS(l2_distance(q0, constant_srv(u)), Error);
  }

  TEST_CASE("l2_distance is a metric") {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      const auto a = srv_transform(testing::random_curve(rng, 2, 4));
      const auto b = srv_transform(testing::random_curve(rng, 2, 6));
      const auto c = srv_transform(testing::random_curve(rng, 2, 5));
      CHECK(l2_distance(a, b) == l2_distance(b, a));
      CHECK(l2_distance(a, c) <= l2_distance(a, b) + l2_distance(b, c) + 1e-12);
      CHECK(l2_distance(a, b) > 0.0);
    }
  }

  TEST_CASE("warp_srv") {
    Rng rng(4);
    const auto c = normalize_to_identity(testing::random_curve(rng, 2, 6));
    const auto q = srv_transform(c);
    CHECK(l2_distance(warp_srv(q, Reparameterization::identity()), q) == 0.0);
    for (int i = 0; i < 50; ++i) {
      const auto phi = testing::random_phi(rng);
      const auto w = warp_srv(q, phi);
      // Equivariance: R(c o phi) = (R(c) o phi) sqrt(phi').
      CHECK(l2_distance(srv_transform(reparameterize(c, phi)), w) <= 1e-12);
      CHECK(std::abs(l2_norm(w) - l2_norm(q)) <= 1e-12);
    }
  }

  TEST_CASE("simultaneous warping is an isometry") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
      const auto a = srv_transform(testing::random_curve(rng, 2, 5));
      const auto b = srv_transform(testing::random_curve(rng, 2, 4));
      const auto phi = testing::random_phi(rng);
      CHECK(std::abs(l2_distance(warp_srv(a, phi), warp_srv(b, phi)) - l2_distance(a, b)) <= 1e-12);
    }
  }

  TEST_CASE("joint weights") {
    Rng rng(6);
    const auto a = testing::random_curve(rng, 2, 5);
    const auto b = testing::random_curve(rng, 2, 5);
    // q scales by w^(1/4) under a uniform weight w.
    const SrvtOptions sixteen{{16.0, 16.0}};
    CHECK(l2_distance(srv_transform(a, sixteen), srv_transform(b, sixteen)) ==
          doctest::Approx(2.0 * l2_distance(srv_transform(a), srv_transform(b))).epsilon(1e-13));
    CHECK_THROWS_AS(srv_transform(a, SrvtOptions{{1.0}}), Error);
  }

  TEST_CASE("degenerate curves") {
    const auto still = PiecewiseGeodesicCurve::from_frames(std::vector<Pose>(3, Pose::identity(2)));
    try {
      srv_transform(still);
      FAIL("expected NotImmersed");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotImmersed);
    }
    // A repeated frame is excised, as the limit of a reparameterization.
    Rng rng(7);
    const auto p0 = testing::random_pose(rng, 2), p1 = testing::random_pose(rng, 2), p2 = testing::random_pose(rng, 2);
    const auto with_pause = PiecewiseGeodesicCurve::from_frames({p0, p1, p1, p2});
    const auto without = PiecewiseGeodesicCurve::from_frames({p0, p1, p2});
    CHECK(with_pause.has_stationary_segments());
    CHECK(l2_distance(srv_transform(with_pause), srv_transform(without)) < 1e-12);
  }

  TEST_CASE("knot insertion leaves distances unchanged") {
    Rng rng(8);
    const auto a = testing::random_curve(rng, 2, 4);
    const auto b = testing::random_curve(rng, 2, 5);
    const auto a2 = insert_knot(insert_knot(a, 0.123), 0.77);
    CHECK(std::abs(l2_distance(srv_transform(a2), srv_transform(b)) - l2_distance(srv_transform(a), srv_transform(b))) <=
          1e-10);
  }

  TEST_CASE("refine_breaks") {
    const std::vector<double> a{0.0, 0.3, 1.0}, b{0.0, 0.3 + 1e-14, 0.6, 1.0};
    const auto r = refine_breaks(a, b);
    REQUIRE(r.size() == 4);
    CHECK(r[1] == 0.3);
    CHECK(r[2] == 0.6);
  }
}
