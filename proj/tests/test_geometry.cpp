#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nvp/geometry.hpp"

using namespace nvp;

TEST_CASE("wrap_angle lands in (-pi, pi]") {
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(2.0 * kPi + 0.25) == doctest::Approx(0.25));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng);
        const double w = wrap_angle(a);
        CHECK(w > -kPi);
        CHECK(w <= kPi);
        CHECK(std::abs(std::remainder(w - a, 2.0 * kPi)) < 1e-9);
    }
}

TEST_CASE("Pose2 normalizes heading on construction") {
    Pose2 p(1.0, 2.0, 5.0 * kPi / 2.0);
    CHECK(p.heading == doctest::Approx(kPi / 2.0));
}

TEST_CASE("geo_to_local identity at origin") {
    GeoPoint o(38.38, -0.51);
    Point2 r = geo_to_local(o, o);
    CHECK(r.x == doctest::Approx(0.0));
    CHECK(r.y == doctest::Approx(0.0));
}

TEST_CASE("geo_to_local equator milli-degree offsets") {
    GeoPoint o(0.0, 0.0);
    // R * (0.001 deg in rad) = 111.3194908 m, computed by hand.
    Point2 east = geo_to_local(o, GeoPoint(0.0, 0.001));
    CHECK(east.x == doctest::Approx(111.3194908).epsilon(1e-6));
    CHECK(east.y == doctest::Approx(0.0));
    Point2 north = geo_to_local(o, GeoPoint(0.001, 0.0));
    CHECK(north.x == doctest::Approx(0.0));
    CHECK(north.y == doctest::Approx(111.3194908).epsilon(1e-6));
}

TEST_CASE("geo_to_local round trip within 1e-6 m at sub-km scale") {
    GeoPoint o(38.3853, -0.5139);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-800.0, 800.0);
    for (int i = 0; i < 100; ++i) {
        Point2 p{u(rng), u(rng)};
        Point2 back = geo_to_local(o, local_to_geo(o, p));
        CHECK(std::abs(back.x - p.x) < 1e-6);
        CHECK(std::abs(back.y - p.y) < 1e-6);
    }
}

TEST_CASE("geo_to_local is monotone in latitude offset") {
    GeoPoint o(10.0, 20.0);
    double prev = -1.0;
    for (int k = 1; k <= 20; ++k) {
        Point2 r = geo_to_local(o, GeoPoint(10.0 + 1e-4 * k, 20.0));
        CHECK(std::abs(r.y) > prev);
        prev = std::abs(r.y);
    }
}

TEST_CASE("geo point range validation") {
    CHECK_THROWS_AS(GeoPoint(91.0, 0.0), InvalidGeoPoint);
    CHECK_THROWS_AS(GeoPoint(0.0, 181.0), InvalidGeoPoint);
    CHECK_THROWS_AS(geo_to_local(GeoPoint(89.5, 0.0), GeoPoint(0.0, 0.0)), InvalidGeoPoint);
}

TEST_CASE("mahalanobis reduces to Euclidean for identity covariance") {
    PoseEstimate est(Pose2(0, 0, 0), Eigen::Matrix3d::Identity());
    CHECK(mahalanobis_distance({3.0, 4.0}, est) == doctest::Approx(5.0));
}

TEST_CASE("mahalanobis with anisotropic diagonal") {
    Eigen::Matrix3d cov = Eigen::Matrix3d::Identity();
    cov(0, 0) = 4.0;
    cov(1, 1) = 1.0;
    PoseEstimate est(Pose2(0, 0, 0), cov);
    CHECK(mahalanobis_distance({2.0, 0.0}, est) == doctest::Approx(1.0));
}

TEST_CASE("mahalanobis scaling law MD(s*Sigma) = MD(Sigma)/sqrt(s)") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> us(0.1, 9.0);
    for (int i = 0; i < 120; ++i) {
        // Random PSD 2x2 block via A*A' + eps*I.
        Eigen::Matrix2d a;
        a << u(rng), u(rng), u(rng), u(rng);
        Eigen::Matrix2d pos = a * a.transpose() + 0.05 * Eigen::Matrix2d::Identity();
        Eigen::Matrix3d cov = Eigen::Matrix3d::Identity();
        cov.topLeftCorner<2, 2>() = pos;
        const double s = us(rng);
        Point2 goal{u(rng), u(rng)};
        PoseEstimate e1(Pose2(0.5, -0.25, 0.1), cov);
        PoseEstimate e2(Pose2(0.5, -0.25, 0.1), Eigen::Matrix3d(s * cov));
        const double m1 = mahalanobis_distance(goal, e1);
        const double m2 = mahalanobis_distance(goal, e2);
        CHECK(m2 == doctest::Approx(m1 / std::sqrt(s)).epsilon(1e-9));
    }
}

TEST_CASE("mahalanobis is zero iff goal equals the mean position") {
    Eigen::Matrix3d cov = Eigen::Matrix3d::Identity() * 2.0;
    PoseEstimate est(Pose2(1.5, -2.0, 0.7), cov);
    CHECK(mahalanobis_distance({1.5, -2.0}, est) == doctest::Approx(0.0));
    CHECK(mahalanobis_distance({1.5 + 1e-6, -2.0}, est) > 0.0);
}

TEST_CASE("mahalanobis invariant under joint rotation of offset and covariance") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        Eigen::Matrix2d a;
        a << u(rng), u(rng), u(rng), u(rng);
        Eigen::Matrix2d pos = a * a.transpose() + 0.1 * Eigen::Matrix2d::Identity();
        const double th = u(rng);
        Eigen::Matrix2d r;
        r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        Point2 off{u(rng), u(rng)};
        Point2 roff = rotate(off, th);

        Eigen::Matrix3d cov = Eigen::Matrix3d::Identity();
        cov.topLeftCorner<2, 2>() = pos;
        Eigen::Matrix3d rcov = Eigen::Matrix3d::Identity();
        rcov.topLeftCorner<2, 2>() = r * pos * r.transpose();

        PoseEstimate e1(Pose2(0, 0, 0), cov);
        PoseEstimate e2(Pose2(0, 0, 0), rcov);
        CHECK(mahalanobis_distance(off, e1) ==
              doctest::Approx(mahalanobis_distance(roff, e2)).epsilon(1e-9));
    }
}

TEST_CASE("singular positional covariance is rejected") {
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    cov(2, 2) = 1.0;
    PoseEstimate est(Pose2(0, 0, 0), cov);
    CHECK_THROWS_AS(mahalanobis_distance({1.0, 0.0}, est), SingularCovariance);
}

TEST_CASE("covariance validation rejects indefinite matrices") {
    Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(PoseEstimate(Pose2(), bad), std::invalid_argument);
    Eigen::Matrix3d asym = Eigen::Matrix3d::Identity();
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(PoseEstimate(Pose2(), asym), std::invalid_argument);
}

TEST_CASE("Plane3 normalizes and measures signed distance") {
    Plane3 pl(0.0, 0.0, 2.0, -4.0);
    CHECK(pl.nz() == doctest::Approx(1.0));
    CHECK(pl.d() == doctest::Approx(-2.0));
    CHECK(pl.signed_distance({0, 0, 5}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(Plane3(0, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("frame transforms compose to identity") {
    Pose2 pose(2.0, -1.0, 0.8);
    Point2 p{3.0, 4.0};
    Point2 back = frame_to_world(pose, world_to_frame(pose, p));
    CHECK(back.x == doctest::Approx(p.x));
    CHECK(back.y == doctest::Approx(p.y));
}
