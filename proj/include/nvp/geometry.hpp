#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "nvp/errors.hpp"

namespace nvp {

inline constexpr double kEarthRadiusM = 6378137.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Normalize an angle into (-pi, pi].
double wrap_angle(double a);

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }
inline Point2 rotate(const Point2& p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Planar vehicle pose; heading is kept normalized in (-pi, pi].
struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;

    Pose2() = default;
    Pose2(double x_, double y_, double heading_) : x(x_), y(y_), heading(wrap_angle(heading_)) {}

    Point2 position() const { return {x, y}; }
};

/// Transform a world-frame point into the frame of `pose`.
Point2 world_to_frame(const Pose2& pose, const Point2& p);
/// Transform a point expressed in the frame of `pose` back to world.
Point2 frame_to_world(const Pose2& pose, const Point2& p);

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    GeoPoint() = default;
    GeoPoint(double lat, double lon);
};

/// Gaussian pose belief: mean plus 3x3 covariance (x, y, heading).
/// The covariance must be symmetric positive semi-definite.
class PoseEstimate {
  public:
    PoseEstimate(const Pose2& mean, const Eigen::Matrix3d& covariance);

    const Pose2& mean() const { return mean_; }
    const Eigen::Matrix3d& covariance() const { return covariance_; }

  private:
    Pose2 mean_;
    Eigen::Matrix3d covariance_;
};

/// Plane n.p + d = 0 with unit normal.
class Plane3 {
  public:
    Plane3(double nx, double ny, double nz, double d);

    double nx() const { return nx_; }
    double ny() const { return ny_; }
    double nz() const { return nz_; }
    double d() const { return d_; }

    double signed_distance(const Point3& p) const {
        return nx_ * p.x + ny_ * p.y + nz_ * p.z + d_;
    }

  private:
    double nx_, ny_, nz_, d_;
};

/// Equirectangular projection of `p` into the plane tangent at `origin`.
/// x grows with longitude (scaled by cos of the origin latitude), y with latitude.
Point2 geo_to_local(const GeoPoint& origin, const GeoPoint& p);

/// Inverse of geo_to_local; composes to identity within 1e-6 m at sub-km scale.
GeoPoint local_to_geo(const GeoPoint& origin, const Point2& p);

/// Mahalanobis distance of a positional goal under the positional 2x2
/// covariance block of the estimate.
double mahalanobis_distance(const Point2& goal, const PoseEstimate& est);

}  // namespace nvp
