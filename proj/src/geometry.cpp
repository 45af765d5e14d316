#include "nvp/geometry.hpp"

#include <cmath>

namespace nvp {

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

Point2 world_to_frame(const Pose2& pose, const Point2& p) {
    return rotate(p - pose.position(), -pose.heading);
}

Point2 frame_to_world(const Pose2& pose, const Point2& p) {
    return rotate(p, pose.heading) + pose.position();
}

GeoPoint::GeoPoint(double lat, double lon) : lat_deg(lat), lon_deg(lon) {
    if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0) ||
        !std::isfinite(lat) || !std::isfinite(lon)) {
        throw InvalidGeoPoint("geo point out of range: lat=" + std::to_string(lat) +
                              " lon=" + std::to_string(lon));
    }
}

PoseEstimate::PoseEstimate(const Pose2& mean, const Eigen::Matrix3d& covariance)
    : mean_(mean), covariance_(covariance) {
    if (!covariance.allFinite() || (covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("pose covariance must be finite and symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(covariance);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw std::invalid_argument("pose covariance must be positive semi-definite");
    }
}

Plane3::Plane3(double nx, double ny, double nz, double d) {
    const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("plane normal must be nonzero");
    }
    nx_ = nx / n;
    ny_ = ny / n;
    nz_ = nz / n;
    d_ = d / n;
}

namespace {
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

void check_polar_guard(const GeoPoint& g) {
    if (std::abs(g.lat_deg) >= 89.0) {
        throw InvalidGeoPoint("latitude too close to the poles for the planar projection");
    }
}
}  // namespace

Point2 geo_to_local(const GeoPoint& origin, const GeoPoint& p) {
    check_polar_guard(origin);
    check_polar_guard(p);
    const double dlat = (p.lat_deg - origin.lat_deg) * kDegToRad;
    const double dlon = (p.lon_deg - origin.lon_deg) * kDegToRad;
    return {kEarthRadiusM * dlon * std::cos(origin.lat_deg * kDegToRad),
            kEarthRadiusM * dlat};
}

GeoPoint local_to_geo(const GeoPoint& origin, const Point2& p) {
    check_polar_guard(origin);
    const double dlat = p.y / kEarthRadiusM;
    const double dlon = p.x / (kEarthRadiusM * std::cos(origin.lat_deg * kDegToRad));
    return GeoPoint(origin.lat_deg + dlat * kRadToDeg, origin.lon_deg + dlon * kRadToDeg);
}

double mahalanobis_distance(const Point2& goal, const PoseEstimate& est) {
    const Eigen::Matrix3d& cov = est.covariance();
    const double a = cov(0, 0), b = cov(0, 1), c = cov(1, 0), d = cov(1, 1);
    const double det = a * d - b * c;
    if (!(det > 1e-12)) {
        throw SingularCovariance("positional covariance block is singular (det <= 1e-12)");
    }
    const double dx = goal.x - est.mean().x;
    const double dy = goal.y - est.mean().y;
    // delta' * inv(Sigma_xy) * delta with the closed-form 2x2 inverse.
    const double q = (d * dx * dx - (b + c) * dx * dy + a * dy * dy) / det;
    return std::sqrt(std::max(q, 0.0));
}

}  // namespace nvp
