#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace kakeya {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Orthonormal moving frame attached to the model curve
/// gamma(theta) = (cos theta, sin theta, 1)/sqrt(2) on the light cone.
///   u1 = gamma(theta)                  (tangent of the projection family)
///   u2 = sqrt(2) * gamma'(theta)
///   u3 = sqrt(2) * (gamma x gamma')(theta)
struct Frame {
    double theta = 0.0;
    Vec3 u1 = Vec3::Zero();
    Vec3 u2 = Vec3::Zero();
    Vec3 u3 = Vec3::Zero();

    /// Coordinates of x in the (u1, u2, u3) basis.
    Vec3 coords(const Vec3& x) const { return {u1.dot(x), u2.dot(x), u3.dot(x)}; }
    /// Inverse of coords().
    Vec3 embed(const Vec3& y) const { return y.x() * u1 + y.y() * u2 + y.z() * u3; }
};

/// Horizontal line l(a,b,c) = { (b, 0, c) + s (a, 1, b/2) : s in R }.
struct HorizontalLineParam {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Dual line l*(x,y,t) = (0, x, t - xy/2) + span(1, -y, y^2/2).
struct DualLineParam {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

/// Closed segment with distinct endpoints.
struct Segment3 {
    Vec3 p = Vec3::Zero();
    Vec3 q = Vec3::Zero();
};

} // namespace kakeya
