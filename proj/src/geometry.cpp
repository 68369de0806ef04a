#include "kakeya/geometry.hpp"

#include <cmath>
#include <numbers>

namespace kakeya {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
} // namespace

Vec3 heisenberg_mul(const Vec3& p, const Vec3& q) {
    return {p.x() + q.x(),
            p.y() + q.y(),
            p.z() + q.z() + 0.5 * (p.x() * q.y() - q.x() * p.y())};
}

Vec3 gamma_curve(double theta) {
    return {std::cos(theta) * kInvSqrt2, std::sin(theta) * kInvSqrt2, kInvSqrt2};
}

Frame gamma_frame(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Frame f;
    f.theta = theta;
    f.u1 = Vec3{c, s, 1.0} * kInvSqrt2;
    f.u2 = Vec3{-s, c, 0.0};
    f.u3 = Vec3{-c, -s, 1.0} * kInvSqrt2;
    return f;
}

Vec3 u_transform(const Vec3& xi) {
    return {(xi.x() + xi.z()) * kInvSqrt2, xi.y(), (-xi.x() + xi.z()) * kInvSqrt2};
}

Vec3 u_star(const Vec3& eta) {
    return {(eta.x() - eta.z()) * kInvSqrt2, eta.y(), (eta.x() + eta.z()) * kInvSqrt2};
}

const Mat3& u_matrix() {
    static const Mat3 m = [] {
        Mat3 u;
        u << kInvSqrt2, 0, kInvSqrt2,
             0,         1, 0,
            -kInvSqrt2, 0, kInvSqrt2;
        return u;
    }();
    return m;
}

const Mat3& u_star_matrix() {
    static const Mat3 m = u_matrix().transpose();
    return m;
}

Vec3 ell_point(const HorizontalLineParam& line, double s) {
    return {line.b + s * line.a, s, line.c + 0.5 * s * line.b};
}

Vec3 ell_star_point(const DualLineParam& line, double lambda) {
    return {lambda,
            line.x - lambda * line.y,
            line.t - 0.5 * line.x * line.y + 0.5 * lambda * line.y * line.y};
}

namespace {
double point_line_distance(const Vec3& p, const Vec3& base, const Vec3& dir) {
    const Vec3 v = p - base;
    const Vec3 d = dir.normalized();
    return (v - v.dot(d) * d).norm();
}
} // namespace

double distance_to_ell(const Vec3& p, const HorizontalLineParam& line) {
    return point_line_distance(p, Vec3{line.b, 0.0, line.c},
                               Vec3{line.a, 1.0, 0.5 * line.b});
}

double distance_to_ell_star(const Vec3& p, const DualLineParam& line) {
    return point_line_distance(p,
                               Vec3{0.0, line.x, line.t - 0.5 * line.x * line.y},
                               Vec3{1.0, -line.y, 0.5 * line.y * line.y});
}

bool duality_holds(const Vec3& p, const Vec3& pstar, double tol) {
    return distance_to_ell_star(p, DualLineParam{pstar.x(), pstar.y(), pstar.z()}) <= tol;
}

Vec3 horizontal_direction(double a, double b) {
    return Vec3{a, 1.0, 0.5 * b}.normalized();
}

Vec3 f_map(const Vec3& p) { return {p.x(), p.y(), 2.0 * p.z()}; }

Vec3 f_inv(const Vec3& p) { return {p.x(), p.y(), 0.5 * p.z()}; }

std::optional<Sl2Coefficients> sl2_from_points(const Vec3& p, const Vec3& q) {
    const Vec3 diff = q - p;
    if (std::abs(diff.z()) < 1e-12 * diff.norm()) return std::nullopt;
    // Normalize the direction so its third component is 1, then slide to z=0.
    const double c = diff.x() / diff.z();
    const double d = diff.y() / diff.z();
    const double a = p.x() - p.z() * c;
    const double b = p.y() - p.z() * d;
    return Sl2Coefficients{a, b, c, d};
}

double direction_angle(const Vec3& d1, const Vec3& d2) {
    const Vec3 a = d1.normalized();
    const Vec3 b = d2.normalized();
    return std::atan2(a.cross(b).norm(), std::abs(a.dot(b)));
}

double dual_direction_gap(const Vec3& w1, const Vec3& w2) {
    const Vec3 e1 = u_transform(w1);
    const Vec3 e2 = u_transform(w2);
    return direction_angle(horizontal_direction(e1.x(), e1.y()),
                           horizontal_direction(e2.x(), e2.y()));
}

} // namespace kakeya
