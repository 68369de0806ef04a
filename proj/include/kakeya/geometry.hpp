#pragma once

#include <optional>

#include "kakeya/types.hpp"

namespace kakeya {

/// Heisenberg group product on R^3:
/// (x1,y1,t1) * (x2,y2,t2) = (x1+x2, y1+y2, t1+t2 + (x1 y2 - x2 y1)/2).
Vec3 heisenberg_mul(const Vec3& p, const Vec3& q);

/// Model curve gamma(theta) = (cos theta, sin theta, 1)/sqrt(2).
Vec3 gamma_curve(double theta);

/// Moving frame (gamma, sqrt(2) gamma', sqrt(2) gamma x gamma') at theta.
Frame gamma_frame(double theta);

/// Rotation by pi/4 in the (xi1, xi3) plane:
///   eta1 = (xi1 + xi3)/sqrt(2), eta2 = xi2, eta3 = (-xi1 + xi3)/sqrt(2).
/// Maps the cone {xi3^2 = xi1^2 + xi2^2} onto {eta2^2 = 2 eta1 eta3}.
Vec3 u_transform(const Vec3& xi);

/// Exact inverse of u_transform.
Vec3 u_star(const Vec3& eta);

/// The matrices behind u_transform / u_star.
const Mat3& u_matrix();
const Mat3& u_star_matrix();

/// Point of the horizontal line l(a,b,c) at parameter s: (b + s a, s, c + s b/2).
Vec3 ell_point(const HorizontalLineParam& line, double s);

/// Point of the dual line l*(x,y,t) at parameter lambda:
/// (lambda, x - lambda y, t - xy/2 + lambda y^2/2).
Vec3 ell_star_point(const DualLineParam& line, double lambda);

/// Euclidean distance from p to the (untruncated) line l(a,b,c),
/// by orthogonal rejection.
double distance_to_ell(const Vec3& p, const HorizontalLineParam& line);

/// Euclidean distance from p to the line l*(x,y,t).
double distance_to_ell_star(const Vec3& p, const DualLineParam& line);

/// Point/line duality predicate: true iff dist(p, l*(pstar)) <= tol.
/// By the duality principle this matches dist(pstar, l(p)) <= tol' for
/// matched tolerances, where p = (a,b,c) is read componentwise.
bool duality_holds(const Vec3& p, const Vec3& pstar, double tol);

/// Unit vector parallel to (a, 1, b/2).
Vec3 horizontal_direction(double a, double b);

/// F(x,y,z) = (x, y, 2z); maps horizontal lines onto SL2 lines.
Vec3 f_map(const Vec3& p);
/// F^{-1}(x,y,z) = (x, y, z/2).
Vec3 f_inv(const Vec3& p);

/// SL2 parametrization {(a,b,0) + lambda (c,d,1)} recovered from two points
/// of a line. Returns nullopt when the direction has (numerically) no
/// z-component, i.e. the line belongs to the horizontal-plane family.
struct Sl2Coefficients {
    double a, b, c, d;
    double det() const { return a * d - b * c; }
};
std::optional<Sl2Coefficients> sl2_from_points(const Vec3& p, const Vec3& q);

/// Angular distance between unit directions (unoriented), in [0, pi/2].
double direction_angle(const Vec3& d1, const Vec3& d2);

/// Angular distance between the directions of l(U w1) and l(U w2), where the
/// (a,b,c) parameters are the u_transform images of the two points.
double dual_direction_gap(const Vec3& w1, const Vec3& w2);

} // namespace kakeya
