#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kakeya/geometry.hpp"

using namespace kakeya;

namespace {
constexpr double kPi = std::numbers::pi;

std::mt19937_64 rng(20240817);

Vec3 random_vec(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return {dist(rng), dist(rng), dist(rng)};
}
} // namespace

TEST_CASE("heisenberg product: identity, inverse, hand value") {
    const Vec3 p{0.3, -1.2, 0.7};
    CHECK((heisenberg_mul(p, Vec3::Zero()) - p).norm() == 0.0);
    CHECK((heisenberg_mul(Vec3::Zero(), p) - p).norm() == 0.0);
    CHECK(heisenberg_mul(p, -p).norm() == 0.0);
    CHECK(heisenberg_mul(-p, p).norm() == 0.0);
    const Vec3 r = heisenberg_mul(Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CHECK(r.x() == 1.0);
    CHECK(r.y() == 1.0);
    CHECK(r.z() == 0.5);
}

TEST_CASE("heisenberg product is associative") {
    for (int i = 0; i < 10000; ++i) {
        const Vec3 a = random_vec(-2, 2), b = random_vec(-2, 2), c = random_vec(-2, 2);
        const Vec3 left = heisenberg_mul(heisenberg_mul(a, b), c);
        const Vec3 right = heisenberg_mul(a, heisenberg_mul(b, c));
        CHECK((left - right).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
}

TEST_CASE("gamma frame values and orthonormality") {
    const Frame f0 = gamma_frame(0.0);
    CHECK((f0.u1 - Vec3{1, 0, 1} / std::sqrt(2.0)).norm() <= 1e-15);
    const Frame fh = gamma_frame(kPi / 2);
    CHECK((fh.u2 - Vec3{-1, 0, 0}).norm() <= 1e-15);
    CHECK((fh.u3 - Vec3{0, -1, 1} / std::sqrt(2.0)).norm() <= 1e-15);

    std::uniform_real_distribution<double> dist(0.0, 2 * kPi);
    for (int i = 0; i < 1000; ++i) {
        const Frame f = gamma_frame(dist(rng));
        CHECK(std::abs(f.u1.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(f.u2.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(f.u3.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(f.u1.dot(f.u2)) <= 1e-12);
        CHECK(std::abs(f.u1.dot(f.u3)) <= 1e-12);
        CHECK(std::abs(f.u2.dot(f.u3)) <= 1e-12);
    }
}

TEST_CASE("frame matches the curve derivatives") {
    const double theta = 1.234;
    const double h = 1e-6;
    const Frame f = gamma_frame(theta);
    CHECK((f.u1 - gamma_curve(theta)).norm() <= 1e-15);
    const Vec3 deriv = (gamma_curve(theta + h) - gamma_curve(theta - h)) / (2 * h);
    CHECK((f.u2 - std::sqrt(2.0) * deriv).norm() <= 1e-8);
    const Vec3 cross = gamma_curve(theta).cross(deriv);
    CHECK((f.u3 - std::sqrt(2.0) * cross).norm() <= 1e-8);
}

TEST_CASE("u transform: inverse, orthogonality, cone mapping, hand value") {
    CHECK((u_transform(Vec3{0, 0, std::sqrt(2.0)}) - Vec3{1, 0, 1}).norm() <= 1e-15);
    const Mat3 utu = u_matrix().transpose() * u_matrix();
    CHECK((utu - Mat3::Identity()).lpNorm<Eigen::Infinity>() <= 1e-12);

    for (int i = 0; i < 1000; ++i) {
        const Vec3 v = random_vec(-2, 2);
        CHECK((u_star(u_transform(v)) - v).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
    std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
    std::uniform_real_distribution<double> radius(0.1, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double r = radius(rng), phi = angle(rng);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const Vec3 xi{r * std::cos(phi), r * std::sin(phi), sign * r};
        const Vec3 eta = u_transform(xi);
        CHECK(std::abs(eta.y() * eta.y() - 2.0 * eta.x() * eta.z()) <= 1e-9);
    }
    // gamma lies on the cone and maps into the rotated cone.
    for (int i = 0; i < 100; ++i) {
        const Vec3 eta = u_transform(gamma_curve(angle(rng)));
        CHECK(std::abs(eta.y() * eta.y() - 2.0 * eta.x() * eta.z()) <= 1e-12);
    }
}

TEST_CASE("ell and ell_star point formulas") {
    CHECK((ell_point({1, 2, 3}, 0.0) - Vec3{2, 0, 3}).norm() == 0.0);
    CHECK((ell_point({0, 0, 0}, 1.0) - Vec3{0, 1, 0}).norm() == 0.0);
    CHECK((ell_point({1, 2, 3}, 2.0) - Vec3{4, 2, 5}).norm() == 0.0);

    CHECK((ell_star_point({0, 0, 0}, 1.0) - Vec3{1, 0, 0}).norm() == 0.0);
    CHECK((ell_star_point({0.4, -0.7, 0.2}, 0.0) - Vec3{0, 0.4, 0.2 + 0.5 * 0.4 * 0.7}).norm() <=
          1e-15);
    CHECK((ell_star_point({1, 1, 1}, 2.0) - Vec3{2, -1, 1.5}).norm() <= 1e-15);
}

TEST_CASE("duality: hand example and membership by construction") {
    CHECK(duality_holds(Vec3{1, 0, 0}, Vec3{0, 0, 0}, 1e-12));
    CHECK(distance_to_ell(Vec3{0, 0, 0}, {1, 0, 0}) <= 1e-12); // p* on l(p)

    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 pstar = random_vec(-2, 2);
        const Vec3 p = ell_star_point({pstar.x(), pstar.y(), pstar.z()}, box(rng));
        CHECK(duality_holds(p, pstar, 1e-9));
        CHECK(distance_to_ell(pstar, {p.x(), p.y(), p.z()}) <= 1e-9);
    }
}

TEST_CASE("duality fuzz: the two memberships agree") {
    // Random pairs plus on-line constructions, both distances computed
    // independently through the two parametrizations.
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    int on_line_checked = 0;
    for (int i = 0; i < 100000; ++i) {
        Vec3 p, pstar;
        if (i % 2 == 0) {
            pstar = random_vec(-2, 2);
            p = random_vec(-2, 2);
        } else {
            pstar = random_vec(-2, 2);
            p = ell_star_point({pstar.x(), pstar.y(), pstar.z()}, box(rng));
            ++on_line_checked;
        }
        const double d_star = distance_to_ell_star(p, {pstar.x(), pstar.y(), pstar.z()});
        const double d_line = distance_to_ell(pstar, {p.x(), p.y(), p.z()});
        CHECK((d_star <= 1e-9) == (d_line <= 1e-9));
    }
    CHECK(on_line_checked > 0);
}

TEST_CASE("horizontal direction") {
    CHECK((horizontal_direction(0, 0) - Vec3{0, 1, 0}).norm() == 0.0);
    CHECK((horizontal_direction(1, 0) - Vec3{1, 1, 0} / std::sqrt(2.0)).norm() <= 1e-15);
    CHECK((horizontal_direction(0, 2) - Vec3{0, 1, 1} / std::sqrt(2.0)).norm() <= 1e-15);
}

TEST_CASE("F map and SL2 recovery") {
    CHECK((f_map(Vec3{1, 1, 1}) - Vec3{1, 1, 2}).norm() == 0.0);
    for (int i = 0; i < 100; ++i) {
        const Vec3 v = random_vec(-2, 2);
        CHECK((f_inv(f_map(v)) - v).norm() == 0.0);
    }
    // Horizontal lines with b != 0 map into the det-1 family.
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const HorizontalLineParam line{box(rng), box(rng), box(rng)};
        if (std::abs(line.b) < 0.05) continue;
        const Vec3 p = f_map(ell_point(line, box(rng)));
        const Vec3 q = f_map(ell_point(line, box(rng) + 3.0));
        const auto sl2 = sl2_from_points(p, q);
        REQUIRE(sl2.has_value());
        CHECK(std::abs(sl2->det() - 1.0) <= 1e-9);
    }
    // l(1,0,0) maps onto a horizontal-plane line through the z-axis.
    const Vec3 p = f_map(ell_point({1, 0, 0}, -0.3));
    const Vec3 q = f_map(ell_point({1, 0, 0}, 0.8));
    CHECK(!sl2_from_points(p, q).has_value());
    CHECK(p.z() == 0.0);
    CHECK(q.z() == 0.0);
    // Passes through the z-axis: the origin lies on the image line.
    const Vec3 dir = (q - p).normalized();
    CHECK((p - p.dot(dir) * dir).norm() <= 1e-12);
}

TEST_CASE("dual direction gap") {
    const Vec3 w{0.1, 0.2, 0.3};
    CHECK(dual_direction_gap(w, w) == 0.0);

    // Translating a center along gamma(theta0) shifts (a, b) by
    // t (1/2, 1/sqrt(2)); compare against that closed form.
    const double t = 0.05;
    const Vec3 w2 = w + t * gamma_curve(kPi / 2);
    const Vec3 e1 = u_transform(w);
    const double gap = dual_direction_gap(w, w2);
    const Vec3 d1 = horizontal_direction(e1.x(), e1.y());
    const Vec3 d2 = horizontal_direction(e1.x() + 0.5 * t, e1.y() + t / std::sqrt(2.0));
    CHECK(gap == doctest::Approx(direction_angle(d1, d2)).epsilon(1e-9));
    CHECK(gap > 0.0);
}

TEST_CASE("direction angle is projective") {
    const Vec3 d = horizontal_direction(0.4, -1.1);
    CHECK(direction_angle(d, -d) <= 1e-12);
    CHECK(direction_angle(d, d) <= 1e-12);
}
