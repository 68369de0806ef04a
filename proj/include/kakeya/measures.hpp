#pragma once

#include <numbers>

#include "kakeya/grid.hpp"
#include "kakeya/types.hpp"

namespace kakeya {

/// Which frame axis carries the unit extent of the plank.
///   plane_knapp: 1 x delta^{1/2} x delta along (u1, u2, u3), the example
///                driving the plane-projection bounds.
///   line_knapp:  delta x delta^{1/2} x 1, the transposed plank whose
///                rho-projections concentrate on ~delta intervals.
enum class PlankOrientation { plane_knapp, line_knapp };

struct PlankSpec {
    double theta0 = std::numbers::pi / 2;
    double delta = 1.0 / 64;
    double c = 0.25;      // support half-width coefficient, in (0, 1/2]
    double spread = 0.5;  // translate-count coefficient for train tracks
    PlankOrientation orientation = PlankOrientation::plane_knapp;
};

/// Unit-mass uniform measure on the frame-aligned box with half-widths
/// (c, c delta^{1/2}, c delta) along (u1, u2, u3) at theta0 (plane_knapp),
/// rasterized at cell size delta. Guard: delta in [2^-12, 1/4].
GridMeasure plank_measure(const PlankSpec& spec);

struct TrackCounts {
    long m_half = 0; // translates in the short direction: m in [-m_half, m_half]
    long n_half = 0; // translates in the medium direction
    long planks() const { return (2 * m_half + 1) * (2 * n_half + 1); }
    double u3_spacing = 0.0;
    double u2_spacing = 0.0;
};
TrackCounts train_track_counts(const PlankSpec& spec, double alpha);

/// Sum of plank translates spaced delta^{alpha/2-1/2} along u3 and
/// delta^{alpha/2-1} along u2, counts spread * delta^{1/2-alpha/2} and
/// spread * delta^{1-alpha/2}. Each plank has mass 1. At alpha = 2 the
/// medium direction degenerates to n = 0: a single train track.
/// Pre: 2 <= alpha <= 3.
GridMeasure train_track_measure(const PlankSpec& spec, double alpha);

struct FrostmanReport {
    double alpha = 0.0;
    double value = 0.0;
    Vec3 argmax_center = Vec3::Zero();
    double argmax_radius = 0.0;
};

/// Approximate Frostman constant sup mu(B(x,r))/r^alpha over dyadic radii
/// r in {delta, 2 delta, ..., 4}. Ball masses are evaluated as 3x3x3 block
/// sums on the dyadic coarsening pyramid, so the reported value brackets the
/// true sup within [2^-alpha, (3 sqrt(3)/2)^alpha]. Pre: alpha in (0, 3];
/// throws on an empty measure.
FrostmanReport frostman(const GridMeasure& mu, double alpha);

/// Riesz alpha-energy with the diagonal regularized at distance delta:
/// sum_ij m_i m_j / max(|x_i - x_j|, delta)^alpha. Guard: <= 1e5 cells.
double riesz_energy(const GridMeasure& mu, double alpha);

} // namespace kakeya
