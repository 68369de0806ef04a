#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "kakeya/grid.hpp"
#include "kakeya/types.hpp"

namespace kakeya {

/// Pushforward of a GridMeasure onto gamma(theta)^perp, binned on a square
/// grid in the frame coordinates (<x,u2>, <x,u3>). Binning moves each cell's
/// mass whole, so the total is conserved exactly.
struct PlaneDensity {
    double theta = 0.0;
    double cell = 0.0;
    std::unordered_map<std::uint64_t, double> bins; // packed (iu, iv, 0)
    double total() const;
};

/// Pushforward onto span(gamma(theta)), binned along <x, u1>.
struct LineDensity {
    double theta = 0.0;
    double cell = 0.0;
    std::unordered_map<std::int64_t, double> bins;
    double total() const;
};

/// Quadrature nodes and positive weights for an angular integral.
struct ThetaGrid {
    std::vector<double> samples;
    std::vector<double> weights;
};

/// Uniform Riemann rule on [0, 2pi) with n nodes (weights sum to 2pi).
ThetaGrid full_circle_grid(std::size_t n);
/// Uniform rule on [theta0 - halfwidth, theta0 + halfwidth] with n nodes.
ThetaGrid arc_grid(double theta0, double halfwidth, std::size_t n);
/// max(360, 4 delta^{-1/2}): resolves the delta^{1/2}-scale angular features.
std::size_t default_theta_samples(double delta);

/// Pre: cell >= mu.delta.
PlaneDensity push_plane(const GridMeasure& mu, double theta, double cell);
LineDensity push_line(const GridMeasure& mu, double theta, double cell);

/// sum over bins of area * (mass/area)^p (2D) or length * (mass/length)^p
/// (1D); equals the total mass at p = 1. Pre: p >= 1.
double lp_norm(const PlaneDensity& d, double p);
double lp_norm(const LineDensity& d, double p);

enum class ProjectionKind { plane, line };

/// Quadrature of theta -> lp_norm(push(mu, theta, cell), p) over the grid.
/// cell <= 0 selects mu.delta.
double averaged_norm(const GridMeasure& mu, double p, ProjectionKind kind, const ThetaGrid& grid,
                     double cell = 0.0);

} // namespace kakeya
