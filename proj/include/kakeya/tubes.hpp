#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kakeya/cantor.hpp"
#include "kakeya/grid.hpp"
#include "kakeya/raster.hpp"
#include "kakeya/types.hpp"

namespace kakeya {

/// Radius-delta tube around the truncated horizontal line
/// { ell_point(line, s) : s in [s0, s1] }.
struct Tube {
    HorizontalLineParam line;
    double s0 = -1.0;
    double s1 = 1.0;
    double radius = 0.0;
    ParamTube param() const { return {line.a, line.b, line.c, s0, s1}; }
    Vec3 midpoint() const;
    double arc_length() const; // (s1 - s0) * |(a, 1, b/2)|
};

struct TubeFamily {
    std::vector<Tube> tubes;
    double delta = 0.0;
    double inflation = 4.0; // the C in the ball -> dual-tube calibration
    std::optional<std::vector<Vec3>> source_balls; // centers; radius = delta
};

/// One tube per ball center w: line parameters (a,b,c) = u_transform(w),
/// radius delta, s in [-1, 1].
TubeFamily tubes_from_balls(const std::vector<Vec3>& centers, double delta,
                            double inflation = 4.0);

/// Occupied cell centers, sorted by key (deterministic ball family).
std::vector<Vec3> occupied_centers(const GridMeasure& mu);

/// Per-cell overlap counts sum chi_T at cell size delta/2 (cell centers
/// within radius of a tube segment count once per tube).
struct CountGrid {
    double cell = 0.0;
    std::unordered_map<std::uint64_t, std::uint32_t> counts;
};
CountGrid rasterize_counts(const TubeFamily& family);

struct BallRegion {
    Vec3 center = Vec3::Zero();
    double radius = 2.0;
};

/// sum over cells with center in the region of cell_volume * count^p.
double lp_of_counts(const CountGrid& grid, double p, const BallRegion& region);

/// Same quantity computed slab by slab without materializing the grid.
double lp_of_counts_streamed(const TubeFamily& family, double p, const BallRegion& region);

/// Minimum dual_direction_gap over source-ball pairs at distance >=
/// separation (default 100 delta when separation <= 0). Throws
/// std::invalid_argument without source balls or with < 2 qualifying pairs.
double min_direction_gap(const TubeFamily& family, double separation = 0.0);

/// Containment count against the two-dimensional ball condition: the largest
/// number of member tubes contained in a single tube of radius r whose length
/// keeps the 2:1 ratio to the member length. Candidate axes are all
/// member axes plus lines through endpoint pairs of distinct members
/// (deterministically strided down to candidate_budget), so the result is a
/// lower bound for the true maximum.
struct WolffResult {
    std::int64_t max_count = 0;
    double bound = 0.0; // (r/delta)^2
};
WolffResult wolff_check(const TubeFamily& family, double r, std::size_t candidate_budget = 250000);

/// Greedily thins segment directions to angular separation >= delta (grid
/// hash + neighbor check), then wraps each retained segment in a radius-delta
/// tube; every tube lies inside N_{2 delta}(K) by construction.
TubeFamily besicovitch_tubes(const SegmentCloud& cloud, double delta);

/// Density input for the maximal function: sorted occupied cells with either
/// per-cell masses or one uniform mass (indicator sets).
struct PackedCells {
    double cell = 0.0;
    std::vector<std::uint64_t> keys;
    std::vector<double> mass;   // empty => uniform_mass everywhere
    double uniform_mass = 0.0;
    static PackedCells from_measure(const GridMeasure& mu);
    static PackedCells from_indicator(const PackedIndicator& ind);
    double mass_at(std::size_t idx) const { return mass.empty() ? uniform_mass : mass[idx]; }
    double total() const;
};

struct MaximalConfig {
    double c_lo = -4.0, c_hi = 4.0;
    double s0_lo = -4.0, s0_hi = 4.0;
    double step_mult = 1.0; // lattice step = step_mult * delta
};

struct MaximalResult {
    double value = 0.0;
    double best_c = 0.0;
    double best_s0 = 0.0;
};

/// Discretized SL2/horizontal Kakeya maximal function at direction e:
/// solves e ~ (a, 1, b/2) (after flipping e into the y > 0 hemisphere), then
/// maximizes the tube average (1/m(T)) int_T f over center offsets c and
/// segment anchors s0 on the configured lattice, for radius-delta tubes
/// around { ell_point((a,b,c), s) : s in [s0 - 1, s0 + 1] }.
/// Throws std::domain_error for directions within 0.01 of (0,0,+-1) and for
/// directions with no horizontal parametrization (e_y ~ 0).
MaximalResult sl2_maximal(const PackedCells& f, const Vec3& e, double delta,
                          const MaximalConfig& config = {});

} // namespace kakeya
