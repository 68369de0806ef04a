#pragma once

#include <cstdint>
#include <vector>

#include "kakeya/intervals.hpp"
#include "kakeya/raster.hpp"
#include "kakeya/types.hpp"

namespace kakeya {

/// Axis-aligned box, given by center and half-widths.
struct AxisBox {
    Vec3 center = Vec3::Zero();
    Vec3 half = Vec3::Zero();
};

/// The set A at depth n: boxes of C_n x C_n x [0,1] (the [0,1] factor split
/// into 4^n cells so boxes are near-cubes of size ~4^-n), composed with the
/// fixed rotation taking span{(2,1,0)/sqrt(5), (0,0,1)} to the (x,y)-plane.
struct BoxCloud {
    int depth = 0;
    std::vector<AxisBox> boxes; // pre-rotation, inside [0,1]^3
    Mat3 rotation = Mat3::Identity();

    /// Rotated center of box idx; read as line parameters (a, b, c).
    Vec3 param(std::size_t idx) const { return rotation * boxes[idx].center; }
};

/// Rows (2,1,0)/sqrt(5), (0,0,1), (1,-2,0)/sqrt(5).
const Mat3& product_rotation();

/// Guard: depth <= 8 and 16^depth within the cell budget.
BoxCloud rotated_product_boxes(int depth);

/// One unit segment per box: { (a s + b, s, c + b s / 2) : |s| <= s_max }
/// with (a,b,c) the rotated box center and s_max = 1/sqrt(4 + 4a^2 + b^2).
struct BesicovitchSegment {
    double a = 0.0, b = 0.0, c = 0.0;
    double s_max = 0.5;
    Segment3 endpoints() const;
    ParamTube tube() const { return {a, b, c, -s_max, s_max}; }
};

struct SegmentCloud {
    int depth = 0;
    std::vector<BesicovitchSegment> segments;
};

SegmentCloud besicovitch_segments(const BoxCloud& cloud);

/// Volume of the union of delta-neighborhoods of the segments, by cell-center
/// rasterization at cell size delta/2. Overestimates the true volume by at
/// most the boundary-layer factor (1 + sqrt(3)/4)^3 < 8.
/// Guard: delta a power of two with delta >= 2^-12.
double neighborhood_volume(const SegmentCloud& cloud, double delta);

/// Occupied cells of the indicator of N_delta(K) at the given cell size.
PackedIndicator rasterize_neighborhood(const SegmentCloud& cloud, double delta, double cell);

/// Fraction of the direction-parameter rectangle [0, 3/sqrt(5)] x [0, 1]
/// covered by the (a, b) values of depth-n segments at resolution 4^-n,
/// computed exactly from the sumset interval arithmetic. Equals 1 at every
/// depth; the rectangle contains a fixed disc of directions.
double direction_coverage_ratio(int depth);

/// Validates that delta is 2^-k with k in [0, 12].
void require_dyadic_scale(double delta, const char* context);

} // namespace kakeya
