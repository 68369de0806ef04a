#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kakeya/types.hpp"

namespace kakeya {

/// Truncated horizontal-line tube: the set of points within some radius of
/// { (b + s a, s, c + s b/2) : s in [s0, s1] }.
struct ParamTube {
    double a = 0.0, b = 0.0, c = 0.0;
    double s0 = -1.0, s1 = 1.0;
};

/// Signed cell index packing shared by every grid in the project.
/// Cell (i,j,k) at size h covers [i h, (i+1) h) x ... with center (i+1/2) h.
std::uint64_t pack_cell(int i, int j, int k);
void unpack_cell(std::uint64_t key, int& i, int& j, int& k);
inline int cell_index(double x, double inv_cell) {
    return static_cast<int>(std::floor(x * inv_cell));
}

/// Occupied cells of a union of tubes (or any indicator set), with their
/// common cell size. Keys are emitted slab-major and are unique.
struct PackedIndicator {
    double cell = 0.0;
    std::vector<std::uint64_t> keys;
    double volume() const { return static_cast<double>(keys.size()) * cell * cell * cell; }
    Vec3 center_of(std::uint64_t key) const;
};

/// Number of cells of size `cell` whose centers lie within `radius` of at
/// least one tube segment. Streams y-slabs; memory is one 2D bitmap.
std::int64_t covered_cell_count(std::span<const ParamTube> tubes, double radius, double cell);

/// Lebesgue volume estimate for the union of radius-neighborhoods:
/// covered_cell_count * cell^3.
double covered_volume(std::span<const ParamTube> tubes, double radius, double cell);

/// Materializes the covered cells.
PackedIndicator rasterize_cover(std::span<const ParamTube> tubes, double radius, double cell);

/// Histogram of cover multiplicities: hist[k] = number of cells of size
/// `cell` covered by exactly k tubes, restricted to the closed ball
/// B(region_center, region_radius) (cell-center test). hist[0] is unused.
std::vector<std::int64_t> cover_histogram(std::span<const ParamTube> tubes, double radius,
                                          double cell, const Vec3& region_center,
                                          double region_radius);

/// Visits every cell whose center lies within `radius` of the tube segment,
/// once per cell.
void for_each_tube_cell(const ParamTube& tube, double radius, double cell,
                        const std::function<void(int, int, int)>& fn);

} // namespace kakeya
