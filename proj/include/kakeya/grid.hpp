#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kakeya/raster.hpp"
#include "kakeya/types.hpp"

namespace kakeya {

/// Sparse nonnegative mass distribution on the cell grid of size delta,
/// supported inside [-2, 2]^3. Immutable once built, so reads are safe from
/// any number of workers.
struct GridMeasure {
    double delta = 0.0;
    std::unordered_map<std::uint64_t, double> cells; // pack_cell(i,j,k) -> mass

    Vec3 center_of(std::uint64_t key) const;
    /// Adds mass to the cell containing x. Throws std::domain_error outside
    /// [-2,2]^3 and std::invalid_argument for negative mass.
    void add(const Vec3& x, double mass);

    /// Compensated sum of all masses.
    double total_mass() const;

    /// Mass inside an axis-aligned closed box (cell-center membership).
    double mass_in_box(const Vec3& lo, const Vec3& hi) const;

    std::array<Vec3, 2> bounding_box() const; // of occupied cell centers

    /// Occupied cell (center, mass) pairs sorted by key; deterministic.
    std::vector<std::pair<Vec3, double>> sorted_cells() const;
};

/// Uniform unit-mass measure on the ball B(center, radius), rasterized at
/// cell size delta (test helper and CLI input).
GridMeasure ball_measure(const Vec3& center, double radius, double delta);

/// Versioned on-disk format: a one-line JSON header followed by one
/// "i j k mass" record per occupied cell.
void save_grid_measure(const GridMeasure& mu, const std::string& path);
GridMeasure load_grid_measure(const std::string& path);

} // namespace kakeya
