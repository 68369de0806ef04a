#pragma once

#include <string>

#include "kakeya/tubes.hpp"

namespace kakeya {

/// Versioned JSON: delta, inflation, tubes as (a, b, c, s0, s1, radius),
/// optional source ball centers.
void save_tube_family(const TubeFamily& family, const std::string& path);
TubeFamily load_tube_family(const std::string& path);

/// CountGrid on disk shares the grid-measure record format, with integer
/// masses; readable by load_grid_measure.
void save_count_grid(const CountGrid& grid, const std::string& path);
CountGrid load_count_grid(const std::string& path);

} // namespace kakeya
