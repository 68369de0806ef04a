#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kakeya {

/// Thrown when a requested construction would exceed the configured cell
/// budget (see max_cells()) or a hard depth/scale limit.
class size_guard_error : public std::runtime_error {
public:
    explicit size_guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// Global cap on the number of cells any single grid construction may
/// allocate. Overridable through the KAKEYA_LAB_MAX_VOXELS environment
/// variable; the default leaves headroom on a 4 GB machine.
std::int64_t max_cells();

/// Throws size_guard_error if `requested` exceeds max_cells().
void guard_cells(std::int64_t requested, const std::string& context);

} // namespace kakeya
