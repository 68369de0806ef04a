#include "kakeya/errors.hpp"

#include <cstdlib>

namespace kakeya {

std::int64_t max_cells() {
    static const std::int64_t cap = [] {
        if (const char* env = std::getenv("KAKEYA_LAB_MAX_VOXELS")) {
            const long long v = std::atoll(env);
            if (v > 0) return static_cast<std::int64_t>(v);
        }
        return static_cast<std::int64_t>(300'000'000);
    }();
    return cap;
}

void guard_cells(std::int64_t requested, const std::string& context) {
    if (requested > max_cells()) {
        throw size_guard_error(context + ": requested " + std::to_string(requested) +
                               " cells, cap is " + std::to_string(max_cells()) +
                               " (set KAKEYA_LAB_MAX_VOXELS to raise)");
    }
}

} // namespace kakeya
