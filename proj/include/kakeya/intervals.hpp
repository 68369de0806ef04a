#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace kakeya {

/// Disjoint closed dyadic intervals inside [0,1]. Endpoints are integer
/// multiples of 4^-depth, stored exactly in units of 4^-depth.
struct IntervalSet {
    int depth = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> intervals; // [lo, hi], sorted

    double scale() const;          // 4^-depth
    double total_length() const;   // exact: sum (hi - lo) * scale
};

/// Middle-half Cantor iteration: [a, a+L] -> [a, a+L/4] u [a+3L/4, a+L].
/// Depth n gives 2^n intervals of length 4^-n. Guard: 0 <= n <= 12.
IntervalSet cantor_intervals(int n);

/// Exact measure of { 2x + y : x in I, y in J } over all interval pairs of
/// cantor_intervals(n), as a fraction of |[0,3]| = 3. Guard: n <= 10.
double sumset_covered_fraction(int n);

/// True iff the union of 2I + J over interval pairs equals [0,3] exactly.
bool sumset_covers(int n);

} // namespace kakeya
