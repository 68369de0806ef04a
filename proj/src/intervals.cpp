#include "kakeya/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "kakeya/errors.hpp"

namespace kakeya {

double IntervalSet::scale() const { return std::ldexp(1.0, -2 * depth); }

double IntervalSet::total_length() const {
    std::int64_t units = 0;
    for (const auto& [lo, hi] : intervals) units += hi - lo;
    return static_cast<double>(units) * scale();
}

IntervalSet cantor_intervals(int n) {
    if (n < 0 || n > 12) {
        throw size_guard_error("cantor_intervals: depth must be in [0, 12], got " +
                               std::to_string(n));
    }
    IntervalSet set;
    set.depth = 0;
    set.intervals = {{0, 1}};
    for (int step = 0; step < n; ++step) {
        IntervalSet next;
        next.depth = set.depth + 1;
        next.intervals.reserve(2 * set.intervals.size());
        for (const auto& [lo, hi] : set.intervals) {
            // Rescale to the finer grid; each parent has unit length there x4.
            const std::int64_t l = 4 * lo;
            const std::int64_t h = 4 * hi;
            next.intervals.emplace_back(l, l + 1);
            next.intervals.emplace_back(h - 1, h);
        }
        set = std::move(next);
    }
    return set;
}

double sumset_covered_fraction(int n) {
    if (n > 10) {
        throw size_guard_error("sumset_covered_fraction: depth must be <= 10, got " +
                               std::to_string(n));
    }
    const IntervalSet set = cantor_intervals(n);
    // 2I + J = [2 lo_I + lo_J, 2 lo_I + lo_J + 3] in units of 4^-n.
    std::vector<std::int64_t> starts;
    starts.reserve(set.intervals.size() * set.intervals.size());
    for (const auto& [loI, hiI] : set.intervals) {
        for (const auto& [loJ, hiJ] : set.intervals) {
            (void)hiI;
            (void)hiJ;
            starts.push_back(2 * loI + loJ);
        }
    }
    std::sort(starts.begin(), starts.end());
    std::int64_t covered = 0;
    std::int64_t cur_lo = 0, cur_hi = -1;
    for (const std::int64_t s : starts) {
        if (cur_hi < cur_lo) {
            cur_lo = s;
            cur_hi = s + 3;
        } else if (s <= cur_hi) {
            cur_hi = std::max(cur_hi, s + 3);
        } else {
            covered += cur_hi - cur_lo;
            cur_lo = s;
            cur_hi = s + 3;
        }
    }
    if (cur_hi >= cur_lo) covered += cur_hi - cur_lo;
    const std::int64_t full = 3ll << (2 * n); // 3 * 4^n
    return static_cast<double>(covered) / static_cast<double>(full);
}

bool sumset_covers(int n) { return sumset_covered_fraction(n) == 1.0; }

} // namespace kakeya
