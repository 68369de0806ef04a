#include "kakeya/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kakeya/errors.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

namespace {

Vec3 plank_half_widths(const PlankSpec& spec) {
    const double root = std::sqrt(spec.delta);
    if (spec.orientation == PlankOrientation::plane_knapp) {
        return {spec.c, spec.c * root, spec.c * spec.delta};
    }
    return {spec.c * spec.delta, spec.c * root, spec.c};
}

void validate(const PlankSpec& spec) {
    if (!(spec.c > 0.0 && spec.c <= 0.5)) {
        throw std::invalid_argument("PlankSpec: c must be in (0, 1/2]");
    }
    if (!(spec.delta > 0.0 && spec.delta <= 0.25)) {
        throw std::invalid_argument("PlankSpec: delta must be in (0, 1/4]");
    }
    if (spec.delta < std::ldexp(1.0, -12)) {
        throw size_guard_error("PlankSpec: delta below the 2^-12 cell floor");
    }
}

/// Deposits one plank of the given total mass, translated by offset.
/// Samples a deterministic stratified lattice in frame coordinates, two
/// strata per cell pitch along each axis, so binning at cell size delta
/// transfers mass exactly.
void deposit_plank(GridMeasure& mu, const Frame& frame, const Vec3& half, const Vec3& offset,
                   double total_mass) {
    long n[3];
    for (int axis = 0; axis < 3; ++axis) {
        n[axis] = std::max<long>(2, 2 * static_cast<long>(std::ceil(2.0 * half[axis] / mu.delta)));
    }
    guard_cells(static_cast<std::int64_t>(n[0]) * n[1] * n[2], "deposit_plank samples");
    const double sample_mass = total_mass / (static_cast<double>(n[0]) * n[1] * n[2]);
    for (long i = 0; i < n[0]; ++i) {
        const double y1 = -half.x() + (2 * i + 1) * half.x() / n[0];
        for (long j = 0; j < n[1]; ++j) {
            const double y2 = -half.y() + (2 * j + 1) * half.y() / n[1];
            const Vec3 partial = offset + y1 * frame.u1 + y2 * frame.u2;
            for (long k = 0; k < n[2]; ++k) {
                const double y3 = -half.z() + (2 * k + 1) * half.z() / n[2];
                mu.add(partial + y3 * frame.u3, sample_mass);
            }
        }
    }
}

} // namespace

GridMeasure plank_measure(const PlankSpec& spec) {
    validate(spec);
    GridMeasure mu;
    mu.delta = spec.delta;
    deposit_plank(mu, gamma_frame(spec.theta0), plank_half_widths(spec), Vec3::Zero(), 1.0);
    return mu;
}

TrackCounts train_track_counts(const PlankSpec& spec, double alpha) {
    TrackCounts counts;
    counts.u3_spacing = std::pow(spec.delta, 0.5 * alpha - 0.5);
    counts.u2_spacing = std::pow(spec.delta, 0.5 * alpha - 1.0);
    counts.m_half = static_cast<long>(std::floor(spec.spread * std::pow(spec.delta, 0.5 - 0.5 * alpha)));
    counts.n_half = static_cast<long>(std::floor(spec.spread * std::pow(spec.delta, 1.0 - 0.5 * alpha)));
    return counts;
}

GridMeasure train_track_measure(const PlankSpec& spec, double alpha) {
    validate(spec);
    if (!(alpha >= 2.0 && alpha <= 3.0)) {
        throw std::invalid_argument("train_track_measure: alpha must be in [2, 3]");
    }
    const TrackCounts counts = train_track_counts(spec, alpha);
    const Frame frame = gamma_frame(spec.theta0);
    const Vec3 half = plank_half_widths(spec);
    GridMeasure mu;
    mu.delta = spec.delta;
    for (long m = -counts.m_half; m <= counts.m_half; ++m) {
        for (long n = -counts.n_half; n <= counts.n_half; ++n) {
            const Vec3 offset = (m * counts.u3_spacing) * frame.u3 + (n * counts.u2_spacing) * frame.u2;
            deposit_plank(mu, frame, half, offset, 1.0);
        }
    }
    return mu;
}

FrostmanReport frostman(const GridMeasure& mu, double alpha) {
    if (!(alpha > 0.0 && alpha <= 3.0)) {
        throw std::invalid_argument("frostman: alpha must be in (0, 3]");
    }
    if (mu.cells.empty()) throw std::invalid_argument("frostman: empty measure");

    FrostmanReport report;
    report.alpha = alpha;
    const int levels = std::max(0, static_cast<int>(std::lround(std::log2(4.0 / mu.delta))));

    std::unordered_map<std::uint64_t, double> level = mu.cells;
    double cell = mu.delta;
    for (int k = 0; k <= levels; ++k) {
        const double radius = cell;
        const double scale = std::pow(radius, -alpha);
        for (const auto& [key, mass] : level) {
            int i, j, kk;
            unpack_cell(key, i, j, kk);
            double block = 0.0;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    for (int dk = -1; dk <= 1; ++dk) {
                        const auto it = level.find(pack_cell(i + di, j + dj, kk + dk));
                        if (it != level.end()) block += it->second;
                    }
            const double value = block * scale;
            if (value > report.value) {
                report.value = value;
                report.argmax_center = Vec3{(i + 0.5) * cell, (j + 0.5) * cell, (kk + 0.5) * cell};
                report.argmax_radius = radius;
            }
        }
        if (k == levels) break;
        std::unordered_map<std::uint64_t, double> coarser;
        coarser.reserve(level.size() / 4 + 1);
        for (const auto& [key, mass] : level) {
            int i, j, kk;
            unpack_cell(key, i, j, kk);
            coarser[pack_cell(i >> 1, j >> 1, kk >> 1)] += mass;
        }
        level = std::move(coarser);
        cell *= 2.0;
    }
    return report;
}

double riesz_energy(const GridMeasure& mu, double alpha) {
    guard_cells(static_cast<std::int64_t>(mu.cells.size()), "riesz_energy");
    if (mu.cells.size() > 100000) {
        throw size_guard_error("riesz_energy: occupied cell count " +
                               std::to_string(mu.cells.size()) + " exceeds the 1e5 guard");
    }
    const auto cells = mu.sorted_cells();
    const double floor2 = mu.delta * mu.delta;
    const double exponent = -0.5 * alpha;
    double sum = 0.0, comp = 0.0;
    auto accumulate = [&](double term) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    for (std::size_t i = 0; i < cells.size(); ++i) {
        accumulate(cells[i].second * cells[i].second * std::pow(floor2, exponent));
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            const double d2 = std::max((cells[i].first - cells[j].first).squaredNorm(), floor2);
            accumulate(2.0 * cells[i].second * cells[j].second * std::pow(d2, exponent));
        }
    }
    return sum;
}

} // namespace kakeya
