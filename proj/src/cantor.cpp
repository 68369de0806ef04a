#include "kakeya/cantor.hpp"

#include <cmath>
#include <string>

#include "kakeya/errors.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

const Mat3& product_rotation() {
    static const Mat3 r = [] {
        const double s5 = std::sqrt(5.0);
        Mat3 m;
        m << 2.0 / s5, 1.0 / s5, 0.0,
             0.0,      0.0,      1.0,
             1.0 / s5, -2.0 / s5, 0.0;
        return m;
    }();
    return r;
}

BoxCloud rotated_product_boxes(int depth) {
    if (depth < 0 || depth > 8) {
        throw size_guard_error("rotated_product_boxes: depth must be in [0, 8], got " +
                               std::to_string(depth));
    }
    const IntervalSet cantor = cantor_intervals(depth);
    const std::int64_t per_axis = static_cast<std::int64_t>(cantor.intervals.size());
    const std::int64_t z_cells = 1ll << (2 * depth); // 4^depth
    guard_cells(per_axis * per_axis * z_cells, "rotated_product_boxes");

    BoxCloud cloud;
    cloud.depth = depth;
    cloud.rotation = product_rotation();
    cloud.boxes.reserve(static_cast<std::size_t>(per_axis * per_axis * z_cells));
    const double len = cantor.scale(); // 4^-depth
    const double h = 0.5 * len;
    for (const auto& [xlo, xhi] : cantor.intervals) {
        const double xc = (static_cast<double>(xlo) + 0.5) * len;
        for (const auto& [ylo, yhi] : cantor.intervals) {
            const double yc = (static_cast<double>(ylo) + 0.5) * len;
            for (std::int64_t z = 0; z < z_cells; ++z) {
                const double zc = (static_cast<double>(z) + 0.5) * len;
                cloud.boxes.push_back({Vec3{xc, yc, zc}, Vec3{h, h, h}});
            }
        }
    }
    return cloud;
}

Segment3 BesicovitchSegment::endpoints() const {
    const HorizontalLineParam line{a, b, c};
    return {ell_point(line, -s_max), ell_point(line, s_max)};
}

SegmentCloud besicovitch_segments(const BoxCloud& cloud) {
    SegmentCloud out;
    out.depth = cloud.depth;
    out.segments.reserve(cloud.boxes.size());
    for (std::size_t i = 0; i < cloud.boxes.size(); ++i) {
        const Vec3 p = cloud.param(i);
        BesicovitchSegment seg;
        seg.a = p.x();
        seg.b = p.y();
        seg.c = p.z();
        seg.s_max = 1.0 / std::sqrt(4.0 + 4.0 * seg.a * seg.a + seg.b * seg.b);
        out.segments.push_back(seg);
    }
    return out;
}

void require_dyadic_scale(double delta, const char* context) {
    int exp = 0;
    const double mant = std::frexp(delta, &exp);
    if (mant != 0.5 || delta > 1.0 || delta < std::ldexp(1.0, -12)) {
        throw size_guard_error(std::string(context) +
                               ": delta must be a power of two in [2^-12, 1], got " +
                               std::to_string(delta));
    }
}

namespace {
std::vector<ParamTube> as_tubes(const SegmentCloud& cloud) {
    std::vector<ParamTube> tubes;
    tubes.reserve(cloud.segments.size());
    for (const auto& s : cloud.segments) tubes.push_back(s.tube());
    return tubes;
}
} // namespace

double neighborhood_volume(const SegmentCloud& cloud, double delta) {
    require_dyadic_scale(delta, "neighborhood_volume");
    const auto tubes = as_tubes(cloud);
    return covered_volume(tubes, delta, 0.5 * delta);
}

PackedIndicator rasterize_neighborhood(const SegmentCloud& cloud, double delta, double cell) {
    require_dyadic_scale(delta, "rasterize_neighborhood");
    const auto tubes = as_tubes(cloud);
    return rasterize_cover(tubes, delta, cell);
}

double direction_coverage_ratio(int depth) {
    // a = (2x + y)/sqrt(5) over depth-n Cantor pairs, b = z over 4^n cells:
    // the b factor tiles [0,1] exactly, so coverage reduces to the sumset.
    return sumset_covered_fraction(depth);
}

} // namespace kakeya
