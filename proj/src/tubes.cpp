#include "kakeya/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kakeya/errors.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

Vec3 Tube::midpoint() const { return ell_point(line, 0.5 * (s0 + s1)); }

double Tube::arc_length() const {
    return (s1 - s0) * Vec3{line.a, 1.0, 0.5 * line.b}.norm();
}

TubeFamily tubes_from_balls(const std::vector<Vec3>& centers, double delta, double inflation) {
    TubeFamily family;
    family.delta = delta;
    family.inflation = inflation;
    family.tubes.reserve(centers.size());
    for (const Vec3& w : centers) {
        const Vec3 p = u_transform(w);
        family.tubes.push_back(Tube{HorizontalLineParam{p.x(), p.y(), p.z()}, -1.0, 1.0, delta});
    }
    family.source_balls = centers;
    return family;
}

std::vector<Vec3> occupied_centers(const GridMeasure& mu) {
    std::vector<std::uint64_t> keys;
    keys.reserve(mu.cells.size());
    for (const auto& [key, mass] : mu.cells) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    std::vector<Vec3> centers;
    centers.reserve(keys.size());
    for (const auto key : keys) centers.push_back(mu.center_of(key));
    return centers;
}

CountGrid rasterize_counts(const TubeFamily& family) {
    CountGrid grid;
    grid.cell = 0.5 * family.delta;
    // Rough per-tube cell count guard before materializing.
    double per_tube = 0.0;
    for (const Tube& t : family.tubes) {
        per_tube += (t.arc_length() + 2 * t.radius) * std::numbers::pi *
                    std::pow((t.radius + grid.cell) / grid.cell, 2.0) / grid.cell;
    }
    guard_cells(static_cast<std::int64_t>(per_tube), "rasterize_counts");
    for (const Tube& t : family.tubes) {
        for_each_tube_cell(t.param(), t.radius, grid.cell,
                           [&](int i, int j, int k) { ++grid.counts[pack_cell(i, j, k)]; });
    }
    return grid;
}

double lp_of_counts(const CountGrid& grid, double p, const BallRegion& region) {
    const double vol = grid.cell * grid.cell * grid.cell;
    const double r2 = region.radius * region.radius;
    double sum = 0.0, comp = 0.0;
    for (const auto& [key, count] : grid.counts) {
        int i, j, k;
        unpack_cell(key, i, j, k);
        const Vec3 c{(i + 0.5) * grid.cell, (j + 0.5) * grid.cell, (k + 0.5) * grid.cell};
        if ((c - region.center).squaredNorm() > r2) continue;
        const double y = vol * std::pow(static_cast<double>(count), p) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double lp_of_counts_streamed(const TubeFamily& family, double p, const BallRegion& region) {
    std::vector<ParamTube> tubes;
    tubes.reserve(family.tubes.size());
    for (const Tube& t : family.tubes) tubes.push_back(t.param());
    const double cell = 0.5 * family.delta;
    const auto hist =
        cover_histogram(tubes, family.delta, cell, region.center, region.radius);
    const double vol = cell * cell * cell;
    double sum = 0.0;
    for (std::size_t count = 1; count < hist.size(); ++count) {
        if (hist[count] == 0) continue;
        sum += static_cast<double>(hist[count]) * vol * std::pow(static_cast<double>(count), p);
    }
    return sum;
}

double min_direction_gap(const TubeFamily& family, double separation) {
    if (!family.source_balls) {
        throw std::invalid_argument("min_direction_gap: family has no source balls");
    }
    const auto& balls = *family.source_balls;
    if (separation <= 0.0) separation = 100.0 * family.delta;
    const double sep2 = separation * separation;

    std::vector<Vec3> dirs;
    dirs.reserve(balls.size());
    for (const Vec3& w : balls) {
        const Vec3 p = u_transform(w);
        dirs.push_back(horizontal_direction(p.x(), p.y()));
    }
    double max_abs_dot = -1.0;
    std::size_t best_i = 0, best_j = 0;
    std::int64_t qualifying = 0;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            if ((balls[i] - balls[j]).squaredNorm() < sep2) continue;
            ++qualifying;
            const double dot = std::abs(dirs[i].dot(dirs[j]));
            if (dot > max_abs_dot) {
                max_abs_dot = dot;
                best_i = i;
                best_j = j;
            }
        }
    }
    if (qualifying < 1) {
        throw std::invalid_argument("min_direction_gap: fewer than 2 balls at the separation");
    }
    return dual_direction_gap(balls[best_i], balls[best_j]);
}

namespace {

struct MemberShadow {
    double h = 0.0;      // max radial endpoint distance to the candidate axis
    double lo = 0.0, hi = 0.0; // projection interval on the axis
};

std::int64_t best_window_count(std::vector<MemberShadow>& members, double h_cap, double window) {
    // Members with h <= h_cap whose projection interval fits in some
    // placement of a `window`-length segment on the axis.
    std::vector<std::pair<double, double>> spans; // (hi, lo)
    for (const MemberShadow& m : members) {
        if (m.h <= h_cap && m.hi - m.lo <= window) spans.emplace_back(m.hi, m.lo);
    }
    if (spans.empty()) return 0;
    double lo = spans.front().second, hi = spans.front().first;
    for (const auto& [h, l] : spans) {
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    if (hi - lo <= window) return static_cast<std::int64_t>(spans.size());
    // Sliding placement: anchor the window end at each interval's hi.
    std::sort(spans.begin(), spans.end());
    std::int64_t best = 0;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const double end = spans[i].first;
        std::int64_t count = 0;
        for (std::size_t j = 0; j < spans.size(); ++j) {
            if (spans[j].first <= end && spans[j].second >= end - window) ++count;
        }
        best = std::max(best, count);
    }
    return best;
}

} // namespace

WolffResult wolff_check(const TubeFamily& family, double r, std::size_t candidate_budget) {
    if (!(r >= family.delta && r <= 1.0)) {
        throw std::invalid_argument("wolff_check: r must lie in [delta, 1]");
    }
    const std::size_t n = family.tubes.size();
    WolffResult result;
    result.bound = (r / family.delta) * (r / family.delta);
    if (n == 0) return result;

    std::vector<Vec3> end_lo(n), end_hi(n);
    double max_arc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Tube& t = family.tubes[i];
        end_lo[i] = ell_point(t.line, t.s0);
        end_hi[i] = ell_point(t.line, t.s1);
        max_arc = std::max(max_arc, t.arc_length());
    }
    const double window = 2.0 * max_arc; // containing tube keeps the 2:1 length ratio
    const double h_cap = r - family.delta;

    std::vector<MemberShadow> shadows(n);
    auto evaluate_axis = [&](const Vec3& base, const Vec3& dir_unit) -> std::int64_t {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 v0 = end_lo[i] - base;
            const Vec3 v1 = end_hi[i] - base;
            const double p0 = v0.dot(dir_unit);
            const double p1 = v1.dot(dir_unit);
            const double d0 = (v0 - p0 * dir_unit).norm();
            const double d1 = (v1 - p1 * dir_unit).norm();
            shadows[i].h = std::max(d0, d1);
            shadows[i].lo = std::min(p0, p1);
            shadows[i].hi = std::max(p0, p1);
        }
        return best_window_count(shadows, h_cap, window);
    };

    std::int64_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 dir = (end_hi[i] - end_lo[i]).normalized();
        best = std::max(best, evaluate_axis(end_lo[i], dir));
    }
    const std::size_t total_pairs = n * (n - 1);
    const std::size_t stride = std::max<std::size_t>(1, total_pairs / std::max<std::size_t>(1, candidate_budget));
    std::size_t pair_idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if ((pair_idx++ % stride) != 0) continue;
            const Vec3 diff = end_hi[j] - end_lo[i];
            const double len = diff.norm();
            if (len < 1e-12) continue;
            best = std::max(best, evaluate_axis(end_lo[i], diff / len));
        }
    }
    result.max_count = best;
    return result;
}

TubeFamily besicovitch_tubes(const SegmentCloud& cloud, double delta) {
    // Direction thinning on the (a, b) parameter grid: one representative
    // per cell of size 8 delta, rejected if a kept neighbor is closer than
    // delta in angle. Grid-disjoint representatives are > delta apart by the
    // lower Jacobian bound of (a,b) -> direction on this parameter range.
    const double h = 8.0 * delta;
    const double inv_h = 1.0 / h;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> kept_by_cell;
    std::vector<std::size_t> kept;
    std::vector<Vec3> kept_dirs;
    for (std::size_t idx = 0; idx < cloud.segments.size(); ++idx) {
        const auto& seg = cloud.segments[idx];
        const int ia = cell_index(seg.a, inv_h);
        const int ib = cell_index(seg.b, inv_h);
        const Vec3 dir = horizontal_direction(seg.a, seg.b);
        if (!kept_by_cell[pack_cell(ia, ib, 0)].empty()) continue;
        bool rejected = false;
        for (int da = -1; da <= 1 && !rejected; ++da) {
            for (int db = -1; db <= 1 && !rejected; ++db) {
                const auto it = kept_by_cell.find(pack_cell(ia + da, ib + db, 0));
                if (it == kept_by_cell.end()) continue;
                for (const std::size_t other : it->second) {
                    if (direction_angle(dir, kept_dirs[other]) < delta) {
                        rejected = true;
                        break;
                    }
                }
            }
        }
        if (rejected) continue;
        kept_by_cell[pack_cell(ia, ib, 0)].push_back(kept.size());
        kept.push_back(idx);
        kept_dirs.push_back(dir);
    }

    TubeFamily family;
    family.delta = delta;
    family.tubes.reserve(kept.size());
    for (const std::size_t idx : kept) {
        const auto& seg = cloud.segments[idx];
        family.tubes.push_back(
            Tube{HorizontalLineParam{seg.a, seg.b, seg.c}, -seg.s_max, seg.s_max, delta});
    }
    return family;
}

PackedCells PackedCells::from_measure(const GridMeasure& mu) {
    PackedCells out;
    out.cell = mu.delta;
    std::vector<std::pair<std::uint64_t, double>> entries(mu.cells.begin(), mu.cells.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.keys.reserve(entries.size());
    out.mass.reserve(entries.size());
    for (const auto& [key, mass] : entries) {
        out.keys.push_back(key);
        out.mass.push_back(mass);
    }
    return out;
}

PackedCells PackedCells::from_indicator(const PackedIndicator& ind) {
    PackedCells out;
    out.cell = ind.cell;
    out.keys = ind.keys;
    out.uniform_mass = ind.cell * ind.cell * ind.cell;
    return out;
}

double PackedCells::total() const {
    if (mass.empty()) return uniform_mass * static_cast<double>(keys.size());
    double sum = 0.0, comp = 0.0;
    for (const double m : mass) {
        const double y = m - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

MaximalResult sl2_maximal(const PackedCells& f, const Vec3& e, double delta,
                          const MaximalConfig& config) {
    const double norm = e.norm();
    if (!(norm > 0.0)) throw std::domain_error("sl2_maximal: zero direction");
    if (std::hypot(e.x(), e.y()) < 0.01 * norm) {
        throw std::domain_error("sl2_maximal: direction within 0.01 of (0,0,+-1)");
    }
    Vec3 dir = e / norm;
    if (dir.y() < 0.0) dir = -dir;
    if (dir.y() < 1e-6) {
        throw std::domain_error(
            "sl2_maximal: direction has no horizontal-line parametrization (e_y ~ 0)");
    }
    if (!(config.step_mult > 0.0)) throw std::invalid_argument("sl2_maximal: bad step_mult");

    const double a = dir.x() / dir.y();
    const double b = 2.0 * dir.z() / dir.y();
    const double m2 = 1.0 + a * a + 0.25 * b * b;
    const double m = std::sqrt(m2);
    const Vec3 d{a, 1.0, 0.5 * b};
    const Vec3 dhat = d / m;
    const double tube_measure = std::numbers::pi * delta * delta * 2.0 * m;
    const double step = config.step_mult * delta;

    MaximalResult result;
    if (f.keys.empty()) return result;

    // Support window for c* = argmin_c dist(q, line_c) and for s*, both
    // linear in q: evaluate on the bounding box corners.
    const double A = 1.0 - dhat.z() * dhat.z();
    const double pad = delta / std::sqrt(A) + step;
    double cmin = std::numeric_limits<double>::max(), cmax = -cmin;
    double smin = 0.0, smax = 0.0;
    {
        Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
        Vec3 hi = -lo;
        for (const auto key : f.keys) {
            int i, j, k;
            unpack_cell(key, i, j, k);
            const Vec3 q{(i + 0.5) * f.cell, (j + 0.5) * f.cell, (k + 0.5) * f.cell};
            lo = lo.cwiseMin(q);
            hi = hi.cwiseMax(q);
        }
        double v0d_min = std::numeric_limits<double>::max(), v0d_max = -v0d_min;
        for (int corner = 0; corner < 8; ++corner) {
            const Vec3 q{(corner & 1) ? hi.x() : lo.x(), (corner & 2) ? hi.y() : lo.y(),
                         (corner & 4) ? hi.z() : lo.z()};
            const Vec3 v0 = q - Vec3{b, 0.0, 0.0};
            const double t1 = v0.dot(dhat);
            const double cstar = (v0.z() - t1 * dhat.z()) / A;
            cmin = std::min(cmin, cstar);
            cmax = std::max(cmax, cstar);
            v0d_min = std::min(v0d_min, v0.dot(d));
            v0d_max = std::max(v0d_max, v0.dot(d));
        }
        const double hb = 0.5 * b;
        const double chb_lo = std::min((cmin - pad) * hb, (cmax + pad) * hb);
        const double chb_hi = std::max((cmin - pad) * hb, (cmax + pad) * hb);
        smin = (v0d_min - chb_hi) / m2;
        smax = (v0d_max - chb_lo) / m2;
    }
    const long kc_lo = std::max(0L, static_cast<long>(std::floor((cmin - pad - config.c_lo) / step)));
    const long kc_hi = std::min(static_cast<long>(std::floor((config.c_hi - config.c_lo) / step)),
                                static_cast<long>(std::ceil((cmax + pad - config.c_lo) / step)));
    const long ks_lo =
        std::max(0L, static_cast<long>(std::floor((smin - 1.0 - pad - config.s0_lo) / step)));
    const long ks_hi = std::min(static_cast<long>(std::floor((config.s0_hi - config.s0_lo) / step)),
                                static_cast<long>(std::ceil((smax + 1.0 + pad - config.s0_lo) / step)));
    if (kc_lo > kc_hi || ks_lo > ks_hi) return result;
    const long nc = kc_hi - kc_lo + 1;
    const long ns = ks_hi - ks_lo + 2; // one slack slot for the difference array
    guard_cells(static_cast<std::int64_t>(nc) * ns, "sl2_maximal lattice");
    std::vector<double> diff(static_cast<std::size_t>(nc) * ns, 0.0);

    // Cells land in tube (c, s0) when their distance to line_c is <= delta
    // and the foot parameter falls in [s0 - 1, s0 + 1]; the spherical end
    // caps are ignored (undercounts the average by O(delta)).
    const double delta2 = delta * delta;
    for (std::size_t idx = 0; idx < f.keys.size(); ++idx) {
        int i, j, k;
        unpack_cell(f.keys[idx], i, j, k);
        const double qx = (i + 0.5) * f.cell;
        const double qy = (j + 0.5) * f.cell;
        const double qz = (k + 0.5) * f.cell;
        const double v0x = qx - b, v0y = qy, v0z = qz;
        const double t1 = v0x * dhat.x() + v0y * dhat.y() + v0z * dhat.z();
        const double B = v0z - t1 * dhat.z();
        const double C = v0x * v0x + v0y * v0y + v0z * v0z - t1 * t1;
        const double disc = B * B - A * (C - delta2);
        if (disc < 0.0) continue;
        const double root = std::sqrt(disc);
        const double c_lo_val = (B - root) / A;
        const double c_hi_val = (B + root) / A;
        long kc0 = static_cast<long>(std::ceil((c_lo_val - config.c_lo) / step));
        long kc1 = static_cast<long>(std::floor((c_hi_val - config.c_lo) / step));
        kc0 = std::max(kc0, kc_lo);
        kc1 = std::min(kc1, kc_hi);
        if (kc0 > kc1) continue;
        const double v0d = v0x * d.x() + v0y * d.y() + v0z * d.z();
        const double cell_mass = f.mass_at(idx);
        for (long kc = kc0; kc <= kc1; ++kc) {
            const double c = config.c_lo + kc * step;
            const double sstar = (v0d - c * 0.5 * b) / m2;
            long s0_first = static_cast<long>(std::ceil((sstar - 1.0 - config.s0_lo) / step));
            long s0_last = static_cast<long>(std::floor((sstar + 1.0 - config.s0_lo) / step));
            s0_first = std::max(s0_first, ks_lo);
            s0_last = std::min(s0_last, ks_hi);
            if (s0_first > s0_last) continue;
            double* row = diff.data() + static_cast<std::size_t>(kc - kc_lo) * ns;
            row[s0_first - ks_lo] += cell_mass;
            row[s0_last - ks_lo + 1] -= cell_mass;
        }
    }

    for (long rc = 0; rc < nc; ++rc) {
        double* row = diff.data() + static_cast<std::size_t>(rc) * ns;
        double acc = 0.0;
        for (long rs = 0; rs + 1 < ns; ++rs) {
            acc += row[rs];
            if (acc > result.value) {
                result.value = acc;
                result.best_c = config.c_lo + (rc + kc_lo) * step;
                result.best_s0 = config.s0_lo + (rs + ks_lo) * step;
            }
        }
    }
    result.value /= tube_measure;
    return result;
}

} // namespace kakeya
