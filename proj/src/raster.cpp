#include "kakeya/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "kakeya/errors.hpp"
#include "kakeya/parallel.hpp"

namespace kakeya {

namespace {
constexpr int kBias = 1 << 20;
}

std::uint64_t pack_cell(int i, int j, int k) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i + kBias)) << 42) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(j + kBias)) << 21) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(k + kBias));
}

void unpack_cell(std::uint64_t key, int& i, int& j, int& k) {
    i = static_cast<int>((key >> 42) & 0x1FFFFF) - kBias;
    j = static_cast<int>((key >> 21) & 0x1FFFFF) - kBias;
    k = static_cast<int>(key & 0x1FFFFF) - kBias;
}

Vec3 PackedIndicator::center_of(std::uint64_t key) const {
    int i, j, k;
    unpack_cell(key, i, j, k);
    return {(i + 0.5) * cell, (j + 0.5) * cell, (k + 0.5) * cell};
}

namespace {

struct TubeGeom {
    double a, b, c, s0, s1;
    double m2, m;       // m^2 = 1 + a^2 + b^2/4
    double alpha, beta; // a/m, (b/2)/m
    double u_half;      // radius * sqrt(1 + a^2), ellipse extent in x
    double t_half;      // radius * sqrt(1 + b^2/4), ellipse extent in z
    int j_lo, j_hi;     // slab index range
};

struct Run {
    int col;   // x cell index
    int k0, k1; // z cell index range, inclusive
};

struct SweepFrame {
    double radius = 0.0;
    double cell = 0.0;
    double inv_cell = 0.0;
    std::vector<TubeGeom> geoms;
    int i_min = 0, i_max = 0; // x cell window
    int k_min = 0, k_max = 0; // z cell window
    int j_min = 0, j_max = 0; // slab range
    std::int64_t cols = 0, rows = 0;
};

SweepFrame prepare(std::span<const ParamTube> tubes, double radius, double cell) {
    if (!(radius > 0.0) || !(cell > 0.0)) {
        throw std::invalid_argument("raster: radius and cell must be positive");
    }
    SweepFrame f;
    f.radius = radius;
    f.cell = cell;
    f.inv_cell = 1.0 / cell;
    f.geoms.reserve(tubes.size());
    double x_lo = std::numeric_limits<double>::max(), x_hi = -x_lo;
    double z_lo = x_lo, z_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const ParamTube& t : tubes) {
        TubeGeom g;
        g.a = t.a;
        g.b = t.b;
        g.c = t.c;
        g.s0 = t.s0;
        g.s1 = t.s1;
        g.m2 = 1.0 + t.a * t.a + 0.25 * t.b * t.b;
        g.m = std::sqrt(g.m2);
        g.alpha = t.a / g.m;
        g.beta = 0.5 * t.b / g.m;
        g.u_half = radius * std::sqrt(1.0 + t.a * t.a);
        g.t_half = radius * std::sqrt(1.0 + 0.25 * t.b * t.b);
        g.j_lo = static_cast<int>(std::ceil((t.s0 - radius) * f.inv_cell - 0.5));
        g.j_hi = static_cast<int>(std::floor((t.s1 + radius) * f.inv_cell - 0.5));
        f.geoms.push_back(g);
        // Conservative world bounds of the tube (segment box + radius + cap slack).
        const double pad_x = g.u_half + std::abs(t.a) * 2 * radius + radius;
        const double pad_z = g.t_half + 0.5 * std::abs(t.b) * 2 * radius + radius;
        for (double s : {t.s0, t.s1}) {
            const double px = t.b + s * t.a;
            const double pz = t.c + 0.5 * s * t.b;
            x_lo = std::min(x_lo, px - pad_x);
            x_hi = std::max(x_hi, px + pad_x);
            z_lo = std::min(z_lo, pz - pad_z);
            z_hi = std::max(z_hi, pz + pad_z);
        }
        y_lo = std::min(y_lo, t.s0 - radius);
        y_hi = std::max(y_hi, t.s1 + radius);
    }
    if (f.geoms.empty()) {
        f.cols = f.rows = 0;
        return f;
    }
    f.i_min = cell_index(x_lo, f.inv_cell);
    f.i_max = cell_index(x_hi, f.inv_cell) + 1;
    f.k_min = cell_index(z_lo, f.inv_cell);
    f.k_max = cell_index(z_hi, f.inv_cell) + 1;
    f.j_min = static_cast<int>(std::ceil(y_lo * f.inv_cell - 0.5));
    f.j_max = static_cast<int>(std::floor(y_hi * f.inv_cell - 0.5));
    f.cols = static_cast<std::int64_t>(f.i_max - f.i_min + 1);
    f.rows = static_cast<std::int64_t>(f.k_max - f.k_min + 1);
    guard_cells(f.cols * f.rows, "raster slab window");
    return f;
}

// Emits the covered z-runs of one tube in one slab. Interior slabs use the
// exact ellipse cross-section of the infinite line; slabs within 2*radius of
// an endpoint test cell centers against the exact point-segment distance.
template <typename Emit>
void tube_slab_runs(const TubeGeom& g, double y0, double radius, double cell, double inv_cell,
                    Emit&& emit) {
    const double cx = g.b + g.a * y0;
    const double cz = g.c + 0.5 * g.b * y0;
    const bool interior = (y0 >= g.s0 + 2 * radius) && (y0 <= g.s1 - 2 * radius);
    if (interior) {
        const double one_minus_b2 = 1.0 - g.beta * g.beta;
        const int i0 = static_cast<int>(std::ceil((cx - g.u_half) * inv_cell - 0.5));
        const int i1 = static_cast<int>(std::floor((cx + g.u_half) * inv_cell - 0.5));
        for (int i = i0; i <= i1; ++i) {
            const double u = (i + 0.5) * cell - cx;
            const double disc = one_minus_b2 * radius * radius - u * u / g.m2;
            if (disc < 0.0) continue;
            const double root = std::sqrt(disc);
            const double mid = g.alpha * g.beta * u;
            const double t_lo = (mid - root) / one_minus_b2;
            const double t_hi = (mid + root) / one_minus_b2;
            const int k0 = static_cast<int>(std::ceil((cz + t_lo) * inv_cell - 0.5));
            const int k1 = static_cast<int>(std::floor((cz + t_hi) * inv_cell - 0.5));
            if (k0 <= k1) emit(i, k0, k1);
        }
        return;
    }
    // End-cap band: exact distance to the truncated segment, cell by cell.
    const double pad_x = g.u_half + std::abs(g.a) * 2 * radius;
    const double pad_z = g.t_half + std::abs(g.b) * radius;
    const int i0 = static_cast<int>(std::ceil((cx - pad_x) * inv_cell - 0.5));
    const int i1 = static_cast<int>(std::floor((cx + pad_x) * inv_cell - 0.5));
    const int k0 = static_cast<int>(std::ceil((cz - pad_z) * inv_cell - 0.5));
    const int k1 = static_cast<int>(std::floor((cz + pad_z) * inv_cell - 0.5));
    const double r2 = radius * radius;
    for (int i = i0; i <= i1; ++i) {
        const double qx = (i + 0.5) * cell;
        bool in_run = false;
        int run_start = 0;
        int run_end = 0;
        for (int k = k0; k <= k1; ++k) {
            const double qz = (k + 0.5) * cell;
            const double u = qx - cx;
            const double t = qz - cz;
            double s = y0 + (u * g.a + 0.5 * t * g.b) / g.m2;
            s = std::clamp(s, g.s0, g.s1);
            const double dx = qx - (g.b + s * g.a);
            const double dy = y0 - s;
            const double dz = qz - (g.c + 0.5 * s * g.b);
            if (dx * dx + dy * dy + dz * dz <= r2) {
                if (!in_run) {
                    in_run = true;
                    run_start = k;
                }
                run_end = k;
            } else if (in_run) {
                emit(i, run_start, run_end);
                in_run = false;
            }
        }
        if (in_run) emit(i, run_start, run_end);
    }
}

/// Per-slab bitmap with dirty-column tracking, reused across slabs.
class SlabBitmap {
public:
    SlabBitmap(std::int64_t cols, std::int64_t rows)
        : rows_(rows), words_per_col_((rows + 63) / 64), bits_(cols * words_per_col_, 0),
          dirty_(cols, 0) {
        dirty_cols_.reserve(static_cast<std::size_t>(cols));
    }

    void set_run(std::int64_t col, std::int64_t k0, std::int64_t k1) {
        if (!dirty_[static_cast<std::size_t>(col)]) {
            dirty_[static_cast<std::size_t>(col)] = 1;
            dirty_cols_.push_back(col);
        }
        std::uint64_t* w = bits_.data() + col * words_per_col_;
        const std::int64_t w0 = k0 >> 6, w1 = k1 >> 6;
        if (w0 == w1) {
            w[w0] |= (~0ull >> (63 - (k1 - k0))) << (k0 & 63);
            return;
        }
        w[w0] |= ~0ull << (k0 & 63);
        for (std::int64_t wi = w0 + 1; wi < w1; ++wi) w[wi] = ~0ull;
        w[w1] |= ~0ull >> (63 - (k1 & 63));
    }

    /// Visits every set bit as (col, k), then clears the bitmap.
    template <typename Visit>
    void drain(Visit&& visit) {
        std::sort(dirty_cols_.begin(), dirty_cols_.end());
        for (const std::int64_t col : dirty_cols_) {
            std::uint64_t* w = bits_.data() + col * words_per_col_;
            for (std::int64_t wi = 0; wi < words_per_col_; ++wi) {
                std::uint64_t word = w[wi];
                if (!word) continue;
                w[wi] = 0;
                while (word) {
                    const int bit = std::countr_zero(word);
                    word &= word - 1;
                    visit(col, (wi << 6) + bit);
                }
            }
            dirty_[static_cast<std::size_t>(col)] = 0;
        }
        dirty_cols_.clear();
    }

    std::int64_t drain_count() {
        std::int64_t n = 0;
        for (const std::int64_t col : dirty_cols_) {
            std::uint64_t* w = bits_.data() + col * words_per_col_;
            for (std::int64_t wi = 0; wi < words_per_col_; ++wi) {
                n += std::popcount(w[wi]);
                w[wi] = 0;
            }
            dirty_[static_cast<std::size_t>(col)] = 0;
        }
        dirty_cols_.clear();
        return n;
    }

private:
    std::int64_t rows_;
    std::int64_t words_per_col_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint8_t> dirty_;
    std::vector<std::int64_t> dirty_cols_;
};

/// Fills one slab's runs for every tube crossing it.
template <typename Emit>
void fill_slab(const SweepFrame& f, int j, Emit&& emit) {
    const double y0 = (j + 0.5) * f.cell;
    for (const TubeGeom& g : f.geoms) {
        if (j < g.j_lo || j > g.j_hi) continue;
        tube_slab_runs(g, y0, f.radius, f.cell, f.inv_cell, [&](int i, int k0, int k1) {
            if (i < f.i_min || i > f.i_max) return;
            const int kk0 = std::max(k0, f.k_min) - f.k_min;
            const int kk1 = std::min(k1, f.k_max) - f.k_min;
            if (kk0 <= kk1) emit(i - f.i_min, kk0, kk1);
        });
    }
}

} // namespace

std::int64_t covered_cell_count(std::span<const ParamTube> tubes, double radius, double cell) {
    SweepFrame f = prepare(tubes, radius, cell);
    if (f.geoms.empty()) return 0;
    const std::int64_t slabs = f.j_max - f.j_min + 1;
    std::vector<std::int64_t> partial(worker_count(), 0);
    parallel_for(slabs, [&](std::int64_t begin, std::int64_t end, unsigned w) {
        SlabBitmap bitmap(f.cols, f.rows);
        std::int64_t local = 0;
        for (std::int64_t jj = begin; jj < end; ++jj) {
            fill_slab(f, f.j_min + static_cast<int>(jj),
                      [&](std::int64_t col, int k0, int k1) { bitmap.set_run(col, k0, k1); });
            local += bitmap.drain_count();
        }
        partial[w] = local;
    });
    std::int64_t total = 0;
    for (const std::int64_t p : partial) total += p;
    return total;
}

double covered_volume(std::span<const ParamTube> tubes, double radius, double cell) {
    return static_cast<double>(covered_cell_count(tubes, radius, cell)) * cell * cell * cell;
}

PackedIndicator rasterize_cover(std::span<const ParamTube> tubes, double radius, double cell) {
    SweepFrame f = prepare(tubes, radius, cell);
    PackedIndicator out;
    out.cell = cell;
    if (f.geoms.empty()) return out;
    const std::int64_t slabs = f.j_max - f.j_min + 1;
    std::vector<std::vector<std::uint64_t>> partial(worker_count());
    parallel_for(slabs, [&](std::int64_t begin, std::int64_t end, unsigned w) {
        SlabBitmap bitmap(f.cols, f.rows);
        std::vector<std::uint64_t>& keys = partial[w];
        for (std::int64_t jj = begin; jj < end; ++jj) {
            const int j = f.j_min + static_cast<int>(jj);
            fill_slab(f, j,
                      [&](std::int64_t col, int k0, int k1) { bitmap.set_run(col, k0, k1); });
            bitmap.drain([&](std::int64_t col, std::int64_t k) {
                keys.push_back(pack_cell(static_cast<int>(col) + f.i_min, j,
                                         static_cast<int>(k) + f.k_min));
            });
            guard_cells(static_cast<std::int64_t>(keys.size()), "rasterize_cover");
        }
    });
    std::int64_t total = 0;
    for (const auto& keys : partial) total += static_cast<std::int64_t>(keys.size());
    guard_cells(total, "rasterize_cover");
    out.keys.reserve(static_cast<std::size_t>(total));
    for (const auto& keys : partial) {
        out.keys.insert(out.keys.end(), keys.begin(), keys.end());
    }
    return out;
}

void for_each_tube_cell(const ParamTube& tube, double radius, double cell,
                        const std::function<void(int, int, int)>& fn) {
    SweepFrame f = prepare(std::span<const ParamTube>(&tube, 1), radius, cell);
    const TubeGeom& g = f.geoms.front();
    for (int j = g.j_lo; j <= g.j_hi; ++j) {
        const double y0 = (j + 0.5) * cell;
        tube_slab_runs(g, y0, radius, cell, f.inv_cell, [&](int i, int k0, int k1) {
            for (int k = k0; k <= k1; ++k) fn(i, j, k);
        });
    }
}

std::vector<std::int64_t> cover_histogram(std::span<const ParamTube> tubes, double radius,
                                          double cell, const Vec3& region_center,
                                          double region_radius) {
    SweepFrame f = prepare(tubes, radius, cell);
    std::vector<std::int64_t> hist(2, 0);
    if (f.geoms.empty()) return hist;
    const std::int64_t slabs = f.j_max - f.j_min + 1;
    const double rr = region_radius * region_radius;
    std::vector<std::vector<std::int64_t>> partial(worker_count());
    parallel_for(slabs, [&](std::int64_t begin, std::int64_t end, unsigned w) {
        std::vector<std::int64_t>& local = partial[w];
        local.assign(2, 0);
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(f.cols * f.rows), 0);
        std::vector<Run> runs;
        for (std::int64_t jj = begin; jj < end; ++jj) {
            const int j = f.j_min + static_cast<int>(jj);
            const double y0 = (j + 0.5) * f.cell;
            runs.clear();
            fill_slab(f, j, [&](std::int64_t col, int k0, int k1) {
                runs.push_back(Run{static_cast<int>(col), k0, k1});
                std::uint32_t* base = counts.data() + col * f.rows;
                for (int k = k0; k <= k1; ++k) ++base[k];
            });
            const double dy = y0 - region_center.y();
            const double rem = rr - dy * dy;
            for (const Run& r : runs) {
                std::uint32_t* base = counts.data() + static_cast<std::size_t>(r.col) * f.rows;
                const double qx = (r.col + f.i_min + 0.5) * f.cell;
                const double dx = qx - region_center.x();
                for (int k = r.k0; k <= r.k1; ++k) {
                    const std::uint32_t cnt = base[k];
                    if (cnt == 0) continue; // already drained by an overlapping run
                    base[k] = 0;
                    const double qz = (k + f.k_min + 0.5) * f.cell;
                    const double dz = qz - region_center.z();
                    if (dx * dx + dz * dz > rem) continue;
                    if (local.size() <= cnt) local.resize(cnt + 1, 0);
                    ++local[cnt];
                }
            }
        }
    });
    for (const auto& local : partial) {
        if (hist.size() < local.size()) hist.resize(local.size(), 0);
        for (std::size_t c = 0; c < local.size(); ++c) hist[c] += local[c];
    }
    return hist;
}

} // namespace kakeya
