#include "kakeya/projections.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kakeya/errors.hpp"
#include "kakeya/geometry.hpp"

namespace kakeya {

namespace {

double kahan_total(const std::vector<double>& vals) {
    double sum = 0.0, comp = 0.0;
    for (const double v : vals) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

template <typename Map>
double map_total(const Map& bins) {
    double sum = 0.0, comp = 0.0;
    for (const auto& [key, mass] : bins) {
        const double y = mass - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

void check_push_args(const GridMeasure& mu, double cell) {
    if (cell < mu.delta) {
        throw std::invalid_argument("pushforward: bin size must be >= the measure cell size");
    }
}

} // namespace

double PlaneDensity::total() const { return map_total(bins); }
double LineDensity::total() const { return map_total(bins); }

ThetaGrid full_circle_grid(std::size_t n) {
    if (n == 0) throw std::invalid_argument("full_circle_grid: need at least one node");
    ThetaGrid grid;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    grid.samples.reserve(n);
    grid.weights.assign(n, step);
    for (std::size_t i = 0; i < n; ++i) grid.samples.push_back((i + 0.5) * step);
    return grid;
}

ThetaGrid arc_grid(double theta0, double halfwidth, std::size_t n) {
    if (n == 0) throw std::invalid_argument("arc_grid: need at least one node");
    if (!(halfwidth > 0.0)) throw std::invalid_argument("arc_grid: halfwidth must be positive");
    ThetaGrid grid;
    const double step = 2.0 * halfwidth / static_cast<double>(n);
    grid.samples.reserve(n);
    grid.weights.assign(n, step);
    for (std::size_t i = 0; i < n; ++i) {
        grid.samples.push_back(theta0 - halfwidth + (i + 0.5) * step);
    }
    return grid;
}

std::size_t default_theta_samples(double delta) {
    return static_cast<std::size_t>(std::max(360.0, std::ceil(4.0 / std::sqrt(delta))));
}

PlaneDensity push_plane(const GridMeasure& mu, double theta, double cell) {
    check_push_args(mu, cell);
    const Frame f = gamma_frame(theta);
    PlaneDensity d;
    d.theta = theta;
    d.cell = cell;
    const double inv = 1.0 / cell;
    for (const auto& [key, mass] : mu.cells) {
        const Vec3 x = mu.center_of(key);
        d.bins[pack_cell(cell_index(f.u2.dot(x), inv), cell_index(f.u3.dot(x), inv), 0)] += mass;
    }
    return d;
}

LineDensity push_line(const GridMeasure& mu, double theta, double cell) {
    check_push_args(mu, cell);
    const Frame f = gamma_frame(theta);
    LineDensity d;
    d.theta = theta;
    d.cell = cell;
    const double inv = 1.0 / cell;
    for (const auto& [key, mass] : mu.cells) {
        d.bins[cell_index(f.u1.dot(mu.center_of(key)), inv)] += mass;
    }
    return d;
}

double lp_norm(const PlaneDensity& d, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double area = d.cell * d.cell;
    std::vector<double> terms;
    terms.reserve(d.bins.size());
    for (const auto& [key, mass] : d.bins) terms.push_back(area * std::pow(mass / area, p));
    return kahan_total(terms);
}

double lp_norm(const LineDensity& d, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    std::vector<double> terms;
    terms.reserve(d.bins.size());
    for (const auto& [key, mass] : d.bins) terms.push_back(d.cell * std::pow(mass / d.cell, p));
    return kahan_total(terms);
}

namespace {

/// Dense scratch for one angle: bins over the window of attained indices.
/// Reused across angles; only touched entries are cleared.
class DenseBins {
public:
    void reset(std::int64_t cols, std::int64_t rows) {
        const std::int64_t need = cols * rows;
        guard_cells(need, "averaged_norm bins");
        if (static_cast<std::int64_t>(values_.size()) < need) values_.assign(need, 0.0);
        rows_ = rows;
    }
    double& at(std::int64_t iu, std::int64_t iv) {
        const std::int64_t idx = iu * rows_ + iv;
        if (values_[idx] == 0.0) touched_.push_back(idx);
        return values_[idx];
    }
    template <typename Fn>
    void drain(Fn&& fn) {
        for (const std::int64_t idx : touched_) {
            if (values_[idx] != 0.0) fn(values_[idx]);
            values_[idx] = 0.0;
        }
        touched_.clear();
    }

private:
    std::int64_t rows_ = 0;
    std::vector<double> values_;
    std::vector<std::int64_t> touched_;
};

} // namespace

double averaged_norm(const GridMeasure& mu, double p, ProjectionKind kind, const ThetaGrid& grid,
                     double cell) {
    if (grid.samples.empty()) throw std::invalid_argument("averaged_norm: empty theta grid");
    if (cell <= 0.0) cell = mu.delta;
    check_push_args(mu, cell);
    if (p < 1.0) throw std::invalid_argument("averaged_norm: p must be >= 1");

    const auto cells = mu.sorted_cells();
    // Frame coordinates of points in [-2,2]^3 stay within radius 2 sqrt(3).
    const double reach = 3.5;
    const std::int64_t half = static_cast<std::int64_t>(std::ceil(reach / cell)) + 1;
    const std::int64_t side = 2 * half + 1;
    DenseBins bins;
    const double inv = 1.0 / cell;
    const double measure = (kind == ProjectionKind::plane) ? cell * cell : cell;

    std::vector<double> contributions;
    contributions.reserve(grid.samples.size());
    for (std::size_t t = 0; t < grid.samples.size(); ++t) {
        const Frame f = gamma_frame(grid.samples[t]);
        if (kind == ProjectionKind::plane) {
            bins.reset(side, side);
            for (const auto& [x, mass] : cells) {
                const std::int64_t iu = cell_index(f.u2.dot(x), inv) + half;
                const std::int64_t iv = cell_index(f.u3.dot(x), inv) + half;
                bins.at(iu, iv) += mass;
            }
        } else {
            bins.reset(side, 1);
            for (const auto& [x, mass] : cells) {
                bins.at(cell_index(f.u1.dot(x), inv) + half, 0) += mass;
            }
        }
        double norm = 0.0;
        bins.drain([&](double mass) { norm += measure * std::pow(mass / measure, p); });
        contributions.push_back(grid.weights[t] * norm);
    }
    return kahan_total(contributions);
}

} // namespace kakeya
