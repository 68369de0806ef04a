#include "kakeya/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "kakeya/errors.hpp"

namespace kakeya {

Vec3 GridMeasure::center_of(std::uint64_t key) const {
    int i, j, k;
    unpack_cell(key, i, j, k);
    return {(i + 0.5) * delta, (j + 0.5) * delta, (k + 0.5) * delta};
}

void GridMeasure::add(const Vec3& x, double mass) {
    if (mass < 0.0) throw std::invalid_argument("GridMeasure::add: negative mass");
    if (x.cwiseAbs().maxCoeff() > 2.0) {
        throw std::domain_error("GridMeasure::add: support must lie in [-2,2]^3");
    }
    const double inv = 1.0 / delta;
    cells[pack_cell(cell_index(x.x(), inv), cell_index(x.y(), inv), cell_index(x.z(), inv))] +=
        mass;
}

double GridMeasure::total_mass() const {
    double sum = 0.0, comp = 0.0;
    for (const auto& [key, mass] : cells) {
        const double y = mass - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double GridMeasure::mass_in_box(const Vec3& lo, const Vec3& hi) const {
    double sum = 0.0, comp = 0.0;
    for (const auto& [key, mass] : cells) {
        const Vec3 c = center_of(key);
        if ((c.array() >= lo.array()).all() && (c.array() <= hi.array()).all()) {
            const double y = mass - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

std::array<Vec3, 2> GridMeasure::bounding_box() const {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
    Vec3 hi = -lo;
    for (const auto& [key, mass] : cells) {
        const Vec3 c = center_of(key);
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
    }
    return {lo, hi};
}

std::vector<std::pair<Vec3, double>> GridMeasure::sorted_cells() const {
    std::vector<std::pair<std::uint64_t, double>> entries(cells.begin(), cells.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Vec3, double>> out;
    out.reserve(entries.size());
    for (const auto& [key, mass] : entries) out.emplace_back(center_of(key), mass);
    return out;
}

GridMeasure ball_measure(const Vec3& center, double radius, double delta) {
    GridMeasure mu;
    mu.delta = delta;
    const double inv = 1.0 / delta;
    const int i0 = cell_index(center.x() - radius, inv), i1 = cell_index(center.x() + radius, inv);
    const int j0 = cell_index(center.y() - radius, inv), j1 = cell_index(center.y() + radius, inv);
    const int k0 = cell_index(center.z() - radius, inv), k1 = cell_index(center.z() + radius, inv);
    guard_cells(static_cast<std::int64_t>(i1 - i0 + 1) * (j1 - j0 + 1) * (k1 - k0 + 1),
                "ball_measure");
    std::vector<std::uint64_t> keys;
    const double r2 = radius * radius;
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j)
            for (int k = k0; k <= k1; ++k) {
                const Vec3 c{(i + 0.5) * delta, (j + 0.5) * delta, (k + 0.5) * delta};
                if ((c - center).squaredNorm() <= r2) keys.push_back(pack_cell(i, j, k));
            }
    if (keys.empty()) throw std::invalid_argument("ball_measure: no cells covered");
    const double mass = 1.0 / static_cast<double>(keys.size());
    for (const auto key : keys) mu.cells[key] = mass;
    return mu;
}

void save_grid_measure(const GridMeasure& mu, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_grid_measure: cannot open " + path);
    const auto bbox = mu.bounding_box();
    nlohmann::json header = {
        {"format", "gridmeasure/1"},
        {"delta", mu.delta},
        {"count", mu.cells.size()},
        {"bbox_lo", {bbox[0].x(), bbox[0].y(), bbox[0].z()}},
        {"bbox_hi", {bbox[1].x(), bbox[1].y(), bbox[1].z()}},
    };
    out << header.dump() << "\n";
    std::vector<std::pair<std::uint64_t, double>> entries(mu.cells.begin(), mu.cells.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.precision(17);
    for (const auto& [key, mass] : entries) {
        int i, j, k;
        unpack_cell(key, i, j, k);
        out << i << " " << j << " " << k << " " << mass << "\n";
    }
}

GridMeasure load_grid_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_grid_measure: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_grid_measure: empty file");
    const nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("format", "") != "gridmeasure/1") {
        throw std::runtime_error("load_grid_measure: unsupported format");
    }
    GridMeasure mu;
    mu.delta = header.at("delta").get<double>();
    int i, j, k;
    double mass;
    while (in >> i >> j >> k >> mass) mu.cells[pack_cell(i, j, k)] = mass;
    return mu;
}

} // namespace kakeya
