#include "kakeya/io.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace kakeya {

void save_tube_family(const TubeFamily& family, const std::string& path) {
    nlohmann::json tubes = nlohmann::json::array();
    for (const Tube& t : family.tubes) {
        tubes.push_back({t.line.a, t.line.b, t.line.c, t.s0, t.s1, t.radius});
    }
    nlohmann::json doc = {
        {"format", "tubefamily/1"},
        {"delta", family.delta},
        {"inflation", family.inflation},
        {"tubes", tubes},
    };
    if (family.source_balls) {
        nlohmann::json balls = nlohmann::json::array();
        for (const Vec3& b : *family.source_balls) balls.push_back({b.x(), b.y(), b.z()});
        doc["source_balls"] = balls;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_tube_family: cannot open " + path);
    out << doc.dump() << "\n";
}

TubeFamily load_tube_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_tube_family: cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    if (doc.value("format", "") != "tubefamily/1") {
        throw std::runtime_error("load_tube_family: unsupported format");
    }
    TubeFamily family;
    family.delta = doc.at("delta").get<double>();
    family.inflation = doc.value("inflation", 4.0);
    for (const auto& row : doc.at("tubes")) {
        Tube t;
        t.line = {row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()};
        t.s0 = row.at(3).get<double>();
        t.s1 = row.at(4).get<double>();
        t.radius = row.at(5).get<double>();
        family.tubes.push_back(t);
    }
    if (doc.contains("source_balls")) {
        std::vector<Vec3> balls;
        for (const auto& row : doc.at("source_balls")) {
            balls.emplace_back(row.at(0).get<double>(), row.at(1).get<double>(),
                               row.at(2).get<double>());
        }
        family.source_balls = std::move(balls);
    }
    return family;
}

void save_count_grid(const CountGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_count_grid: cannot open " + path);
    nlohmann::json header = {
        {"format", "gridmeasure/1"},
        {"kind", "countgrid"},
        {"delta", grid.cell},
        {"count", grid.counts.size()},
    };
    out << header.dump() << "\n";
    std::vector<std::pair<std::uint64_t, std::uint32_t>> entries(grid.counts.begin(),
                                                                 grid.counts.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, count] : entries) {
        int i, j, k;
        unpack_cell(key, i, j, k);
        out << i << " " << j << " " << k << " " << count << "\n";
    }
}

CountGrid load_count_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_count_grid: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_count_grid: empty file");
    const nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("format", "") != "gridmeasure/1") {
        throw std::runtime_error("load_count_grid: unsupported format");
    }
    CountGrid grid;
    grid.cell = header.at("delta").get<double>();
    int i, j, k;
    std::uint64_t count;
    while (in >> i >> j >> k >> count) {
        grid.counts[pack_cell(i, j, k)] = static_cast<std::uint32_t>(count);
    }
    return grid;
}

} // namespace kakeya
