#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kakeya/cantor.hpp"
#include "kakeya/config.hpp"
#include "kakeya/errors.hpp"
#include "kakeya/exponents.hpp"
#include "kakeya/geometry.hpp"
#include "kakeya/grid.hpp"
#include "kakeya/measures.hpp"
#include "kakeya/parallel.hpp"
#include "kakeya/projections.hpp"
#include "kakeya/svg.hpp"
#include "kakeya/tubes.hpp"

namespace {

using namespace kakeya;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";
constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

struct Manifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const std::string& out_dir) const {
        if (out_dir.empty()) return;
        for (const std::string& path : outputs) {
            if (!fs::exists(path)) {
                throw std::runtime_error("manifest: missing output " + path);
            }
        }
        nlohmann::json doc = {
            {"command", command},
            {"config", config},
            {"version", kVersion},
            {"compiler", __VERSION__},
            {"wall_time_s",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
            {"outputs", outputs},
        };
        std::ofstream out(fs::path(out_dir) / "manifest.json");
        out << doc.dump(2) << "\n";
    }
};

void ensure_out_dir(const std::string& out_dir) {
    if (!out_dir.empty()) fs::create_directories(out_dir);
}

// ---------------------------------------------------------------------------
// duality

int run_duality(long count, unsigned long seed, bool perturb) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    if (count == 0) {
        std::cout << "warning: count = 0, duality battery trivially passes\n";
        return kExitPass;
    }
    long failures = 0;
    for (long i = 0; i < count; ++i) {
        Vec3 pstar{box(rng), box(rng), box(rng)};
        Vec3 p;
        bool constructed = (i % 2 == 1);
        if (constructed) {
            p = ell_star_point({pstar.x(), pstar.y(), pstar.z()}, box(rng));
            if (perturb) p += Vec3{1e-6, 0, 0};
        } else {
            p = Vec3{box(rng), box(rng), box(rng)};
        }
        const double d_star = distance_to_ell_star(p, {pstar.x(), pstar.y(), pstar.z()});
        const double d_line = distance_to_ell(pstar, {p.x(), p.y(), p.z()});
        const bool member_star = d_star <= 1e-9;
        const bool member_line = d_line <= 1e-9;
        if (member_star != member_line) ++failures;
        if (constructed && !(member_star && member_line)) ++failures;
    }
    std::cout << "duality fuzz: " << count << " pairs, " << failures << " failures\n";
    if (failures > 0) {
        std::cout << "FAIL: point-line duality battery\n";
        return kExitAssertion;
    }
    std::cout << "PASS: point-line duality battery\n";
    return kExitPass;
}

// ---------------------------------------------------------------------------
// sweep

SweepConfig sweep_config_from_entries(const std::vector<ConfigEntry>& entries) {
    SweepConfig config;
    bool have_quantity = false, have_deltas = false;
    for (const ConfigEntry& e : entries) {
        try {
            if (e.key == "quantity") {
                const auto q = quantity_from_name(e.value);
                if (!q) throw std::invalid_argument("unknown quantity '" + e.value + "'");
                config.quantity = *q;
                have_quantity = true;
            } else if (e.key == "alpha") {
                config.params.alpha = parse_scale(e.value);
            } else if (e.key == "p") {
                config.params.p = parse_scale(e.value);
            } else if (e.key == "theta0") {
                config.params.theta0 = std::stod(e.value);
            } else if (e.key == "plank_c") {
                config.params.plank_c = parse_scale(e.value);
            } else if (e.key == "spread") {
                config.params.spread = parse_scale(e.value);
            } else if (e.key == "region_radius") {
                config.params.region_radius = parse_scale(e.value);
            } else if (e.key == "deltas") {
                config.deltas = parse_scale_list(e.value);
                have_deltas = true;
            } else if (e.key == "depths") {
                config.deltas.clear();
                for (const double d : parse_scale_list(e.value)) {
                    config.deltas.push_back(std::pow(0.25, d));
                }
                have_deltas = true;
            } else {
                throw std::invalid_argument("unknown key '" + e.key + "'");
            }
        } catch (const config_error&) {
            throw;
        } catch (const std::exception& ex) {
            throw config_error(e.line, ex.what());
        }
    }
    if (!have_quantity) throw config_error(0, "missing required key 'quantity'");
    if (!have_deltas) throw config_error(0, "missing required key 'deltas' (or 'depths')");
    return config;
}

int run_sweep_command(const std::string& config_path, const std::string& out_dir,
                      Manifest& manifest) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "config error: cannot open " << config_path << "\n";
        return kExitConfig;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    SweepConfig config;
    try {
        config = sweep_config_from_entries(parse_config_entries(buf.str()));
        // Validate the grid before producing any output.
        if (config.deltas.size() < 3) throw config_error(0, "need at least 3 deltas");
        for (std::size_t i = 1; i < config.deltas.size(); ++i) {
            if (!(config.deltas[i] < config.deltas[i - 1])) {
                throw config_error(0, "deltas must be strictly decreasing");
            }
        }
    } catch (const config_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfig;
    }

    SweepResult result;
    try {
        result = run_sweep(config);
    } catch (const size_guard_error& ex) {
        std::cerr << "size guard: " << ex.what() << "\n";
        return kExitConfig;
    }
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    const std::vector<SweepResult> results{result};
    const std::string csv_path = (dir / "sweep.csv").string();
    const std::string json_path = (dir / "sweep.json").string();
    const std::string svg_path =
        (dir / (std::string("sweep_") + quantity_name(config.quantity) + ".svg")).string();
    write_csv(csv_path, results);
    {
        std::ofstream jout(json_path, std::ios::binary);
        jout << to_json(results) << "\n";
    }
    write_loglog_svg(svg_path, result);
    manifest.outputs = {csv_path, json_path, svg_path};
    manifest.config = nlohmann::json::parse(to_json(results))[0]["params"];
    manifest.config["quantity"] = quantity_name(config.quantity);

    std::printf("sweep %s: slope %.4f", quantity_name(config.quantity), result.fit.slope);
    if (result.predicted) std::printf(" (predicted %.4f)", *result.predicted);
    std::printf(", r2 %.4f\n", result.fit.r2);
    for (const SweepPoint& pt : result.points) {
        std::printf("  delta %.8g -> %.8g\n", pt.delta, pt.value);
    }
    std::printf("wrote %s, %s, %s\n", csv_path.c_str(), json_path.c_str(), svg_path.c_str());
    return kExitPass;
}

// ---------------------------------------------------------------------------
// besicovitch

int run_besicovitch(int depth, double delta, bool dump, bool force, const std::string& out_dir,
                    Manifest& manifest) {
    if (depth > 5 && !force) {
        std::cerr << "refusing depth " << depth
                  << " (> 5); pass --force to override (16^depth segments)\n";
        return kExitConfig;
    }
    if (delta <= 0.0) delta = std::pow(0.25, depth);
    const SegmentCloud cloud = besicovitch_segments(rotated_product_boxes(depth));
    const double coverage = direction_coverage_ratio(depth);
    const double volume = neighborhood_volume(cloud, delta);
    std::printf("depth %d: %zu segments, coverage ratio %.6f, N_delta volume %.6g (delta %.6g)\n",
                depth, cloud.segments.size(), coverage, volume, delta);

    nlohmann::json report = {
        {"depth", depth},
        {"delta", delta},
        {"segments", cloud.segments.size()},
        {"coverage_ratio", coverage},
        {"volume", volume},
    };
    if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        const std::string report_path = (dir / "besicovitch_report.json").string();
        std::ofstream out(report_path);
        out << report.dump(2) << "\n";
        manifest.outputs.push_back(report_path);
        if (dump) {
            const PackedIndicator ind = rasterize_neighborhood(cloud, delta, delta);
            GridMeasure indicator;
            indicator.delta = delta;
            const double cell_mass = delta * delta * delta;
            for (const auto key : ind.keys) indicator.cells[key] = cell_mass;
            const std::string dump_path = (dir / "neighborhood_indicator.grid").string();
            save_grid_measure(indicator, dump_path);
            manifest.outputs.push_back(dump_path);
        }
    }
    manifest.config = report;
    return kExitPass;
}

// ---------------------------------------------------------------------------
// kakeya-norm

int run_kakeya_norm(double delta, double alpha, double p, const std::string& out_dir,
                    Manifest& manifest) {
    PlankSpec spec;
    spec.theta0 = std::numbers::pi / 2;
    spec.delta = delta;
    const GridMeasure nu = train_track_measure(spec, alpha);
    const TubeFamily family = tubes_from_balls(occupied_centers(nu), delta);
    const BallRegion region{Vec3::Zero(), 2.0};
    const double lp = lp_of_counts_streamed(family, p, region);
    const double normalized = lp / (static_cast<double>(family.tubes.size()) * delta * delta);

    std::printf("dual family at delta %.6g (alpha %.3g): %zu tubes\n", delta, alpha,
                family.tubes.size());
    std::printf("||sum chi_T||_%.4g^%.4g over B(0,2) = %.6g, normalized %.6g\n", p, p, lp,
                normalized);
    double gap = -1.0;
    try {
        gap = min_direction_gap(family);
        std::printf("min direction gap at 100 delta separation: %.6g (%.3g delta)\n", gap,
                    gap / delta);
    } catch (const std::invalid_argument&) {
        std::printf("min direction gap: no 100 delta separated pairs at this delta\n");
    }

    bool wolff_ok = true;
    nlohmann::json wolff_rows = nlohmann::json::array();
    for (double r = delta; r <= 1.0; r *= 2.0) {
        const WolffResult res = wolff_check(family, r);
        const bool ok = static_cast<double>(res.max_count) <= 10.0 * res.bound;
        wolff_ok = wolff_ok && ok;
        std::printf("wolff r=%.6g: max_count %lld vs bound (r/delta)^2 = %.6g [%s]\n", r,
                    static_cast<long long>(res.max_count), res.bound, ok ? "ok" : "VIOLATION");
        wolff_rows.push_back({{"r", r},
                              {"max_count", res.max_count},
                              {"bound", res.bound},
                              {"within_10x", ok}});
    }
    nlohmann::json report = {
        {"delta", delta},       {"alpha", alpha},
        {"p", p},               {"tubes", family.tubes.size()},
        {"lp", lp},             {"normalized", normalized},
        {"min_gap", gap},       {"wolff", wolff_rows},
    };
    if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        const std::string path = (dir / "kakeya_norm_report.json").string();
        std::ofstream out(path);
        out << report.dump(2) << "\n";
        manifest.outputs.push_back(path);
    }
    manifest.config = report;
    if (!wolff_ok) {
        std::printf("FAIL: two-dimensional ball condition violated beyond the 10x band\n");
        return kExitAssertion;
    }
    return kExitPass;
}

// ---------------------------------------------------------------------------
// maximal

int run_maximal(int depth, int directions, bool force, const std::string& out_dir,
                Manifest& manifest) {
    if (depth > 5 && !force) {
        std::cerr << "refusing depth " << depth << " (> 5); pass --force to override\n";
        return kExitConfig;
    }
    const double delta = std::pow(0.25, depth);
    const SegmentCloud cloud = besicovitch_segments(rotated_product_boxes(depth));
    // Depth 5 holds ~2^30 cells at cell = delta; 2*delta keeps it in memory.
    const double cell = depth >= 5 ? 2 * delta : delta;
    const PackedIndicator ind = rasterize_neighborhood(cloud, delta, cell);
    const PackedCells f = PackedCells::from_indicator(ind);
    const double norm32 = std::pow(ind.volume(), 2.0 / 3.0);

    double min_value = 1e300, max_value = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, cloud.segments.size() / directions);
    int evaluated = 0;
    for (std::size_t i = 0; i < cloud.segments.size() && evaluated < directions; i += stride) {
        const auto& seg = cloud.segments[i];
        const MaximalResult res =
            sl2_maximal(f, horizontal_direction(seg.a, seg.b), delta);
        min_value = std::min(min_value, res.value);
        max_value = std::max(max_value, res.value);
        ++evaluated;
    }
    std::printf("depth %d (delta %.6g): %d covered directions, maximal in [%.4f, %.4f], "
                "indicator L^{3/2} norm %.6g\n",
                depth, delta, evaluated, min_value, max_value, norm32);
    manifest.config = {{"depth", depth},
                       {"delta", delta},
                       {"directions", evaluated},
                       {"min_value", min_value},
                       {"max_value", max_value},
                       {"l32_norm", norm32}};
    if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        const std::string path = (dir / "maximal_report.json").string();
        std::ofstream out(path);
        out << manifest.config.dump(2) << "\n";
        manifest.outputs.push_back(path);
    }
    if (min_value < 0.05) {
        std::printf("FAIL: maximal function dropped below 0.05 on a covered direction\n");
        return kExitAssertion;
    }
    std::printf("PASS: maximal function >= 0.05 on covered directions\n");
    return kExitPass;
}

// ---------------------------------------------------------------------------
// selftest

int run_selftest(bool quick) {
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        std::printf("%s: %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> box(-2.0, 2.0);
        bool ok = true;
        for (int i = 0; i < (quick ? 1000 : 10000); ++i) {
            const Vec3 a{box(rng), box(rng), box(rng)};
            const Vec3 b{box(rng), box(rng), box(rng)};
            const Vec3 c{box(rng), box(rng), box(rng)};
            ok = ok && (heisenberg_mul(heisenberg_mul(a, b), c) -
                        heisenberg_mul(a, heisenberg_mul(b, c)))
                               .lpNorm<Eigen::Infinity>() <= 1e-12;
        }
        report("heisenberg associativity", ok);
    }
    {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
        bool ok = true;
        for (int i = 0; i < (quick ? 100 : 1000); ++i) {
            const Frame f = gamma_frame(angle(rng));
            ok = ok && std::abs(f.u1.dot(f.u2)) <= 1e-12 && std::abs(f.u1.dot(f.u3)) <= 1e-12 &&
                 std::abs(f.u2.dot(f.u3)) <= 1e-12 && std::abs(f.u1.norm() - 1) <= 1e-12;
        }
        report("frame orthonormality", ok);
    }
    {
        bool ok = run_duality(quick ? 2000 : 20000, 12345, false) == kExitPass;
        report("duality battery", ok);
    }
    {
        bool ok = true;
        for (int n = 0; n <= (quick ? 4 : 8); ++n) ok = ok && sumset_covers(n);
        report("cantor sumset covers [0,3]", ok);
    }
    {
        const SegmentCloud cloud = besicovitch_segments(rotated_product_boxes(2));
        const double v16 = neighborhood_volume(cloud, 1.0 / 16);
        const double v32 = neighborhood_volume(cloud, 1.0 / 32);
        report("neighborhood volume monotone in delta", v32 < v16);
    }
    std::printf("selftest: %d failure(s)\n", failures);
    return failures == 0 ? kExitPass : kExitAssertion;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"horizontal/SL2 Kakeya constructions: duality, Besicovitch sets, "
                 "counterexample measures, restricted projections, scaling sweeps"};
    app.require_subcommand(1);

    std::string out_dir;
    unsigned workers = 0;
    app.add_option("--out-dir", out_dir, "directory for reports, CSV/SVG and the manifest");
    app.add_option("--workers", workers, "worker cap for parallel stages (0 = all cores)");

    auto* duality = app.add_subcommand("duality", "point-line duality fuzz battery");
    long count = 100000;
    unsigned long seed = 20240817;
    bool perturb = false;
    duality->add_option("--count", count, "number of fuzz pairs");
    duality->add_option("--seed", seed, "rng seed");
    duality->add_flag("--perturb", perturb, "inject a 1e-6 perturbation (designed failure)");

    auto* sweep = app.add_subcommand("sweep", "evaluate a quantity over a delta grid and fit");
    std::string config_path;
    sweep->add_option("--config", config_path, "flat key = value config file")->required();

    auto* besicovitch =
        app.add_subcommand("besicovitch", "measure-zero construction report at a depth");
    int depth = 3;
    double delta_flag = 0.0;
    bool dump = false, force = false;
    besicovitch->add_option("--depth", depth, "construction depth (guarded at 5)");
    besicovitch->add_option("--delta", delta_flag, "neighborhood scale (default 4^-depth)");
    besicovitch->add_flag("--dump", dump, "write the indicator grid measure");
    besicovitch->add_flag("--force", force, "override the depth guard");

    auto* kakeya_norm = app.add_subcommand("kakeya-norm", "dual tube family norms and checks");
    double kn_delta = 1.0 / 64, kn_alpha = 2.0, kn_p = 4.0 / 3.0;
    kakeya_norm->add_option("--delta", kn_delta, "tube radius");
    kakeya_norm->add_option("--alpha", kn_alpha, "train track exponent");
    kakeya_norm->add_option("--p", kn_p, "norm exponent");

    auto* maximal = app.add_subcommand("maximal", "maximal function on the Besicovitch set");
    int m_depth = 3, m_directions = 50;
    bool m_force = false;
    maximal->add_option("--depth", m_depth, "construction depth (guarded at 5)");
    maximal->add_option("--directions", m_directions, "number of covered directions to probe");
    maximal->add_flag("--force", m_force, "override the depth guard");

    auto* selftest = app.add_subcommand("selftest", "fast invariant battery");
    bool quick = false;
    selftest->add_flag("--quick", quick, "smaller sample sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    set_worker_count(workers);
    ensure_out_dir(out_dir);
    Manifest manifest;

    try {
        int rc = kExitPass;
        if (*duality) {
            manifest.command = "duality";
            rc = run_duality(count, seed, perturb);
        } else if (*sweep) {
            manifest.command = "sweep";
            rc = run_sweep_command(config_path, out_dir, manifest);
        } else if (*besicovitch) {
            manifest.command = "besicovitch";
            rc = run_besicovitch(depth, delta_flag, dump, force, out_dir, manifest);
        } else if (*kakeya_norm) {
            manifest.command = "kakeya-norm";
            rc = run_kakeya_norm(kn_delta, kn_alpha, kn_p, out_dir, manifest);
        } else if (*maximal) {
            manifest.command = "maximal";
            rc = run_maximal(m_depth, m_directions, m_force, out_dir, manifest);
        } else if (*selftest) {
            manifest.command = "selftest";
            rc = run_selftest(quick);
        }
        if (rc == kExitPass && !out_dir.empty()) manifest.write(out_dir);
        return rc;
    } catch (const config_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const size_guard_error& ex) {
        std::cerr << "size guard: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitAssertion;
    }
}
