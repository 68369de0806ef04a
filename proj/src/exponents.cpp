#include "kakeya/exponents.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "kakeya/cantor.hpp"
#include "kakeya/projections.hpp"
#include "kakeya/tubes.hpp"

namespace kakeya {

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::frostman: return "frostman";
        case Quantity::energy: return "energy";
        case Quantity::avg_norm_plane: return "avg_norm_plane";
        case Quantity::avg_norm_line: return "avg_norm_line";
        case Quantity::tube_lp: return "tube_lp";
        case Quantity::volume_decay: return "volume_decay";
        case Quantity::min_gap: return "min_gap";
    }
    return "unknown";
}

std::optional<Quantity> quantity_from_name(const std::string& name) {
    for (const Quantity q :
         {Quantity::frostman, Quantity::energy, Quantity::avg_norm_plane, Quantity::avg_norm_line,
          Quantity::tube_lp, Quantity::volume_decay, Quantity::min_gap}) {
        if (name == quantity_name(q)) return q;
    }
    return std::nullopt;
}

FitResult fit_loglog(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("fit_loglog: need at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(points.size());
    for (const auto& [delta, value] : points) {
        if (!(delta > 0.0) || !(value > 0.0)) {
            throw std::invalid_argument("fit_loglog: points must be positive");
        }
        const double x = std::log2(delta);
        const double y = std::log2(value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double var_x = sxx - sx * sx / n;
    if (var_x <= 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
    FitResult fit;
    const double cov = sxy - sx * sy / n;
    const double var_y = syy - sy * sy / n;
    fit.slope = cov / var_x;
    fit.intercept = (sy - fit.slope * sx) / n;
    if (var_y <= 0.0) {
        fit.r2 = 1.0; // constant data fitted exactly by slope 0
    } else {
        fit.r2 = std::min(1.0, std::max(0.0, cov * cov / (var_x * var_y)));
    }
    return fit;
}

namespace {

std::size_t arc_samples(double delta) {
    return std::max<std::size_t>(
        48, static_cast<std::size_t>(default_theta_samples(delta) * std::sqrt(delta) / 3.14159));
}

PlankSpec spec_for(const SweepParams& params, double delta, PlankOrientation orientation) {
    PlankSpec spec;
    spec.theta0 = params.theta0;
    spec.delta = delta;
    spec.c = params.plank_c;
    spec.spread = params.spread;
    spec.orientation = orientation;
    return spec;
}

TubeFamily dual_family(const SweepParams& params, double delta) {
    const GridMeasure nu = train_track_measure(spec_for(params, delta, PlankOrientation::plane_knapp), 2.0);
    return tubes_from_balls(occupied_centers(nu), delta);
}

double evaluate(const SweepConfig& config, double delta) {
    const SweepParams& params = config.params;
    switch (config.quantity) {
        case Quantity::frostman: {
            const GridMeasure nu =
                train_track_measure(spec_for(params, delta, PlankOrientation::plane_knapp), params.alpha);
            return frostman(nu, params.alpha).value;
        }
        case Quantity::energy: {
            const GridMeasure mu = plank_measure(spec_for(params, delta, PlankOrientation::plane_knapp));
            return riesz_energy(mu, params.alpha);
        }
        case Quantity::avg_norm_plane: {
            // Integrated over the concentration arc |theta - theta0| <=
            // delta^(1/2), where the translated plank projections stay
            // disjoint and the delta^((3-3p)/2) blow-up lives. The far field
            // adds a faster-growing merged contribution on the full circle.
            const GridMeasure nu =
                train_track_measure(spec_for(params, delta, PlankOrientation::plane_knapp), params.alpha);
            const ThetaGrid grid = arc_grid(params.theta0, std::sqrt(delta), arc_samples(delta));
            return averaged_norm(nu, params.p, ProjectionKind::plane, grid);
        }
        case Quantity::avg_norm_line: {
            const GridMeasure mu = plank_measure(spec_for(params, delta, PlankOrientation::line_knapp));
            const ThetaGrid grid = arc_grid(params.theta0, std::sqrt(delta), arc_samples(delta));
            return averaged_norm(mu, params.p, ProjectionKind::line, grid);
        }
        case Quantity::tube_lp: {
            const TubeFamily family = dual_family(params, delta);
            const double lp = lp_of_counts_streamed(family, params.p,
                                                    BallRegion{Vec3::Zero(), params.region_radius});
            return lp / (static_cast<double>(family.tubes.size()) * delta * delta);
        }
        case Quantity::volume_decay: {
            const int depth = static_cast<int>(std::lround(std::log2(1.0 / delta) / 2.0));
            const SegmentCloud cloud = besicovitch_segments(rotated_product_boxes(depth));
            return neighborhood_volume(cloud, delta);
        }
        case Quantity::min_gap: {
            return min_direction_gap(dual_family(params, delta));
        }
    }
    throw std::logic_error("evaluate: unknown quantity");
}

void attach_prediction(SweepResult& result) {
    const SweepParams& params = result.config.params;
    switch (result.config.quantity) {
        case Quantity::frostman:
            result.predicted = 1.5 - params.alpha;
            result.citation = "train track Frostman constant: c_alpha(nu) ~ delta^(3/2 - alpha)";
            break;
        case Quantity::energy:
            result.predicted = 1.5 - params.alpha;
            result.citation = "plank energy: I_alpha(mu) ~ delta^(3/2 - alpha)";
            break;
        case Quantity::avg_norm_plane:
            if (params.alpha == 2.0) {
                result.predicted = (3.0 - 3.0 * params.p) / 2.0;
                result.citation =
                    "plane projections of the train track on the delta^(1/2) arc: "
                    "integral ||pi_theta# nu||_p^p ~ delta^((3-3p)/2)";
            } else {
                result.citation = "none";
            }
            break;
        case Quantity::avg_norm_line:
            result.predicted = 1.5 - params.p;
            result.citation =
                "line projections of the plank on the delta^(1/2) arc: ~ delta^(3/2 - p)";
            break;
        case Quantity::tube_lp:
            if (params.p > 1.5) {
                result.predicted = 1.5 - params.p;
                result.citation =
                    "dual tube overlap for p > 3/2: ||sum chi_T||_p^p / (|T| delta^2) >~ "
                    "delta^(3/2 - p)";
            } else {
                result.citation = "none";
            }
            break;
        case Quantity::min_gap:
            result.predicted = 1.0;
            result.citation = "directions of 100 delta-separated dual balls are ~delta-separated";
            break;
        case Quantity::volume_decay:
            result.citation = "none";
            break;
    }
    if (result.citation.empty()) result.citation = "none";
}

} // namespace

SweepResult run_sweep(const SweepConfig& config) {
    if (config.deltas.size() < 3) {
        throw std::invalid_argument("run_sweep: need at least 3 deltas");
    }
    for (std::size_t i = 1; i < config.deltas.size(); ++i) {
        if (!(config.deltas[i] < config.deltas[i - 1])) {
            throw std::invalid_argument("run_sweep: deltas must be strictly decreasing");
        }
    }
    SweepResult result;
    result.config = config;
    std::vector<std::pair<double, double>> fit_points;
    for (const double delta : config.deltas) {
        const double value = evaluate(config, delta);
        result.points.push_back({delta, value});
        fit_points.emplace_back(delta, value);
    }
    result.fit = fit_loglog(fit_points);
    attach_prediction(result);
    return result;
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}
} // namespace

std::string to_csv(std::span<const SweepResult> results) {
    std::string out = "quantity,alpha,p,theta0,delta,value,slope,predicted,r2,citation\n";
    for (const SweepResult& r : results) {
        for (const SweepPoint& pt : r.points) {
            out += quantity_name(r.config.quantity);
            out += ',';
            out += fmt(r.config.params.alpha);
            out += ',';
            out += fmt(r.config.params.p);
            out += ',';
            out += fmt(r.config.params.theta0);
            out += ',';
            out += fmt(pt.delta);
            out += ',';
            out += fmt(pt.value);
            out += ',';
            out += fmt(r.fit.slope);
            out += ',';
            out += r.predicted ? fmt(*r.predicted) : std::string();
            out += ',';
            out += fmt(r.fit.r2);
            out += ",\"";
            out += r.citation;
            out += "\"\n";
        }
    }
    return out;
}

void write_csv(const std::string& path, std::span<const SweepResult> results) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << to_csv(results);
}

std::string to_json(std::span<const SweepResult> results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepResult& r : results) {
        nlohmann::json points = nlohmann::json::array();
        for (const SweepPoint& pt : r.points) points.push_back({{"delta", pt.delta}, {"value", pt.value}});
        nlohmann::json deltas = nlohmann::json::array();
        for (const double d : r.config.deltas) deltas.push_back(d);
        nlohmann::json entry = {
            {"quantity", quantity_name(r.config.quantity)},
            {"params",
             {{"alpha", r.config.params.alpha},
              {"p", r.config.params.p},
              {"theta0", r.config.params.theta0},
              {"plank_c", r.config.params.plank_c},
              {"spread", r.config.params.spread},
              {"region_radius", r.config.params.region_radius}}},
            {"deltas", deltas},
            {"points", points},
            {"slope", r.fit.slope},
            {"intercept", r.fit.intercept},
            {"r2", r.fit.r2},
            {"citation", r.citation},
        };
        if (r.predicted) entry["predicted"] = *r.predicted;
        arr.push_back(entry);
    }
    return arr.dump(2);
}

} // namespace kakeya
