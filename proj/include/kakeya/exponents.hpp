#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kakeya/measures.hpp"
#include "kakeya/types.hpp"

namespace kakeya {

enum class Quantity {
    frostman,       // c_alpha of the train-track measure
    energy,         // Riesz alpha-energy of the plank
    avg_norm_plane, // full-circle integral of ||pi_theta# nu||_p^p, train track
    avg_norm_line,  // arc integral of ||rho_theta# mu||_p^p, line-Knapp plank
    tube_lp,        // ||sum chi_T||_p^p / (|T| delta^2), dual train-track family
    volume_decay,   // vol(N_{4^-n}(K_n)) with delta = 4^-n
    min_gap,        // min dual direction gap of the dual family at 100 delta
};

const char* quantity_name(Quantity q);
std::optional<Quantity> quantity_from_name(const std::string& name);

struct SweepParams {
    double alpha = 2.0;
    double p = 4.0 / 3.0;
    double theta0 = 1.5707963267948966; // pi/2
    double plank_c = 0.25;
    double spread = 0.5;
    double region_radius = 2.0;
};

struct SweepConfig {
    Quantity quantity = Quantity::frostman;
    SweepParams params;
    std::vector<double> deltas; // >= 3 values, strictly decreasing
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares on (log2 delta, log2 Q). Requires >= 2 points with
/// distinct abscissae and positive values.
FitResult fit_loglog(std::span<const std::pair<double, double>> points);

struct SweepPoint {
    double delta = 0.0;
    double value = 0.0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepPoint> points;
    FitResult fit;
    std::optional<double> predicted; // exponent asserted by the scaling law
    std::string citation;            // the scaling law, or "none"
};

/// Evaluates the configured quantity at every delta, fits the log-log slope,
/// and attaches the predicted exponent where one is asserted. Deterministic.
SweepResult run_sweep(const SweepConfig& config);

/// CSV schema: quantity,alpha,p,theta0,delta,value,slope,predicted,r2,citation
/// (one row per delta; predicted column empty when there is no prediction).
std::string to_csv(std::span<const SweepResult> results);
void write_csv(const std::string& path, std::span<const SweepResult> results);
std::string to_json(std::span<const SweepResult> results);

} // namespace kakeya
