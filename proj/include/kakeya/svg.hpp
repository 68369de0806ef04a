#pragma once

#include <string>

#include "kakeya/exponents.hpp"

namespace kakeya {

/// Writes a log-log scatter plot of the sweep points with the fitted line,
/// axis labels and the citation string. Self-contained static SVG.
void write_loglog_svg(const std::string& path, const SweepResult& result);

} // namespace kakeya
