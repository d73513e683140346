#pragma once

#include <filesystem>
#include <vector>

#include "mbp/thermo.hpp"

namespace mbp {

/// Self-contained overlay plot of specific-heat curves, one polyline per
/// curve, with a legend. Deterministic output for identical input.
void write_overlay_svg(const std::filesystem::path& path,
                       const std::vector<ThermoCurve>& curves, bool log_temperature,
                       const std::string& title);

} // namespace mbp
