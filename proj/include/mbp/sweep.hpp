#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mbp/analysis.hpp"
#include "mbp/cache.hpp"
#include "mbp/thermo.hpp"

namespace mbp {

struct SweepCase {
    BarrierCount barriers = BarrierCount::finite(2);
    double spacing_ratio = 1.0;
};

struct TemperatureGridSpec {
    double t_min = 0.1;
    double t_max = 100.0;
    std::size_t count = 600;
    bool log_spaced = true;

    std::vector<double> build() const { return temperature_grid(t_min, t_max, count, log_spaced); }
};

struct SweepPlan {
    std::vector<SweepCase> cases;
    double total_length = 20.0;
    double barrier_height = 60.0;
    TemperatureGridSpec temperatures;
    SpectrumConfig spectrum;
    std::filesystem::path out_dir;
    std::filesystem::path cache_dir; // empty: out_dir / "spectrum-cache"
    int parallelism = 0;             // 0: hardware concurrency
    std::string format = "csv";      // curve files: "csv" or "json"
    bool plot = false;

    void validate() const;
};

struct SweepResult {
    std::vector<std::filesystem::path> files;
    std::vector<ThermoCurve> curves; // in case order
    std::vector<std::string> warnings;
};

/// Runs every (N, c) case: spectrum (cached), curve file, one family analysis
/// JSON, optional overlay SVG per N. Deterministic for a fixed plan.
SweepResult run_sweep(const SweepPlan& plan);

/// Preset curve families 1..7 (the published figure protocols) rooted at out_dir.
SweepPlan figure_plan(int figure_id, const std::filesystem::path& out_dir);

void write_curve_csv(const std::filesystem::path& path, const ThermoCurve& curve);
void write_curve_json(const std::filesystem::path& path, const ThermoCurve& curve);
ThermoCurve read_curve_csv(const std::filesystem::path& path);

/// Compact value formatting for file names ("3", "0.3", "inf").
std::string ratio_tag(double c);

} // namespace mbp
