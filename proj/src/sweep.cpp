#include "mbp/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "mbp/svg.hpp"

namespace mbp {

using nlohmann::json;

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string ratio_tag(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", c);
    return buf;
}

void SweepPlan::validate() const {
    if (cases.empty()) throw ValidationError("sweep plan has no (N, c) cases");
    if (temperatures.count < 2) throw ValidationError("temperature grid is empty");
    if (out_dir.empty()) throw ValidationError("sweep needs an output directory");
    spectrum.validate();
    for (const SweepCase& sc : cases)
        make_geometry(total_length, sc.barriers, sc.spacing_ratio, barrier_height);
    if (format != "csv" && format != "json")
        throw ValidationError("curve format must be csv or json");
}

void write_curve_csv(const std::filesystem::path& path, const ThermoCurve& curve) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << "T,avg_energy,specific_heat,entropy,free_energy\n";
    for (const auto& s : curve.samples)
        out << g17(s.temperature) << ',' << g17(s.avg_energy) << ',' << g17(s.specific_heat)
            << ',' << g17(s.entropy) << ',' << g17(s.free_energy) << '\n';
}

void write_curve_json(const std::filesystem::path& path, const ThermoCurve& curve) {
    json doc;
    doc["label"] = curve.label;
    doc["barriers"] = curve.barriers;
    doc["spacing_ratio"] = curve.spacing_ratio;
    json rows = json::array();
    for (const auto& s : curve.samples)
        rows.push_back({{"T", s.temperature},
                        {"avg_energy", s.avg_energy},
                        {"specific_heat", s.specific_heat},
                        {"entropy", s.entropy},
                        {"free_energy", s.free_energy}});
    doc["samples"] = std::move(rows);
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << doc.dump(1) << '\n';
}

ThermoCurve read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path.string());
    ThermoCurve curve;
    curve.label = path.stem().string();
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        ThermoSample s;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &s.temperature, &s.avg_energy,
                        &s.specific_heat, &s.entropy, &s.free_energy) == 5)
            curve.samples.push_back(s);
    }
    if (curve.samples.empty()) throw ValidationError("no samples in " + path.string());
    return curve;
}

namespace {

json analyze_curve(const ThermoCurve& curve) {
    json entry;
    entry["barriers"] = curve.barriers;
    entry["spacing_ratio"] = curve.spacing_ratio;
    const PeakReport peaks = detect_peaks(curve);
    json jp = json::array();
    for (const Peak& p : peaks.peaks)
        jp.push_back({{"T", p.temperature}, {"height", p.height}, {"prominence", p.prominence}});
    entry["peaks"] = std::move(jp);
    entry["classification"] = to_string(peaks.classification);
    entry["asymptote"] = peaks.asymptote_estimate;
    if (peaks.classification != CurveShape::NoPeak) {
        try {
            const double t_c = locate_critical_temperature(curve);
            const CriticalFit fit = fit_critical_exponent(curve, t_c);
            entry["critical_fit"] = {{"T_c", fit.t_c},
                                     {"A", fit.amplitude_a},
                                     {"B", fit.amplitude_b},
                                     {"chi", fit.chi},
                                     {"epsilon_max", fit.epsilon_max},
                                     {"rms_residual", fit.rms_residual},
                                     {"chi_within_half_band", std::abs(fit.chi - 0.5) <= 0.1}};
        } catch (const std::exception& e) {
            entry["critical_fit"] = {{"error", e.what()}};
        }
    }
    return entry;
}

} // namespace

SweepResult run_sweep(const SweepPlan& plan) {
    plan.validate();
    std::filesystem::create_directories(plan.out_dir);
    std::filesystem::path cache_dir =
        plan.cache_dir.empty() ? plan.out_dir / "spectrum-cache" : plan.cache_dir;

    SweepResult result;
    result.curves.resize(plan.cases.size());
    std::vector<std::filesystem::path> curve_files(plan.cases.size());
    const std::vector<double> temps = plan.temperatures.build();

    std::mutex warn_mutex;
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= plan.cases.size()) return;
            try {
                const SweepCase& sc = plan.cases[i];
                const BarrierGeometry geom = make_geometry(plan.total_length, sc.barriers,
                                                           sc.spacing_ratio, plan.barrier_height);
                std::string warning;
                const EnergySpectrum spec =
                    cached_find_levels(cache_dir, geom, plan.spectrum, &warning);
                const ThermoCurve curve = build_curve(spec, temps);
                const std::string name = "curve_N" + sc.barriers.str() + "_c" +
                                         ratio_tag(sc.spacing_ratio) +
                                         (plan.format == "csv" ? ".csv" : ".json");
                const auto path = plan.out_dir / name;
                if (plan.format == "csv")
                    write_curve_csv(path, curve);
                else
                    write_curve_json(path, curve);
                result.curves[i] = curve;
                curve_files[i] = path;
                if (!warning.empty()) {
                    std::lock_guard<std::mutex> lock(warn_mutex);
                    result.warnings.push_back(warning);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(warn_mutex);
                errors.push_back(e.what());
                return;
            }
        }
    };

    int jobs = plan.parallelism > 0 ? plan.parallelism
                                    : int(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min<int>(jobs, int(plan.cases.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!errors.empty()) throw NumericalError("sweep case failed: " + errors.front());
    result.files = curve_files;

    // Group by barrier count for family analysis and overlay plots.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < plan.cases.size(); ++i)
        groups[plan.cases[i].barriers.str()].push_back(i);

    json analysis;
    analysis["curves"] = json::array();
    for (std::size_t i = 0; i < result.curves.size(); ++i) {
        json entry = analyze_curve(result.curves[i]);
        entry["file"] = curve_files[i].filename().string();
        analysis["curves"].push_back(std::move(entry));
    }
    analysis["families"] = json::array();
    for (const auto& [tag, idx] : groups) {
        if (idx.size() < 2) continue;
        std::vector<ThermoCurve> family;
        for (std::size_t i : idx) family.push_back(result.curves[i]);
        const FamilyReport rep = classify_family(family);
        json fam;
        fam["barriers"] = tag;
        json dense = json::array(), outliers = json::array();
        for (std::size_t j : rep.dense_batch) dense.push_back(family[j].spacing_ratio);
        for (std::size_t j : rep.outliers) outliers.push_back(family[j].spacing_ratio);
        fam["dense_batch_c"] = std::move(dense);
        fam["outlier_c"] = std::move(outliers);
        fam["c_threshold"] = rep.c_threshold;
        analysis["families"].push_back(std::move(fam));
    }
    {
        const auto path = plan.out_dir / "analysis.json";
        std::ofstream out(path);
        out << analysis.dump(1) << '\n';
        result.files.push_back(path);
    }

    if (plan.plot) {
        for (const auto& [tag, idx] : groups) {
            std::vector<ThermoCurve> family;
            for (std::size_t i : idx) family.push_back(result.curves[i]);
            const auto path = plan.out_dir / ("overlay_N" + tag + ".svg");
            write_overlay_svg(path, family, plan.temperatures.log_spaced,
                              "specific heat, N=" + tag);
            result.files.push_back(path);
        }
    }
    return result;
}

SweepPlan figure_plan(int figure_id, const std::filesystem::path& out_dir) {
    SweepPlan plan;
    plan.out_dir = out_dir;
    plan.plot = true;

    const auto range_cases = [&](BarrierCount n, double c0, double c1, double step) {
        for (long i = 0;; ++i) {
            const double c = c0 + double(i) * step;
            if (c > c1 + 0.5 * step) break;
            plan.cases.push_back({n, c});
        }
    };

    switch (figure_id) {
        case 1: // N=6, c = 2..39, T in [0.1, 35]
            range_cases(BarrierCount::finite(6), 2, 39, 1);
            plan.temperatures = {0.1, 35.0, 400, true};
            break;
        case 2: // N=6, c = 0.3..1.7 in steps of 0.1
            range_cases(BarrierCount::finite(6), 0.3, 1.7, 0.1);
            plan.temperatures = {0.1, 35.0, 400, true};
            break;
        case 3: // N=15, c = 2..40
            range_cases(BarrierCount::finite(15), 2, 40, 1);
            plan.temperatures = {0.1, 35.0, 400, true};
            break;
        case 4: // N=35, c = 2..40, T in [0.1, 100]
            range_cases(BarrierCount::finite(35), 2, 40, 1);
            plan.temperatures = {0.1, 100.0, 400, true};
            break;
        case 5: // dense limit, c = 200
            plan.cases.push_back({BarrierCount::infinite(), 200});
            plan.temperatures = {0.1, 100.0, 600, true};
            break;
        case 6: // dense limit, c = 0.3..3.2
            range_cases(BarrierCount::infinite(), 0.3, 3.2, 0.1);
            plan.temperatures = {0.1, 100.0, 600, true};
            break;
        case 7: // dense limit, c = 2..41
            range_cases(BarrierCount::infinite(), 2, 41, 1);
            plan.temperatures = {0.1, 35.0, 400, true};
            break;
        default:
            throw ValidationError("unknown figure " + std::to_string(figure_id) +
                                  " (valid: 1..7)");
    }
    return plan;
}

} // namespace mbp
