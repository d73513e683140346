// Command-line front end: spectra, thermodynamic curves, parameter sweeps,
// curve analysis, and the preset figure families.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mbp/analysis.hpp"
#include "mbp/cache.hpp"
#include "mbp/oracle.hpp"
#include "mbp/sweep.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    double length = 20.0;
    double height = 60.0;
    std::string barriers = "6";
    std::string ratio = "3";
    std::string temps = "0.1:100:600:log";
    std::string out;
    std::string config_path;
    std::string format = "csv";
    std::string selection = "resolved";
    int jobs = 0;
    bool plot = false;
    mbp::SpectrumConfig spectrum;
};

mbp::BarrierCount parse_barriers(const std::string& text) {
    if (text == "inf" || text == "infinite") return mbp::BarrierCount::infinite();
    try {
        size_t pos = 0;
        const long n = std::stol(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return mbp::BarrierCount::finite(n);
    } catch (const mbp::ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw mbp::ValidationError("cannot parse barrier count '" + text + "' (integer or inf)");
    }
}

std::vector<mbp::BarrierCount> parse_barrier_list(const std::string& text) {
    std::vector<mbp::BarrierCount> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) out.push_back(parse_barriers(item));
    if (out.empty()) throw mbp::ValidationError("empty barrier list");
    return out;
}

std::vector<double> parse_ratios(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double start = 0, step = 0, end = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &step, &end) != 3 || step <= 0)
            throw mbp::ValidationError("ratio range must be start:step:end with step > 0");
        for (long i = 0;; ++i) {
            const double c = start + double(i) * step;
            if (c > end + 0.5 * step) break;
            out.push_back(c);
        }
    } else {
        std::string item;
        std::stringstream ss(text);
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw mbp::ValidationError("cannot parse ratio '" + item + "'");
            }
        }
    }
    if (out.empty()) throw mbp::ValidationError("empty ratio list");
    return out;
}

mbp::TemperatureGridSpec parse_temps(const std::string& text) {
    mbp::TemperatureGridSpec grid;
    char kind[16] = {0};
    unsigned long count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lu:%15s", &grid.t_min, &grid.t_max, &count, kind) != 4)
        throw mbp::ValidationError("temperature grid must be min:max:count:{lin|log}");
    grid.count = count;
    const std::string k(kind);
    if (k == "log")
        grid.log_spaced = true;
    else if (k == "lin")
        grid.log_spaced = false;
    else
        throw mbp::ValidationError("temperature spacing must be lin or log");
    return grid;
}

mbp::LevelSelection parse_selection(const std::string& text) {
    if (text == "resolved") return mbp::LevelSelection::ResolvedOnly;
    if (text == "complete") return mbp::LevelSelection::Complete;
    throw mbp::ValidationError("selection must be resolved or complete");
}

// Fields absent from the config file keep their current values.
void apply_config_file(CommonOpts& opts, const std::set<std::string>& cli_given) {
    if (opts.config_path.empty()) return;
    std::ifstream in(opts.config_path);
    if (!in) throw mbp::ValidationError("cannot read config file " + opts.config_path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const std::exception& e) {
        throw mbp::ValidationError(std::string("config file is not valid JSON: ") + e.what());
    }
    const auto want = [&](const char* cli_name, const char* key) {
        return !cli_given.count(cli_name) && doc.contains(key);
    };
    if (want("--length", "L")) opts.length = doc["L"].get<double>();
    if (want("--height", "v")) opts.height = doc["v"].get<double>();
    if (want("--boundary", "C")) opts.spectrum.boundary_half_width = doc["C"].get<double>();
    if (want("--e-split", "e_split")) opts.spectrum.e_split = doc["e_split"].get<double>();
    if (want("--e-min", "e_min")) opts.spectrum.e_min = doc["e_min"].get<double>();
    if (want("--barriers", "N")) {
        opts.barriers = doc["N"].is_string() ? doc["N"].get<std::string>()
                                             : std::to_string(doc["N"].get<long>());
    }
    if (want("--ratio", "c")) {
        opts.ratio = doc["c"].is_string() ? doc["c"].get<std::string>()
                                          : mbp::ratio_tag(doc["c"].get<double>());
    }
    if (want("--temps", "temps")) opts.temps = doc["temps"].get<std::string>();
    if (doc.contains("grids")) {
        const json& g = doc["grids"];
        if (g.contains("scan_dk")) opts.spectrum.scan_dk = g["scan_dk"].get<double>();
        if (g.contains("dedup_dk")) opts.spectrum.dedup_dk = g["dedup_dk"].get<double>();
        if (g.contains("resolution_de"))
            opts.spectrum.resolution_de = g["resolution_de"].get<double>();
        if (g.contains("selection") && !cli_given.count("--selection"))
            opts.selection = g["selection"].get<std::string>();
    }
}

std::filesystem::path cache_dir_for(const std::filesystem::path& out_dir) {
    if (const char* env = std::getenv("MULTIBARRIER_CACHE_DIR"); env && *env) return env;
    return out_dir / "spectrum-cache";
}

json spectrum_to_json(const mbp::EnergySpectrum& spec, const mbp::RootFindReport& report) {
    json doc;
    doc["levels"] = spec.levels;
    doc["tail"] = {{"boundary_half_width", spec.tail.boundary_half_width},
                   {"start_index", spec.tail.start_index},
                   {"first_energy", spec.tail.energy(spec.tail.start_index)}};
    doc["report"] = {{"grid_points", report.grid_points},
                     {"candidate_brackets", report.candidate_brackets},
                     {"refined_roots", report.refined_roots},
                     {"rejected_candidates", report.rejected_candidates},
                     {"deduplicated", report.deduplicated},
                     {"merged_pairs", report.merged_pairs},
                     {"dropped_grazing", report.dropped_grazing},
                     {"max_accepted_residual", report.max_accepted_residual},
                     {"possible_missed_roots", report.possible_missed_roots},
                     {"boundary_ratio_warning", report.boundary_ratio_warning}};
    return doc;
}

void write_text(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw mbp::ValidationError("cannot write " + out);
    f << text;
}

int run(int argc, char** argv) {
    CLI::App app{"Energy spectra and canonical thermodynamics of a 1-D multibarrier potential"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::set<std::string> given;
    const auto track = [&given](const std::string& name) {
        return [&given, name](const std::string&) { given.insert(name); };
    };

    const auto add_common = [&](CLI::App* cmd, bool with_temps) {
        cmd->add_option("--length", opts.length, "total array length L")->check(CLI::PositiveNumber);
        cmd->add_option("--barriers", opts.barriers, "barrier count N (integer or inf)")
            ->each(track("--barriers"));
        cmd->add_option("--ratio", opts.ratio,
                        "spacing-to-width ratio c (value, comma list, or start:step:end)")
            ->each(track("--ratio"));
        cmd->add_option("--height", opts.height, "barrier height v")->check(CLI::PositiveNumber);
        cmd->add_option("--boundary", opts.spectrum.boundary_half_width,
                        "periodic boundary half-width C")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--e-split", opts.spectrum.e_split,
                        "energy where the analytic tail takes over");
        cmd->add_option("--e-min", opts.spectrum.e_min, "lower edge of the numeric scan");
        cmd->add_option("--selection", opts.selection,
                        "level selection: resolved (legacy-scan emulation) or complete")
            ->each(track("--selection"));
        cmd->add_option("--scan-dk", opts.spectrum.scan_dk, "k-grid step of the eigenphase scan");
        cmd->add_option("--resolution-de", opts.spectrum.resolution_de,
                        "energy resolution emulated by resolved selection");
        cmd->add_option("--config", opts.config_path, "JSON config file");
        cmd->add_option("--out", opts.out, "output file or directory");
        cmd->add_option("--jobs", opts.jobs, "worker threads (0 = all cores)");
        cmd->add_option("--format", opts.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        if (with_temps)
            cmd->add_option("--temps", opts.temps, "temperature grid min:max:count:{lin|log}")
                ->each(track("--temps"));
        // Mark frequently-configured numeric flags for config-file precedence.
        for (const char* name : {"--length", "--height", "--boundary", "--e-split", "--e-min"})
            if (CLI::Option* o = cmd->get_option_no_throw(name))
                o->each(track(name));
    };

    CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "energy levels for one (N, c)");
    add_common(cmd_spectrum, false);

    CLI::App* cmd_curve = app.add_subcommand("curve", "thermodynamic curve for one (N, c)");
    add_common(cmd_curve, true);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "curve files for a family of (N, c)");
    add_common(cmd_sweep, true);
    cmd_sweep->add_flag("--plot", opts.plot, "also write overlay SVG plots");

    CLI::App* cmd_analyze = app.add_subcommand("analyze", "peak/critical analysis of curve CSVs");
    std::vector<std::string> analyze_inputs;
    cmd_analyze->add_option("files", analyze_inputs, "curve CSV files")->required();
    cmd_analyze->add_option("--out", opts.out, "output JSON file (default stdout)");

    CLI::App* cmd_figure =
        app.add_subcommand("reproduce-figure", "run a preset curve family (1..7)");
    int figure_id = 0;
    cmd_figure->add_option("figure", figure_id, "figure number 1..7")->required();
    cmd_figure->add_option("--out", opts.out, "output directory")->required();
    cmd_figure->add_option("--jobs", opts.jobs, "worker threads (0 = all cores)");
    cmd_figure->add_option("--scan-dk", opts.spectrum.scan_dk, "k-grid step override");
    cmd_figure->add_option("--selection", opts.selection, "resolved or complete")
        ->each(track("--selection"));

    CLI11_PARSE(app, argc, argv);

    apply_config_file(opts, given);
    opts.spectrum.selection = parse_selection(opts.selection);

    if (cmd_spectrum->parsed()) {
        const auto ratios = parse_ratios(opts.ratio);
        if (ratios.size() != 1)
            throw mbp::ValidationError("spectrum needs exactly one ratio; use sweep for families");
        const auto geom = mbp::make_geometry(opts.length, parse_barriers(opts.barriers),
                                             ratios.front(), opts.height);
        mbp::RootFindReport report;
        const auto spec = mbp::find_levels(geom, opts.spectrum, &report,
                                           opts.jobs > 0 ? opts.jobs : 1);
        if (report.boundary_ratio_warning)
            std::cerr << "warning: C/L < 4.5; periodic boundary may distort the levels\n";
        if (opts.format == "json") {
            write_text(opts.out, spectrum_to_json(spec, report).dump(1) + "\n");
        } else {
            std::string text = "energy\n";
            for (double e : spec.levels) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g\n", e);
                text += buf;
            }
            write_text(opts.out, text);
        }
        return 0;
    }

    if (cmd_curve->parsed()) {
        const auto ratios = parse_ratios(opts.ratio);
        if (ratios.size() != 1)
            throw mbp::ValidationError("curve needs exactly one ratio; use sweep for families");
        const auto geom = mbp::make_geometry(opts.length, parse_barriers(opts.barriers),
                                             ratios.front(), opts.height);
        const auto spec = mbp::find_levels(geom, opts.spectrum);
        const auto grid = parse_temps(opts.temps);
        const auto curve =
            mbp::build_curve(spec, grid.build(), opts.jobs > 0 ? opts.jobs : 1);
        if (opts.out.empty() || opts.out == "-") {
            std::ostringstream ss;
            ss << "T,avg_energy,specific_heat,entropy,free_energy\n";
            for (const auto& s : curve.samples) {
                char buf[256];
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.temperature,
                              s.avg_energy, s.specific_heat, s.entropy, s.free_energy);
                ss << buf;
            }
            write_text(opts.out, ss.str());
        } else if (opts.format == "csv") {
            mbp::write_curve_csv(opts.out, curve);
        } else {
            mbp::write_curve_json(opts.out, curve);
        }
        return 0;
    }

    if (cmd_sweep->parsed()) {
        if (opts.out.empty()) throw mbp::ValidationError("sweep needs --out directory");
        mbp::SweepPlan plan;
        plan.total_length = opts.length;
        plan.barrier_height = opts.height;
        plan.spectrum = opts.spectrum;
        plan.temperatures = parse_temps(opts.temps);
        plan.out_dir = opts.out;
        plan.cache_dir = cache_dir_for(plan.out_dir);
        plan.parallelism = opts.jobs;
        plan.format = opts.format;
        plan.plot = opts.plot;
        for (const auto& n : parse_barrier_list(opts.barriers))
            for (double c : parse_ratios(opts.ratio)) plan.cases.push_back({n, c});
        const auto result = mbp::run_sweep(plan);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << result.files.size() << " files written to " << opts.out << '\n';
        return 0;
    }

    if (cmd_analyze->parsed()) {
        json doc;
        doc["curves"] = json::array();
        std::vector<mbp::ThermoCurve> curves;
        for (const auto& path : analyze_inputs) curves.push_back(mbp::read_curve_csv(path));
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const auto peaks = mbp::detect_peaks(curves[i]);
            json entry;
            entry["file"] = analyze_inputs[i];
            entry["classification"] = mbp::to_string(peaks.classification);
            entry["asymptote"] = peaks.asymptote_estimate;
            json jp = json::array();
            for (const auto& p : peaks.peaks)
                jp.push_back(
                    {{"T", p.temperature}, {"height", p.height}, {"prominence", p.prominence}});
            entry["peaks"] = std::move(jp);
            if (peaks.classification != mbp::CurveShape::NoPeak) {
                try {
                    const double t_c = mbp::locate_critical_temperature(curves[i]);
                    const auto fit = mbp::fit_critical_exponent(curves[i], t_c);
                    entry["critical_fit"] = {{"T_c", fit.t_c},      {"A", fit.amplitude_a},
                                             {"B", fit.amplitude_b}, {"chi", fit.chi},
                                             {"rms_residual", fit.rms_residual}};
                } catch (const std::exception& e) {
                    entry["critical_fit"] = {{"error", e.what()}};
                }
            }
            doc["curves"].push_back(std::move(entry));
        }
        write_text(opts.out, doc.dump(1) + "\n");
        return 0;
    }

    if (cmd_figure->parsed()) {
        mbp::SweepPlan plan = mbp::figure_plan(figure_id, opts.out);
        plan.cache_dir = cache_dir_for(plan.out_dir);
        plan.parallelism = opts.jobs;
        plan.spectrum.scan_dk = opts.spectrum.scan_dk;
        plan.spectrum.selection = opts.spectrum.selection;
        const auto result = mbp::run_sweep(plan);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << result.files.size() << " files written to " << opts.out << '\n';
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mbp::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const mbp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
