#include "mbp/cache.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace mbp {

using nlohmann::json;

namespace {

std::string canonical_params(const BarrierGeometry& geom, const SpectrumConfig& config) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "L=%.17g;N=%s;c=%.17g;v=%.17g;C=%.17g;emin=%.17g;esplit=%.17g;"
                  "dk=%.17g;dedup=%.17g;rtol=%.17g;floor=%.17g;sel=%d;resde=%.17g",
                  geom.total_length, geom.barriers.str().c_str(), geom.spacing_ratio,
                  geom.barrier_height, config.boundary_half_width, config.e_min, config.e_split,
                  config.scan_dk, config.dedup_dk, config.residual_rel_tol,
                  config.residual_abs_floor, int(config.selection), config.resolution_de);
    return buf;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::filesystem::path cache_file(const std::filesystem::path& dir, const std::string& key) {
    return dir / ("spectrum-" + key + ".json");
}

} // namespace

std::string spectrum_cache_key(const BarrierGeometry& geom, const SpectrumConfig& config) {
    return fnv1a_hex(canonical_params(geom, config));
}

std::optional<EnergySpectrum> load_cached_spectrum(const std::filesystem::path& dir,
                                                   const BarrierGeometry& geom,
                                                   const SpectrumConfig& config,
                                                   std::string* warning) {
    const auto path = cache_file(dir, spectrum_cache_key(geom, config));
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        json doc = json::parse(in);
        if (doc.at("params").get<std::string>() != canonical_params(geom, config)) {
            if (warning) *warning = "cache key collision at " + path.string() + "; recomputing";
            return std::nullopt;
        }
        EnergySpectrum spec;
        spec.geometry = geom;
        spec.config = config;
        spec.levels = doc.at("levels").get<std::vector<double>>();
        spec.tail.boundary_half_width = doc.at("tail").at("boundary_half_width").get<double>();
        spec.tail.start_index = doc.at("tail").at("start_index").get<long>();
        return spec;
    } catch (const std::exception& e) {
        if (warning) *warning = "corrupt cache file " + path.string() + " (" + e.what() + "); recomputing";
        return std::nullopt;
    }
}

void store_cached_spectrum(const std::filesystem::path& dir, const EnergySpectrum& spec) {
    std::filesystem::create_directories(dir);
    const std::string key = spectrum_cache_key(spec.geometry, spec.config);
    json doc;
    doc["params"] = canonical_params(spec.geometry, spec.config);
    doc["levels"] = spec.levels;
    doc["tail"] = {{"boundary_half_width", spec.tail.boundary_half_width},
                   {"start_index", spec.tail.start_index}};
    const auto final_path = cache_file(dir, key);
    const auto tmp_path = final_path.string() + ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp_path);
        out << doc.dump(1);
    }
    std::filesystem::rename(tmp_path, final_path);
}

EnergySpectrum cached_find_levels(const std::filesystem::path& dir, const BarrierGeometry& geom,
                                  const SpectrumConfig& config, std::string* warning) {
    if (auto hit = load_cached_spectrum(dir, geom, config, warning)) return *hit;
    EnergySpectrum spec = find_levels(geom, config);
    store_cached_spectrum(dir, spec);
    return spec;
}

} // namespace mbp
