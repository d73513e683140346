#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mbp/spectrum.hpp"

namespace mbp {

/// Stable content key of everything a spectrum depends on.
std::string spectrum_cache_key(const BarrierGeometry& geom, const SpectrumConfig& config);

/// Cache lookup; corrupted or mismatched files count as misses.
std::optional<EnergySpectrum> load_cached_spectrum(const std::filesystem::path& dir,
                                                   const BarrierGeometry& geom,
                                                   const SpectrumConfig& config,
                                                   std::string* warning = nullptr);

/// Atomic write (temp file + rename) of a computed spectrum.
void store_cached_spectrum(const std::filesystem::path& dir, const EnergySpectrum& spec);

/// Cached front end to find_levels.
EnergySpectrum cached_find_levels(const std::filesystem::path& dir, const BarrierGeometry& geom,
                                  const SpectrumConfig& config, std::string* warning = nullptr);

} // namespace mbp
