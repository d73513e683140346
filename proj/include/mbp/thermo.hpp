#pragma once

#include <vector>

#include "mbp/spectrum.hpp"

namespace mbp {

// Boltzmann sums at one inverse temperature. To keep the sums finite at low
// temperature every weight is taken relative to the lowest level:
//   z  = sum exp(-beta (e_i - e_ref))
//   e1 = sum e_i   exp(-beta (e_i - e_ref))
//   e2 = sum e_i^2 exp(-beta (e_i - e_ref))
// Ratios e1/z and e2/z equal the unshifted ones; ln Z = ln z - beta e_ref.
struct PartitionSums {
    double beta = 0.0;
    double z = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double reference_energy = 0.0;
    long tail_terms_used = 0;

    double ln_z() const;
};

/// Numeric levels plus the analytic tail, truncated once a tail term's
/// exponent drops 40 below the reference (relative weight < 1e-17).
PartitionSums partition_sums(const EnergySpectrum& spec, double beta);

struct Observables {
    double avg_energy = 0.0;
    double specific_heat = 0.0;
    double entropy = 0.0;
    double free_energy = 0.0;
};

/// <e> = E1/Z, C_h from the fluctuation form (E2/Z - <e>^2)/T^2,
/// F = -T ln Z, S = (<e> - F)/T.
Observables observables(const EnergySpectrum& spec, double temperature);

/// Closed-form dense-spacing limit: levels (pi n / C)^2 for all n >= 0.
/// Independent of N and of the barrier height.
Observables c_infinity_observables(const SpectrumConfig& config, double temperature);

struct ThermoSample {
    double temperature = 0.0;
    double avg_energy = 0.0;
    double specific_heat = 0.0;
    double entropy = 0.0;
    double free_energy = 0.0;
};

struct ThermoCurve {
    std::string label;       // provenance, e.g. "N=6 c=3"
    double spacing_ratio = 0.0;
    std::string barriers;    // "6" or "inf"; empty for synthetic curves
    std::vector<ThermoSample> samples;
};

/// One observables evaluation per grid temperature (grid must increase).
ThermoCurve build_curve(const EnergySpectrum& spec, const std::vector<double>& temperatures,
                        int jobs = 1);

/// Same protocol for the dense-spacing closed form.
ThermoCurve build_c_infinity_curve(const SpectrumConfig& config,
                                   const std::vector<double>& temperatures, int jobs = 1);

/// count log- or linearly spaced temperatures on [t_min, t_max].
std::vector<double> temperature_grid(double t_min, double t_max, std::size_t count,
                                     bool log_spaced = true);

} // namespace mbp
