#pragma once

#include <string>
#include <vector>

#include "mbp/thermo.hpp"

namespace mbp {

enum class CurveShape { NoPeak, DebyeLike, SinglePeak, DoublePeak };

std::string to_string(CurveShape shape);

struct Peak {
    double temperature = 0.0;
    double height = 0.0;
    double prominence = 0.0; // (peak - higher adjacent valley) / peak
};

struct PeakReport {
    std::vector<Peak> peaks; // sorted by temperature
    CurveShape classification = CurveShape::NoPeak;
    double asymptote_estimate = 0.0; // C_h at the largest sampled T
};

/// Local maxima of the specific-heat curve with relative prominence at least
/// prominence_min. Needs >= 20 samples.
PeakReport detect_peaks(const ThermoCurve& curve, double prominence_min = 0.05);

struct CriticalFit {
    double t_c = 0.0;
    double amplitude_a = 0.0; // C_h(eps) = A + B sqrt(eps)
    double amplitude_b = 0.0;
    double chi = 0.0;          // critical exponent estimate
    double epsilon_max = 0.0;  // fitted window ((T - T_c)/T_c <= epsilon_max)
    double rms_residual = 0.0;
};

// Least-squares fit of C_h = A + B eps^(1/2) just above T_c, plus the
// exponent chi = 1 + d ln|dC_h/dT| / d ln eps evaluated by centered
// differences on a uniformly resampled window. A square-root curve gives
// chi = 1/2, a straight line gives chi = 1.
CriticalFit fit_critical_exponent(const ThermoCurve& curve, double t_c,
                                  double epsilon_max = 0.1);

/// Grid argmax of C_h refined by 3-point parabolic interpolation.
double locate_critical_temperature(const ThermoCurve& curve);

struct FamilyReport {
    std::vector<std::size_t> dense_batch; // indices into the input curves
    std::vector<std::size_t> outliers;
    double c_threshold = 0.0; // smallest spacing ratio inside the dense batch
};

/// Splits a family of curves (one N, many c) into the dense batch whose
/// members agree pairwise within max_relative_deviation over the upper half
/// of the temperature grid, and the outliers. Order-independent.
FamilyReport classify_family(const std::vector<ThermoCurve>& curves,
                             double max_relative_deviation = 0.03);

} // namespace mbp
