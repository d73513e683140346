#include "mbp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mbp {

std::string to_string(CurveShape shape) {
    switch (shape) {
        case CurveShape::NoPeak: return "no-peak";
        case CurveShape::DebyeLike: return "debye-like";
        case CurveShape::SinglePeak: return "single-peak";
        case CurveShape::DoublePeak: return "double-peak";
    }
    return "?";
}

PeakReport detect_peaks(const ThermoCurve& curve, double prominence_min) {
    const auto& s = curve.samples;
    if (s.size() < 20)
        throw ValidationError("peak detection needs at least 20 curve samples");

    PeakReport report;
    report.asymptote_estimate = s.back().specific_heat;

    std::vector<std::size_t> peak_idx;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double y = s[i].specific_heat;
        if (!(y > s[i - 1].specific_heat) || !(y > s[i + 1].specific_heat)) continue;
        // Valley on each side: minimum until the curve next exceeds the peak.
        double left = y, right = y;
        for (std::size_t j = i; j-- > 0;) {
            left = std::min(left, s[j].specific_heat);
            if (s[j].specific_heat > y) break;
        }
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            right = std::min(right, s[j].specific_heat);
            if (s[j].specific_heat > y) break;
        }
        const double higher_valley = std::max(left, right);
        const double prominence = y > 0.0 ? (y - higher_valley) / y : 0.0;
        if (prominence >= prominence_min) {
            report.peaks.push_back({s[i].temperature, y, prominence});
            peak_idx.push_back(i);
        }
    }

    if (report.peaks.empty()) {
        report.classification = CurveShape::NoPeak;
    } else if (report.peaks.size() >= 2) {
        report.classification = CurveShape::DoublePeak;
    } else {
        // Debye-like: past the single peak the curve settles onto its
        // asymptote without re-rising by more than a small slack.
        const double slack = 0.05 * report.peaks[0].height;
        bool monotone = true;
        double running_min = s[peak_idx[0]].specific_heat;
        for (std::size_t j = peak_idx[0] + 1; j < s.size(); ++j) {
            running_min = std::min(running_min, s[j].specific_heat);
            if (s[j].specific_heat > running_min + slack &&
                s[j].specific_heat > report.asymptote_estimate + slack) {
                monotone = false;
                break;
            }
        }
        report.classification = monotone ? CurveShape::DebyeLike : CurveShape::SinglePeak;
    }
    return report;
}

double locate_critical_temperature(const ThermoCurve& curve) {
    const auto& s = curve.samples;
    if (s.size() < 3) throw ValidationError("curve too short");
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].specific_heat > s[best].specific_heat) best = i;
    if (best == 0 || best + 1 == s.size()) return s[best].temperature;
    const double y0 = s[best - 1].specific_heat, y1 = s[best].specific_heat,
                 y2 = s[best + 1].specific_heat;
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom == 0.0) return s[best].temperature;
    const double shift = 0.5 * (y0 - y2) / denom; // in grid cells, |shift| <= 1
    const double t_lo = s[best - 1].temperature, t_mid = s[best].temperature,
                 t_hi = s[best + 1].temperature;
    return shift >= 0.0 ? t_mid + shift * (t_hi - t_mid) : t_mid - shift * (t_lo - t_mid);
}

namespace {

double interpolate_ch(const ThermoCurve& curve, double t) {
    const auto& s = curve.samples;
    auto it = std::lower_bound(s.begin(), s.end(), t, [](const ThermoSample& a, double x) {
        return a.temperature < x;
    });
    if (it == s.begin()) return it->specific_heat;
    if (it == s.end()) return s.back().specific_heat;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double f = (t - lo.temperature) / (hi.temperature - lo.temperature);
    return lo.specific_heat + f * (hi.specific_heat - lo.specific_heat);
}

} // namespace

CriticalFit fit_critical_exponent(const ThermoCurve& curve, double t_c, double epsilon_max) {
    if (!(t_c > 0.0) || !(epsilon_max > 0.0))
        throw ValidationError("need positive T_c and epsilon window");
    std::size_t in_window = 0;
    for (const auto& smp : curve.samples) {
        const double eps = (smp.temperature - t_c) / t_c;
        if (eps > 0.0 && eps <= epsilon_max) ++in_window;
    }
    if (in_window < 10 && curve.samples.size() < 10)
        throw ValidationError("too few samples above T_c for the critical fit");

    const std::size_t m = std::max<std::size_t>(10, in_window);
    std::vector<double> eps(m), ch(m);
    for (std::size_t i = 0; i < m; ++i) {
        eps[i] = epsilon_max * double(i + 1) / double(m);
        ch[i] = interpolate_ch(curve, t_c * (1.0 + eps[i]));
    }

    // Normal equations for C_h = A + B sqrt(eps).
    double s1 = double(m), sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::sqrt(eps[i]);
        sx += x;
        sxx += x * x;
        sy += ch[i];
        sxy += x * ch[i];
    }
    const double det = s1 * sxx - sx * sx;
    if (std::abs(det) < 1e-30) throw ValidationError("degenerate critical-fit window");
    CriticalFit fit;
    fit.t_c = t_c;
    fit.epsilon_max = epsilon_max;
    fit.amplitude_a = (sy * sxx - sx * sxy) / det;
    fit.amplitude_b = (s1 * sxy - sx * sy) / det;

    double ss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ch[i] - (fit.amplitude_a + fit.amplitude_b * std::sqrt(eps[i]));
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / double(m));

    // chi = 1 + slope of ln|dC_h/dT| against ln(eps), centered differences.
    double lx_s = 0, ly_s = 0, lxx = 0, lxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double dch = (ch[i + 1] - ch[i - 1]) / (t_c * (eps[i + 1] - eps[i - 1]));
        if (!(std::abs(dch) > 0.0) || !std::isfinite(dch)) continue;
        const double lx = std::log(eps[i]);
        const double ly = std::log(std::abs(dch));
        lx_s += lx;
        ly_s += ly;
        lxx += lx * lx;
        lxy += lx * ly;
        ++used;
    }
    if (used < 3) throw ValidationError("derivative vanished over the critical-fit window");
    const double d2 = double(used) * lxx - lx_s * lx_s;
    fit.chi = 1.0 + (double(used) * lxy - lx_s * ly_s) / d2;
    return fit;
}

FamilyReport classify_family(const std::vector<ThermoCurve>& curves,
                             double max_relative_deviation) {
    if (curves.size() < 2)
        throw ValidationError("family classification needs at least two curves");
    const std::size_t n_samples = curves.front().samples.size();
    for (const auto& c : curves)
        if (c.samples.size() != n_samples)
            throw ValidationError("family curves must share one temperature grid");

    const std::size_t half = n_samples / 2;
    const auto deviation = [&](std::size_t a, std::size_t b) {
        double worst = 0.0;
        for (std::size_t i = half; i < n_samples; ++i) {
            const double ya = curves[a].samples[i].specific_heat;
            const double yb = curves[b].samples[i].specific_heat;
            const double scale = std::max({std::abs(ya), std::abs(yb), 1e-12});
            worst = std::max(worst, std::abs(ya - yb) / scale);
        }
        return worst;
    };

    // Grow the batch from the largest spacing ratio downward; membership
    // requires closeness to every current member, so the result does not
    // depend on the input order.
    std::vector<std::size_t> order(curves.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (curves[a].spacing_ratio != curves[b].spacing_ratio)
            return curves[a].spacing_ratio > curves[b].spacing_ratio;
        return curves[a].label < curves[b].label;
    });

    FamilyReport report;
    for (std::size_t idx : order) {
        bool close = true;
        for (std::size_t member : report.dense_batch)
            if (deviation(idx, member) > max_relative_deviation) {
                close = false;
                break;
            }
        if (close)
            report.dense_batch.push_back(idx);
        else
            report.outliers.push_back(idx);
    }
    if (!report.dense_batch.empty()) {
        double c_min = curves[report.dense_batch.front()].spacing_ratio;
        for (std::size_t idx : report.dense_batch)
            c_min = std::min(c_min, curves[idx].spacing_ratio);
        report.c_threshold = c_min;
    }
    std::sort(report.dense_batch.begin(), report.dense_batch.end());
    std::sort(report.outliers.begin(), report.outliers.end());
    return report;
}

} // namespace mbp
