#include "mbp/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace mbp {

namespace {

constexpr double kTailCutoffExponent = 40.0;
constexpr long kTailTermCap = 10'000'000;

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Core accumulation shared by the spectrum-backed and closed-form paths.
// Numeric levels first (they carry the large weights), then tail terms in
// descending weight order until the cutoff.
PartitionSums accumulate(const std::vector<double>& levels, const TailDescriptor& tail,
                         long tail_from, double beta) {
    if (!(beta > 0.0))
        throw ValidationError("inverse temperature must be positive");

    double e_ref = levels.empty() ? tail.energy(tail_from) : levels.front();

    KahanSum z, e1, e2;
    for (double e : levels) {
        const double x = beta * (e - e_ref);
        if (x > 700.0) continue; // below the double-precision floor
        const double w = std::exp(-x);
        z.add(w);
        e1.add(e * w);
        e2.add(e * e * w);
    }

    long used = 0;
    for (long n = tail_from;; ++n) {
        if (n - tail_from >= kTailTermCap)
            throw NumericalError(
                "analytic tail needs more than 1e7 terms at this temperature; "
                "use a larger beta or the asymptotic form");
        const double e = tail.energy(n);
        const double x = beta * (e - e_ref);
        if (x > kTailCutoffExponent) break;
        const double w = std::exp(-x);
        z.add(w);
        e1.add(e * w);
        e2.add(e * e * w);
        ++used;
    }

    PartitionSums out;
    out.beta = beta;
    out.z = z.sum;
    out.e1 = e1.sum;
    out.e2 = e2.sum;
    out.reference_energy = e_ref;
    out.tail_terms_used = used;
    if (!(out.z > 0.0))
        throw NumericalError("partition sum vanished; spectrum is empty at this temperature");
    return out;
}

Observables observables_from(const PartitionSums& ps, double temperature) {
    Observables o;
    o.avg_energy = ps.e1 / ps.z;
    const double variance = ps.e2 / ps.z - o.avg_energy * o.avg_energy;
    o.specific_heat = std::max(0.0, variance) / (temperature * temperature);
    o.free_energy = -temperature * ps.ln_z();
    o.entropy = (o.avg_energy - o.free_energy) / temperature;
    return o;
}

template <typename Fn>
ThermoCurve curve_over(const std::vector<double>& temperatures, int jobs, Fn&& evaluate) {
    for (std::size_t i = 1; i < temperatures.size(); ++i)
        if (!(temperatures[i] > temperatures[i - 1]))
            throw ValidationError("temperature grid must be strictly increasing");
    if (!temperatures.empty() && !(temperatures.front() > 0.0))
        throw ValidationError("temperatures must be positive");

    ThermoCurve curve;
    curve.samples.resize(temperatures.size());
    const auto worker = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < temperatures.size(); i += stride) {
            const double t = temperatures[i];
            const Observables o = evaluate(t);
            curve.samples[i] = {t, o.avg_energy, o.specific_heat, o.entropy, o.free_energy};
        }
    };
    const int n = std::max(1, jobs);
    if (n == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker, std::size_t(t), std::size_t(n));
        for (auto& th : pool) th.join();
    }
    return curve;
}

} // namespace

double PartitionSums::ln_z() const { return std::log(z) - beta * reference_energy; }

PartitionSums partition_sums(const EnergySpectrum& spec, double beta) {
    return accumulate(spec.levels, spec.tail, spec.tail.start_index, beta);
}

Observables observables(const EnergySpectrum& spec, double temperature) {
    if (!(temperature > 0.0))
        throw ValidationError("temperature must be positive");
    return observables_from(partition_sums(spec, 1.0 / temperature), temperature);
}

Observables c_infinity_observables(const SpectrumConfig& config, double temperature) {
    if (!(temperature > 0.0))
        throw ValidationError("temperature must be positive");
    const TailDescriptor tail{config.boundary_half_width, 0};
    const PartitionSums ps = accumulate({}, tail, 0, 1.0 / temperature);
    return observables_from(ps, temperature);
}

ThermoCurve build_curve(const EnergySpectrum& spec, const std::vector<double>& temperatures,
                        int jobs) {
    ThermoCurve curve =
        curve_over(temperatures, jobs, [&](double t) { return observables(spec, t); });
    curve.spacing_ratio = spec.geometry.spacing_ratio;
    curve.barriers = spec.geometry.barriers.str();
    curve.label = "N=" + curve.barriers + " c=" + std::to_string(spec.geometry.spacing_ratio);
    return curve;
}

ThermoCurve build_c_infinity_curve(const SpectrumConfig& config,
                                   const std::vector<double>& temperatures, int jobs) {
    ThermoCurve curve = curve_over(temperatures, jobs,
                                   [&](double t) { return c_infinity_observables(config, t); });
    curve.label = "dense-spacing limit";
    return curve;
}

std::vector<double> temperature_grid(double t_min, double t_max, std::size_t count,
                                     bool log_spaced) {
    if (!(t_min > 0.0) || !(t_max > t_min) || count < 2)
        throw ValidationError("temperature grid needs 0 < t_min < t_max and count >= 2");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = double(i) / double(count - 1);
        out[i] = log_spaced ? t_min * std::pow(t_max / t_min, f) : t_min + f * (t_max - t_min);
    }
    out.front() = t_min;
    out.back() = t_max;
    return out;
}

} // namespace mbp
