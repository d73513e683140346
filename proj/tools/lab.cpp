// Scratch calibration driver (not part of the deliverable build).
#include <cstdio>
#include <cstring>

#include "mbp/analysis.hpp"
#include "mbp/oracle.hpp"
#include "mbp/spectrum.hpp"
#include "mbp/thermo.hpp"

using namespace mbp;

static void spectrum_stats(long n, double c, double de, LevelSelection sel, double e_cut) {
    const auto geom = make_geometry(20, n < 0 ? BarrierCount::infinite() : BarrierCount::finite(n),
                                    c, 60);
    SpectrumConfig cfg;
    cfg.selection = sel;
    cfg.resolution_de = de;
    RootFindReport rep;
    const auto spec = find_levels(geom, cfg, &rep, 4);
    long below = 0;
    for (double e : spec.levels)
        if (e < e_cut) ++below;
    std::printf("N=%ld c=%g de=%g sel=%d: total=%zu below%g=%ld brackets=%zu merged=%zu dropped=%zu rej=%zu\n",
                n, c, de, int(sel), spec.levels.size(), e_cut, below, rep.candidate_brackets,
                rep.merged_pairs, rep.dropped_grazing, rep.rejected_candidates);
}

int main(int argc, char** argv) {
    if (argc < 2) return 1;
    if (!std::strcmp(argv[1], "counts")) {
        const double de = argc > 2 ? std::atof(argv[2]) : 0.1;
        spectrum_stats(6, 1.5, de, LevelSelection::ResolvedOnly, 60);
        spectrum_stats(6, 15, de, LevelSelection::ResolvedOnly, 60);
        spectrum_stats(6, 1.5, de, LevelSelection::Complete, 60);
        spectrum_stats(6, 15, de, LevelSelection::Complete, 60);
    } else if (!std::strcmp(argv[1], "ch300")) {
        const double de = argc > 2 ? std::atof(argv[2]) : 0.1;
        for (auto [n, c] : {std::pair<long, double>{6, 6}, {15, 10}}) {
            const auto geom = make_geometry(20, BarrierCount::finite(n), c, 60);
            SpectrumConfig cfg;
            cfg.resolution_de = de;
            const auto spec = find_levels(geom, cfg, nullptr, 4);
            const auto obs = observables(spec, 300.0);
            std::printf("N=%ld c=%g de=%g: levels=%zu Ch(300)=%.4f <e>=%.3f\n", n, c, de,
                        spec.levels.size(), obs.specific_heat, obs.avg_energy);
        }
    } else if (!std::strcmp(argv[1], "cinf")) {
        SpectrumConfig cfg;
        double peak = 0, peak_t = 0;
        for (double t = 1e-5; t < 0.2; t *= 1.02) {
            const auto o = c_infinity_observables(cfg, t);
            if (o.specific_heat > peak) {
                peak = o.specific_heat;
                peak_t = t;
            }
        }
        std::printf("c->inf: peak Ch=%.4f at T=%.6f, Ch(1000)=%.4f\n", peak, peak_t,
                    c_infinity_observables(cfg, 1000).specific_heat);
    } else if (!std::strcmp(argv[1], "curve")) {
        // curve N c de tmin tmax n
        const long n = std::atol(argv[2]);
        const double c = std::atof(argv[3]);
        const double de = std::atof(argv[4]);
        const auto geom = make_geometry(20, n < 0 ? BarrierCount::infinite() : BarrierCount::finite(n), c, 60);
        SpectrumConfig cfg;
        cfg.resolution_de = de;
        const auto spec = find_levels(geom, cfg, nullptr, 4);
        const auto curve = build_curve(spec, temperature_grid(std::atof(argv[5]), std::atof(argv[6]),
                                                              std::size_t(std::atol(argv[7])), true), 4);
        std::printf("# levels=%zu lowest=%.4f\n", spec.levels.size(),
                    spec.levels.empty() ? -1.0 : spec.levels.front());
        for (const auto& s : curve.samples) std::printf("%.6g %.6g\n", s.temperature, s.specific_heat);
        const auto peaks = detect_peaks(curve);
        std::fprintf(stderr, "classification=%s asymptote=%.4f\n", to_string(peaks.classification).c_str(),
                     peaks.asymptote_estimate);
        for (const auto& p : peaks.peaks)
            std::fprintf(stderr, "peak T=%.4g h=%.4g prom=%.3g\n", p.temperature, p.height, p.prominence);
    } else if (!std::strcmp(argv[1], "roots")) {
        // roots N c [emax] -> per-root table of the complete set
        const long n = std::atol(argv[2]);
        const double c = std::atof(argv[3]);
        const double emax = argc > 4 ? std::atof(argv[4]) : 1100.0;
        const auto geom = make_geometry(20, n < 0 ? BarrierCount::infinite() : BarrierCount::finite(n), c, 60);
        SpectrumConfig cfg;
        cfg.selection = LevelSelection::Complete;
        RootFindReport rep;
        find_levels(geom, cfg, &rep, 4);
        std::printf("# e branch absQ12 mult residual\n");
        for (const auto& r : rep.roots) {
            const double e = r.k * r.k;
            if (e <= emax)
                std::printf("%.9f %d %.6e %d %.3e\n", e, r.branch, r.abs_q12, r.multiplicity,
                            r.abs_residual);
        }
    } else if (!std::strcmp(argv[1], "levels")) {
        // levels N c de [emax]
        const long n = std::atol(argv[2]);
        const double c = std::atof(argv[3]);
        const double de = std::atof(argv[4]);
        const double emax = argc > 5 ? std::atof(argv[5]) : 60.0;
        const auto geom = make_geometry(20, n < 0 ? BarrierCount::infinite() : BarrierCount::finite(n), c, 60);
        SpectrumConfig cfg;
        cfg.resolution_de = de;
        const auto spec = find_levels(geom, cfg, nullptr, 4);
        for (double e : spec.levels)
            if (e <= emax) std::printf("%.6f\n", e);
    }
    return 0;
}
