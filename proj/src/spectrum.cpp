#include "mbp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace mbp {

Mat2c array_transfer_matrix(const BarrierGeometry& geom, const WaveParams& wp) {
    if (geom.barriers.is_infinite())
        return infinite_transfer_matrix(infinite_cell(geom, wp));
    return total_transfer_matrix(geom, wp);
}

complexd quantization_residual(const BarrierGeometry& geom, const SpectrumConfig& config,
                               double energy) {
    const WaveParams wp = WaveParams::at(energy, geom);
    const Mat2c q = array_transfer_matrix(geom, wp);
    const double kc2 = 2.0 * wp.k * config.boundary_half_width;
    const complexd e2 = std::polar(1.0, kc2);
    const complexd e4 = std::polar(1.0, 2.0 * kc2);
    const complexd q22sq = q.m22 * q.m22;
    return e4 * (1.0 + q.m12 * q.m21) / q22sq - 2.0 * e2 / q.m22 + 1.0;
}

TailSequence tail_energies(const SpectrumConfig& config, long n_from) {
    if (n_from < 0)
        throw ValidationError("tail index must be non-negative");
    return TailSequence{TailDescriptor{config.boundary_half_width, config.tail_start_index()},
                        n_from};
}

namespace {

// For real e the S-matrix eigenvalues are (1 +- i|Q12|)/Q22, so the two
// quantization phase functions are
//   Phi_±(k) = 2kC ± atan|Q12| - arg Q22,
// and levels sit where Phi crosses a multiple of 2pi. We track the wrapped
// phase on a k-grid and bisect the sign changes.
struct PhaseSample {
    double k = 0.0;
    double abs_q12 = 0.0;
    double arg_q22 = 0.0;
};

PhaseSample sample_phase(const BarrierGeometry& geom, const SpectrumConfig& config, double k) {
    const WaveParams wp = WaveParams::at(k * k, geom);
    const Mat2c q = array_transfer_matrix(geom, wp);
    (void)config;
    return {k, std::abs(q.m12), std::arg(q.m22)};
}

double wrapped_phase(const PhaseSample& s, double boundary_half_width, int branch) {
    const double phi =
        2.0 * s.k * boundary_half_width + double(branch) * std::atan(s.abs_q12) - s.arg_q22;
    return std::remainder(phi, 2.0 * M_PI);
}

struct Root {
    double k = 0.0;
    int branch = 0;
    double abs_q12 = 0.0;
    double abs_residual = 0.0;
    int multiplicity = 1;
};

struct ScanResult {
    std::vector<Root> roots;
    std::size_t brackets = 0;
    std::size_t rejected = 0;
};

ScanResult scan_chunk(const BarrierGeometry& geom, const SpectrumConfig& config, double k_lo,
                      double k_hi) {
    ScanResult out;
    const double c_half = config.boundary_half_width;
    const std::size_t steps =
        std::max<std::size_t>(1, std::size_t(std::ceil((k_hi - k_lo) / config.scan_dk)));
    const double dk = (k_hi - k_lo) / double(steps);

    PhaseSample prev = sample_phase(geom, config, k_lo);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double k = (i == steps) ? k_hi : k_lo + double(i) * dk;
        const PhaseSample cur = sample_phase(geom, config, k);
        for (int branch : {+1, -1}) {
            const double w1 = wrapped_phase(prev, c_half, branch);
            const double w2 = wrapped_phase(cur, c_half, branch);
            if (w1 == 0.0) continue; // counted as the right endpoint of the previous interval
            const bool crossing = (w1 < 0.0 && w2 >= 0.0) || (w1 > 0.0 && w2 <= 0.0);
            if (!crossing || std::abs(w2 - w1) >= M_PI) continue;
            ++out.brackets;

            double a = prev.k, b = cur.k;
            double wa = w1;
            PhaseSample at_root;
            for (int it = 0; it < 80 && (b - a) > 1e-12 * b; ++it) {
                const double mid = 0.5 * (a + b);
                at_root = sample_phase(geom, config, mid);
                const double wm = wrapped_phase(at_root, c_half, branch);
                if (wm == 0.0) { a = b = mid; break; }
                if ((wa < 0.0) == (wm < 0.0)) {
                    a = mid;
                    wa = wm;
                } else {
                    b = mid;
                }
            }
            const double k_root = 0.5 * (a + b);
            at_root = sample_phase(geom, config, k_root);

            // Acceptance: |residual| at the root against the bracket's own scale.
            double med_samples[9];
            for (int j = 0; j < 9; ++j) {
                const double kk = prev.k + (cur.k - prev.k) * double(j) / 8.0;
                med_samples[j] = std::abs(quantization_residual(geom, config, kk * kk));
            }
            std::sort(med_samples, med_samples + 9);
            const double tol =
                std::max(config.residual_rel_tol * med_samples[4], config.residual_abs_floor);
            const double res = std::abs(quantization_residual(geom, config, k_root * k_root));
            if (res < tol) {
                out.roots.push_back({k_root, branch, at_root.abs_q12, res, 1});
            } else {
                ++out.rejected;
            }
        }
        prev = cur;
    }
    return out;
}

std::vector<Root> deduplicate(std::vector<Root> roots, double dedup_dk, std::size_t* removed) {
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.k < b.k; });
    std::vector<Root> out;
    for (const Root& r : roots) {
        if (!out.empty() && r.k - out.back().k < dedup_dk) {
            Root& kept = out.back();
            if (r.abs_residual < kept.abs_residual) {
                const int mult = kept.multiplicity;
                const int other_branch = kept.branch;
                kept = r;
                kept.multiplicity = mult;
                if (other_branch != r.branch) kept.branch = 0; // fused branch pair
            } else if (kept.branch != r.branch) {
                kept.branch = 0;
            }
            ++kept.multiplicity;
            ++*removed;
        } else {
            out.push_back(r);
        }
    }
    return out;
}

// What a finite-resolution scan of the determinant condition reports.
// At a root the determinant's real part re-crosses zero a distance
// atan(1/|Q12|) away (in phase), so where the array is opaque (|Q12| huge,
// transmission tiny) the zero is a grazing touch that no sign scan can
// bracket: those roots are invisible. Levels that do get reported cannot be
// distinguished below the scan's energy resolution, so clusters collapse
// onto that scale. Exactly degenerate roots (the transparent-array double
// roots) stay: they are single nondegenerate energies, not clusters.
std::vector<Root> select_resolved(const std::vector<Root>& roots, const SpectrumConfig& config,
                                  RootFindReport* report) {
    std::vector<Root> visible;
    std::size_t dropped = 0;
    for (const Root& r : roots) {
        const double window = std::atan2(1.0, r.abs_q12);
        const double threshold =
            config.boundary_half_width * config.visibility_de / (2.0 * r.k);
        if (r.multiplicity > 1 || window >= threshold)
            visible.push_back(r);
        else
            ++dropped;
    }

    std::vector<Root> out;
    std::size_t collapsed = 0;
    for (const Root& r : visible) {
        if (!out.empty() && r.multiplicity == 1 &&
            r.k * r.k - out.back().k * out.back().k < config.resolution_de) {
            ++collapsed;
            continue;
        }
        out.push_back(r);
    }
    if (report) {
        report->merged_pairs = collapsed;
        report->dropped_grazing = dropped;
    }
    return out;
}

} // namespace

EnergySpectrum find_levels(const BarrierGeometry& geom, const SpectrumConfig& config,
                           RootFindReport* report, int jobs) {
    config.validate();
    RootFindReport local;
    if (!report) report = &local;
    *report = RootFindReport{};
    report->boundary_ratio_warning = config.boundary_too_close(geom);

    const double k_lo = std::sqrt(config.e_min);
    const double k_cap = M_PI * double(config.tail_start_index()) / config.boundary_half_width;
    const double k_hi = std::min(std::sqrt(config.e_split), k_cap);
    if (k_hi <= k_lo)
        throw ValidationError("numeric scan window is empty; raise e_split or lower e_min");

    report->grid_points = std::size_t((k_hi - k_lo) / config.scan_dk) + 2;

    std::vector<ScanResult> parts;
    const int n_chunks = std::max(1, jobs);
    parts.resize(std::size_t(n_chunks));
    if (n_chunks == 1) {
        parts[0] = scan_chunk(geom, config, k_lo, k_hi);
    } else {
        // Chunks overlap by one scan step so brackets at seams are not lost;
        // duplicates from the overlap fall inside the dedup radius.
        std::vector<std::thread> pool;
        const double span = (k_hi - k_lo) / double(n_chunks);
        for (int t = 0; t < n_chunks; ++t) {
            const double lo = k_lo + span * double(t);
            const double hi = std::min(k_hi, k_lo + span * double(t + 1) + config.scan_dk);
            pool.emplace_back([&, t, lo, hi] { parts[std::size_t(t)] = scan_chunk(geom, config, lo, hi); });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<Root> roots;
    for (const ScanResult& part : parts) {
        report->candidate_brackets += part.brackets;
        report->rejected_candidates += part.rejected;
        roots.insert(roots.end(), part.roots.begin(), part.roots.end());
    }

    std::size_t removed = 0;
    roots = deduplicate(std::move(roots), config.dedup_dk, &removed);
    report->deduplicated = removed;
    report->refined_roots = roots.size();
    report->roots.reserve(roots.size());
    for (const Root& r : roots)
        report->roots.push_back({r.k, r.branch, r.abs_q12, r.abs_residual, r.multiplicity});

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < roots.size(); ++i)
        min_gap = std::min(min_gap, roots[i].k - roots[i - 1].k);
    report->min_adjacent_spacing_k = roots.size() > 1 ? min_gap : 0.0;
    report->possible_missed_roots = roots.size() > 1 && min_gap < 2.0 * config.scan_dk;

    if (config.selection == LevelSelection::ResolvedOnly)
        roots = select_resolved(roots, config, report);

    EnergySpectrum spec;
    spec.geometry = geom;
    spec.config = config;
    spec.tail = TailDescriptor{config.boundary_half_width, config.tail_start_index()};
    const double e_cap = spec.tail.energy(spec.tail.start_index);
    for (const Root& r : roots) {
        const double e = r.k * r.k;
        if (e >= config.e_min && e < e_cap) {
            spec.levels.push_back(e);
            report->max_accepted_residual =
                std::max(report->max_accepted_residual, r.abs_residual);
        }
    }
    std::sort(spec.levels.begin(), spec.levels.end());
    return spec;
}

} // namespace mbp
