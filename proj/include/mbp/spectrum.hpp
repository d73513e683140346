#pragma once

#include <vector>

#include "mbp/geometry.hpp"
#include "mbp/transfer.hpp"

namespace mbp {

/// Transfer matrix of the whole array at energy e: the finite-N product or
/// the closed-form dense-limit matrix, depending on the geometry.
Mat2c array_transfer_matrix(const BarrierGeometry& geom, const WaveParams& wp);

// det(e^{2ikC} S - I) expanded through the transfer-matrix entries:
//   e^{4ikC} (1 + Q12 Q21) / Q22^2  -  2 e^{2ikC} / Q22  +  1.
// Zero exactly at the allowed energies of the periodic problem.
complexd quantization_residual(const BarrierGeometry& geom, const SpectrumConfig& config,
                               double energy);

/// Generator of the analytic high-energy levels e_n = (pi n / C)^2.
struct TailDescriptor {
    double boundary_half_width = 0.0;
    long start_index = 0;

    double energy(long n) const {
        const double kn = M_PI * double(n) / boundary_half_width;
        return kn * kn;
    }
};

struct TailSequence {
    TailDescriptor tail;
    long n;
    double next() { return tail.energy(n++); }
};

/// Tail levels from index n_from upward (n_from = 0 is allowed; the dense
/// spacing limit sums from the ground slot).
TailSequence tail_energies(const SpectrumConfig& config, long n_from);

/// Per-root scan diagnostics (complete set, before any selection pass).
struct RootDiagnostic {
    double k = 0.0;
    int branch = 0; // +1 / -1 eigenphase branch; 0 after a degenerate fuse
    double abs_q12 = 0.0;
    double abs_residual = 0.0;
    int multiplicity = 1;
};

struct RootFindReport {
    std::size_t grid_points = 0;
    std::size_t candidate_brackets = 0;
    std::size_t refined_roots = 0;
    std::size_t rejected_candidates = 0;
    std::size_t deduplicated = 0;
    std::size_t merged_pairs = 0;   // ResolvedOnly: unresolved pairs fused to one level
    std::size_t dropped_grazing = 0; // ResolvedOnly: tangential roots below visibility
    double max_accepted_residual = 0.0;
    double min_adjacent_spacing_k = 0.0;
    bool possible_missed_roots = false; // spacing fell under 2x the scan step
    bool boundary_ratio_warning = false; // C/L < 4.5
    std::vector<RootDiagnostic> roots;  // complete refined set before selection
};

struct EnergySpectrum {
    std::vector<double> levels; // sorted, within [e_min, first tail energy)
    TailDescriptor tail;
    BarrierGeometry geometry;
    SpectrumConfig config;
};

/// All levels of the periodic problem in [e_min, e_split): eigenphase scan
/// over k, bisection refinement, dedup, then the configured selection pass.
/// jobs > 1 splits the scan into deterministic, overlapping k-chunks.
EnergySpectrum find_levels(const BarrierGeometry& geom, const SpectrumConfig& config,
                           RootFindReport* report = nullptr, int jobs = 1);

} // namespace mbp
