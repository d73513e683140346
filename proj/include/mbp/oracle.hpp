#pragma once

#include <vector>

#include "mbp/geometry.hpp"
#include "mbp/spectrum.hpp"

namespace mbp {

// Brute-force checker for the transfer-matrix path: the same scattering
// problem solved by matching the wavefunction and its derivative at every
// interface of the piecewise-constant potential, with no matrix products.

struct Region {
    double x_start = 0.0;
    double x_end = 0.0;
    double potential = 0.0;
    double wavenumber = 0.0; // sqrt(|e - potential|)
    bool propagating = true; // e > potential
};

struct RegionDecomposition {
    std::vector<Region> regions; // outer-left, barrier, gap, ..., barrier, outer-right
};

/// 2N+1 regions of the array at energy e (finite N).
RegionDecomposition decompose(const BarrierGeometry& geom, double energy);

struct ScatteringAmplitudes {
    complexd transmission; // coefficient of e^{ikx} on the right for unit input
    complexd reflection;   // coefficient of e^{-ikx} on the left
};

/// Unit wave incident from the left, banded linear solve for all interface
/// conditions. Requires finite N, e > 0, e != v.
ScatteringAmplitudes direct_scattering(const BarrierGeometry& geom, double energy);

/// Smallest singular value (relative to the matrix scale) of the full
/// periodic problem on [-C, C] at energy e; ~0 exactly at allowed levels.
double periodic_smallest_singular(const BarrierGeometry& geom, const SpectrumConfig& config,
                                  double energy);

/// True when the periodic system is singular at e within tolerance.
bool oracle_quantization_check(const BarrierGeometry& geom, const SpectrumConfig& config,
                               double energy, double tolerance = 1e-6);

} // namespace mbp
