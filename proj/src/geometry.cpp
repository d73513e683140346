#include "mbp/geometry.hpp"

namespace mbp {

BarrierGeometry make_geometry(double total_length, BarrierCount barriers,
                              double spacing_ratio, double barrier_height) {
    if (!(total_length > 0.0))
        throw ValidationError("total length must be positive");
    if (!(spacing_ratio > 0.0))
        throw ValidationError("spacing ratio c must be positive");
    if (!(barrier_height > 0.0))
        throw ValidationError("barrier height v must be positive");
    // BarrierCount::finite already rejects N < 2.
    return BarrierGeometry{total_length, barriers, spacing_ratio, barrier_height};
}

void SpectrumConfig::validate() const {
    if (!(boundary_half_width > 0.0))
        throw ValidationError("boundary half-width C must be positive");
    if (!(e_min > 0.0))
        throw ValidationError("e_min must be positive");
    if (!(e_split > e_min))
        throw ValidationError("e_split must exceed e_min");
    if (!(scan_dk > 0.0) || !(dedup_dk > 0.0))
        throw ValidationError("scan and dedup steps must be positive");
    if (!(resolution_de > 0.0) || !(visibility_de > 0.0))
        throw ValidationError("resolution_de and visibility_de must be positive");
}

} // namespace mbp
