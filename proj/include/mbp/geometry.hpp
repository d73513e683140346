#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace mbp {

/// Validation failure (bad user input); maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure (breakdown inside an algorithm); maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unit conventions used throughout: hbar = 1, m = 1/2, Boltzmann constant = 1.
// With these, the wavenumber of a free wave of energy e is k = sqrt(e) exactly.
// They are deliberately not configurable.
struct PhysicalConstants {
    static constexpr double hbar = 1.0;
    static constexpr double mass = 0.5;
    static constexpr double boltzmann = 1.0;
};

/// Number of barriers: a finite count (>= 2) or the dense limit.
class BarrierCount {
public:
    BarrierCount() : n_(2) {}
    static BarrierCount finite(long n) {
        if (n < 2)
            throw ValidationError("barrier count below minimum (need N >= 2, got " +
                                  std::to_string(n) + ")");
        return BarrierCount(n);
    }
    static BarrierCount infinite() { return BarrierCount(kInfinite); }

    bool is_infinite() const { return n_ == kInfinite; }
    long value() const {
        if (is_infinite())
            throw std::logic_error("finite barrier count requested from infinite-N geometry");
        return n_;
    }
    std::string str() const { return is_infinite() ? "inf" : std::to_string(n_); }

    friend bool operator==(const BarrierCount&, const BarrierCount&) = default;

private:
    static constexpr long kInfinite = -1;
    explicit BarrierCount(long n) : n_(n) {}
    long n_;
};

// Rectangular-barrier array of total length L: N barriers of equal height v,
// total barrier material a = L/(1+c), total gap space b = Lc/(1+c), so that
// c = b/a is the spacing-to-width ratio. The array spans [-L/2, L/2].
struct BarrierGeometry {
    double total_length = 0.0;   // L
    BarrierCount barriers;       // N
    double spacing_ratio = 0.0;  // c
    double barrier_height = 0.0; // v

    double total_barrier_width() const { return total_length / (1.0 + spacing_ratio); }
    double total_gap_width() const {
        return total_length * spacing_ratio / (1.0 + spacing_ratio);
    }
    /// Width of one barrier, a/N (finite N only).
    double cell_width() const { return total_barrier_width() / double(barriers.value()); }
    /// Width of one gap between neighbouring barriers, b/(N-1) (finite N only).
    double gap_width() const {
        return total_gap_width() / double(barriers.value() - 1);
    }
    double left_edge() const { return -0.5 * total_length; }
    double right_edge() const { return 0.5 * total_length; }
};

BarrierGeometry make_geometry(double total_length, BarrierCount barriers,
                              double spacing_ratio, double barrier_height);

/// How found levels are reported by the level finder; see spectrum.hpp.
enum class LevelSelection {
    Complete,       // every root of the quantization condition
    ResolvedOnly,   // what a determinant-sign scan of finite resolution sees:
                    // grazing (opaque-region) roots are invisible and dense
                    // clusters collapse to the resolution scale
};

// Parameters of the periodic-boundary quantization and of the level scan.
// Periodic boundary conditions are imposed at x = +-C with C >> L.
struct SpectrumConfig {
    double boundary_half_width = 90.0; // C
    double e_split = 1080.0;           // numeric/analytic split energy
    double e_min = 0.1;                // lower edge of the numeric scan

    double scan_dk = 0.004;            // k-grid step of the eigenphase scan
    double dedup_dk = 1e-6;            // roots closer than this merge
    double residual_rel_tol = 1e-8;    // acceptance tolerance, relative to bracket scale
    double residual_abs_floor = 1e-10; // acceptance tolerance never drops below this

    LevelSelection selection = LevelSelection::ResolvedOnly;
    // ResolvedOnly tuning. A root is reportable when the determinant's real
    // part changes sign over a window wider than C*visibility_de/(2k); below
    // that the zero is tangential (the array is locally opaque) and a
    // sign-scan cannot bracket it. Reported levels closer than resolution_de
    // collapse onto the coarser grid. Exactly degenerate roots are exempt.
    double visibility_de = 1e-6;
    double resolution_de = 0.06;

    /// Index of the first analytic tail level: largest n with (pi n / C)^2 <= e_split.
    long tail_start_index() const {
        return static_cast<long>(std::floor(boundary_half_width * std::sqrt(e_split) / M_PI));
    }
    /// Energy of the first tail level, (pi n0 / C)^2.
    double tail_start_energy() const {
        double kn = M_PI * double(tail_start_index()) / boundary_half_width;
        return kn * kn;
    }
    /// True when C is too close to the array for the periodic-boundary setup.
    bool boundary_too_close(const BarrierGeometry& g) const {
        return boundary_half_width / g.total_length < 4.5;
    }

    void validate() const;
};

} // namespace mbp
