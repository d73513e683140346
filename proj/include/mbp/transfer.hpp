#pragma once

#include <complex>

#include "mbp/geometry.hpp"

namespace mbp {

using complexd = std::complex<double>;

/// 2x2 complex matrix, the only linear algebra this problem needs.
struct Mat2c {
    complexd m11, m12, m21, m22;

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2c diag(complexd a, complexd b) { return {a, 0.0, 0.0, b}; }

    complexd det() const { return m11 * m22 - m12 * m21; }
    complexd trace() const { return m11 + m22; }

    friend Mat2c operator*(const Mat2c& a, const Mat2c& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
};

/// a^n by binary exponentiation; n >= 0.
Mat2c mat_pow(Mat2c a, long n);

enum class Regime { Above, Below, AtBarrier };

// Per-energy derived quantities. k = sqrt(e) and q = sqrt(|e - v|) in the
// paper units (hbar = 1, m = 1/2). Above the barrier xi = q/k + k/q and
// eta = q/k - k/q are real; below it the analogous combinations are pure
// imaginary and we store their real magnitudes xi_bar = k/q - q/k,
// eta_bar = q/k + k/q (the matrix entries carry the i explicitly).
struct WaveParams {
    double energy = 0.0;
    double k = 0.0;
    Regime regime = Regime::Above;
    double q = 0.0;
    double xi = 0.0;
    double eta = 0.0;
    double xi_bar = 0.0;
    double eta_bar = 0.0;

    /// |e - v| < at_barrier_epsilon * v counts as AtBarrier.
    static constexpr double at_barrier_epsilon = 1e-8;

    static WaveParams at(double energy, const BarrierGeometry& geom);
};

// Entire-in-u helpers: cos(s*sqrt(u)) and s*sin(s*sqrt(u))/sqrt(u) as
// functions of u = q^2 (which may be negative). Series evaluation near
// u = 0 removes the q -> 0 singularity, so crossing e = v is smooth.
double cos_sqrt(double u, double s);
double sinc_sqrt(double u, double s);

/// Transfer matrix of a single barrier of width a/N (finite N).
Mat2c cell_matrix(const BarrierGeometry& geom, const WaveParams& wp);

/// Full-array transfer matrix Q: outer edge phases, N barriers, N-1 gap phases.
Mat2c total_transfer_matrix(const BarrierGeometry& geom, const WaveParams& wp);

struct SMatrix {
    complexd s11, s12, s21, s22;
};

/// Scattering matrix from a transfer matrix; throws NumericalError if |Q22|
/// is too small (unitary scattering keeps it >= 1).
SMatrix s_matrix(const Mat2c& q);

// Closed-form dense-limit (N -> infinity) cell. For e > v,
//   f = k b + a q xi / 2,   d = a q eta / 2,
// and the e < v analogs continue these to f = k b + a (2e - v) / (2k),
// d = -a v / (2k), valid in both regimes. phi^2 = f^2 - d^2 may be negative;
// everything downstream is evaluated as entire functions of phi^2.
struct InfiniteNCell {
    double energy = 0.0;
    double k = 0.0;
    double f = 0.0;
    double d = 0.0;
    double phi_sq = 0.0;
    double z = 0.0;           // k (a + b)
    double cos_phi = 0.0;     // cos(phi), or cosh(|phi|) when phi^2 < 0
    double sinc_phi = 0.0;    // sin(phi)/phi, or sinh(|phi|)/|phi|
    double tau = 0.0;         // 1 + d^2 sin^2(phi)/phi^2
    double kappa_phase = 0.0; // atan2(f sin(phi)/phi, cos(phi))

    /// Below-regime quantities in the published sign convention.
    double f_bar() const { return f; }
    double d_bar() const { return -d; }
};

InfiniteNCell infinite_cell(const BarrierGeometry& geom, const WaveParams& wp);

/// Dense-limit transfer matrix exp(-i z sigma3) * exp(i (f sigma3 + i d sigma2)).
Mat2c infinite_transfer_matrix(const InfiniteNCell& cell);

struct EigenvaluePair {
    complexd lambda1, lambda2;
    bool near_branch_point = false; // tau^2 cos^2(phi - kappa) close to 1
};

/// Eigenvalues tau*cos(phi-kappa) +- sqrt(tau^2 cos^2(phi-kappa) - 1)
/// (principal square root); lambda1 * lambda2 = 1.
EigenvaluePair infinite_eigenvalues(const InfiniteNCell& cell);

/// (exp(i k b / N sigma3) * T)^N with the dense-limit gap convention b/N;
/// converges to exp(i (f sigma3 + i d sigma2)) as N grows. Used by the
/// convergence checks of the dense limit.
Mat2c finite_power_approximation(const BarrierGeometry& geom, const WaveParams& wp, long n);

} // namespace mbp
