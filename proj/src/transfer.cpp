#include "mbp/transfer.hpp"

#include <cmath>

namespace mbp {

Mat2c mat_pow(Mat2c a, long n) {
    Mat2c r = Mat2c::identity();
    while (n > 0) {
        if (n & 1) r = r * a;
        a = a * a;
        n >>= 1;
    }
    return r;
}

double cos_sqrt(double u, double s) {
    const double x = s * s * u; // (s*q)^2, signed
    if (std::abs(x) < 1e-4)
        return 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
    if (u > 0.0) return std::cos(s * std::sqrt(u));
    return std::cosh(s * std::sqrt(-u));
}

double sinc_sqrt(double u, double s) {
    const double x = s * s * u;
    if (std::abs(x) < 1e-4)
        return s * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
    if (u > 0.0) {
        const double q = std::sqrt(u);
        return std::sin(s * q) / q;
    }
    const double q = std::sqrt(-u);
    return std::sinh(s * q) / q;
}

WaveParams WaveParams::at(double energy, const BarrierGeometry& geom) {
    if (!(energy > 0.0))
        throw ValidationError("energy must be positive");
    WaveParams wp;
    wp.energy = energy;
    wp.k = std::sqrt(energy);
    const double v = geom.barrier_height;
    const double diff = energy - v;
    wp.q = std::sqrt(std::abs(diff));
    if (std::abs(diff) < at_barrier_epsilon * v) {
        wp.regime = Regime::AtBarrier; // xi/eta are singular here and stay unset
    } else if (diff > 0.0) {
        wp.regime = Regime::Above;
        wp.xi = wp.q / wp.k + wp.k / wp.q;
        wp.eta = wp.q / wp.k - wp.k / wp.q;
    } else {
        wp.regime = Regime::Below;
        wp.xi_bar = wp.k / wp.q - wp.q / wp.k;
        wp.eta_bar = wp.q / wp.k + wp.k / wp.q;
    }
    return wp;
}

// One barrier of width s = a/N. Writing the trigonometric (e > v) and
// hyperbolic (e < v) entries over the common variable u = e - v gives
//   T11 = cos_sqrt(u,s) + i (2e - v)/(2k) sinc_sqrt(u,s),
//   T12 = -i v/(2k) sinc_sqrt(u,s),
// with T21 = conj(T12), T22 = conj(T11). Both regimes and the removable
// point e = v come out of the same expression, and det T = 1 exactly
// because cos_sqrt^2 + u*sinc_sqrt^2 = 1.
Mat2c cell_matrix(const BarrierGeometry& geom, const WaveParams& wp) {
    const double s = geom.cell_width();
    const double u = wp.energy - geom.barrier_height;
    const double c = cos_sqrt(u, s);
    const double sn = sinc_sqrt(u, s);
    const double k = wp.k;
    const double diag_im = (2.0 * wp.energy - geom.barrier_height) / (2.0 * k) * sn;
    const double off_im = -geom.barrier_height / (2.0 * k) * sn;
    return {complexd(c, diag_im), complexd(0.0, off_im),
            complexd(0.0, -off_im), complexd(c, -diag_im)};
}

Mat2c total_transfer_matrix(const BarrierGeometry& geom, const WaveParams& wp) {
    const long n = geom.barriers.value();
    const double k = wp.k;
    const double a = geom.total_barrier_width();
    const double b = geom.total_gap_width();

    const Mat2c t = cell_matrix(geom, wp);
    const double edge = k * a / (2.0 * double(n));
    const double gap = k * b / double(n - 1);
    const double outer = k * (a + b) - edge;

    const Mat2c d_in = Mat2c::diag(std::polar(1.0, -edge), std::polar(1.0, edge));
    const Mat2c d_gap = Mat2c::diag(std::polar(1.0, gap), std::polar(1.0, -gap));
    const Mat2c d_out = Mat2c::diag(std::polar(1.0, -outer), std::polar(1.0, outer));

    return d_out * t * mat_pow(d_gap * t, n - 1) * d_in;
}

SMatrix s_matrix(const Mat2c& q) {
    if (std::abs(q.m22) < 1e-8)
        throw NumericalError("transfer matrix Q22 vanished; scattering matrix undefined");
    const complexd inv = 1.0 / q.m22;
    return {inv, q.m12 * inv, -q.m21 * inv, inv};
}

InfiniteNCell infinite_cell(const BarrierGeometry& geom, const WaveParams& wp) {
    if (!geom.barriers.is_infinite())
        throw ValidationError("infinite_cell requires infinite-N geometry");
    InfiniteNCell cell;
    cell.energy = wp.energy;
    cell.k = wp.k;
    const double a = geom.total_barrier_width();
    const double b = geom.total_gap_width();
    const double v = geom.barrier_height;
    // f = kb + a q xi / 2 and d = a q eta / 2 continued across e = v:
    // both reduce to rational functions of e, valid in either regime.
    cell.f = wp.k * b + a * (2.0 * wp.energy - v) / (2.0 * wp.k);
    cell.d = -a * v / (2.0 * wp.k);
    cell.phi_sq = cell.f * cell.f - cell.d * cell.d;
    cell.z = wp.k * (a + b);
    cell.cos_phi = cos_sqrt(cell.phi_sq, 1.0);
    cell.sinc_phi = sinc_sqrt(cell.phi_sq, 1.0);
    cell.tau = 1.0 + cell.d * cell.d * cell.sinc_phi * cell.sinc_phi;
    cell.kappa_phase = std::atan2(cell.f * cell.sinc_phi, cell.cos_phi);
    return cell;
}

Mat2c infinite_transfer_matrix(const InfiniteNCell& cell) {
    const complexd ez_m = std::polar(1.0, -cell.z);
    const complexd ez_p = std::polar(1.0, cell.z);
    const complexd diag(cell.cos_phi, cell.f * cell.sinc_phi);
    const complexd off(0.0, cell.d * cell.sinc_phi);
    return {ez_m * diag, ez_m * off, ez_p * std::conj(off), ez_p * std::conj(diag)};
}

EigenvaluePair infinite_eigenvalues(const InfiniteNCell& cell) {
    const complexd phi = std::sqrt(complexd(cell.phi_sq, 0.0));
    const complexd w = cell.tau * std::cos(phi - cell.kappa_phase);
    const complexd disc = w * w - 1.0;
    EigenvaluePair out;
    out.near_branch_point = std::abs(disc) < 1e-10 * std::max(1.0, std::norm(w));
    const complexd root = std::sqrt(disc);
    out.lambda1 = w + root;
    out.lambda2 = w - root;
    return out;
}

Mat2c finite_power_approximation(const BarrierGeometry& geom, const WaveParams& wp, long n) {
    const double a = geom.total_barrier_width();
    const double b = geom.total_gap_width();
    const double s = a / double(n);
    const double u = wp.energy - geom.barrier_height;
    const double c = cos_sqrt(u, s);
    const double sn = sinc_sqrt(u, s);
    const double diag_im = (2.0 * wp.energy - geom.barrier_height) / (2.0 * wp.k) * sn;
    const double off_im = -geom.barrier_height / (2.0 * wp.k) * sn;
    const Mat2c t{complexd(c, diag_im), complexd(0.0, off_im),
                  complexd(0.0, -off_im), complexd(c, -diag_im)};
    const double gap = wp.k * b / double(n);
    const Mat2c d_gap = Mat2c::diag(std::polar(1.0, gap), std::polar(1.0, -gap));
    return mat_pow(d_gap * t, n);
}

} // namespace mbp
