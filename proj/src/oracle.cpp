#include "mbp/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace mbp {

namespace {

// Basis functions per region, scaled so every value on the region stays
// bounded by 1: propagating regions use e^{+-i kappa (x - xL)}; evanescent
// ones use e^{+q(x - xR)} and e^{-q(x - xL)} (growth referenced to the far
// edge, so deep tunneling cannot overflow). At e == potential the region
// solution is linear in x.
struct BasisEval {
    complexd value_p, deriv_p;
    complexd value_m, deriv_m;
};

BasisEval basis_at(const Region& r, double energy, double x) {
    BasisEval b;
    const double width = r.x_end - r.x_start;
    const double diff = energy - r.potential;
    if (std::abs(diff) < 1e-12 * std::max(1.0, r.potential)) {
        b.value_p = 1.0;
        b.deriv_p = 0.0;
        b.value_m = x - r.x_start;
        b.deriv_m = 1.0;
        return b;
    }
    if (diff > 0.0) {
        const double kappa = std::sqrt(diff);
        const complexd up = std::polar(1.0, kappa * (x - r.x_start));
        b.value_p = up;
        b.deriv_p = complexd(0.0, kappa) * up;
        b.value_m = std::conj(up);
        b.deriv_m = complexd(0.0, -kappa) * std::conj(up);
        return b;
    }
    const double q = std::sqrt(-diff);
    (void)width;
    const double ep = std::exp(q * (x - r.x_end));   // <= 1 inside the region
    const double em = std::exp(-q * (x - r.x_start)); // <= 1 inside the region
    b.value_p = ep;
    b.deriv_p = q * ep;
    b.value_m = em;
    b.deriv_m = -q * em;
    return b;
}

// Banded complex Gaussian elimination with partial pivoting. Storage keeps
// kl extra superdiagonals for pivot fill; the right-hand side is carried
// through the elimination, so no factors are stored.
class BandedSolver {
public:
    BandedSolver(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1),
          data_(std::size_t(n) * std::size_t(width_), complexd(0.0, 0.0)) {}

    complexd& at(int i, int j) { return data_[std::size_t(j) * width_ + band_row(i, j)]; }

    bool in_band(int i, int j) const {
        const int r = i - j + kl_ + ku_;
        return r >= 0 && r < width_;
    }

    // Solves in place; returns false on a numerically singular pivot.
    bool solve(std::vector<complexd>& rhs) {
        for (int j = 0; j < n_; ++j) {
            const int last = std::min(n_ - 1, j + kl_);
            int pivot = j;
            double best = std::abs(at(j, j));
            for (int i = j + 1; i <= last; ++i) {
                const double m = std::abs(at(i, j));
                if (m > best) {
                    best = m;
                    pivot = i;
                }
            }
            if (!(best > 0.0)) return false;
            if (pivot != j) {
                const int jmax = std::min(n_ - 1, j + kl_ + ku_);
                for (int jj = j; jj <= jmax; ++jj)
                    std::swap(at(pivot, jj), at(j, jj));
                std::swap(rhs[std::size_t(pivot)], rhs[std::size_t(j)]);
            }
            const complexd inv = 1.0 / at(j, j);
            for (int i = j + 1; i <= last; ++i) {
                const complexd mult = at(i, j) * inv;
                if (mult == complexd(0.0, 0.0)) continue;
                const int jmax = std::min(n_ - 1, j + kl_ + ku_);
                for (int jj = j + 1; jj <= jmax; ++jj)
                    at(i, jj) -= mult * at(j, jj);
                rhs[std::size_t(i)] -= mult * rhs[std::size_t(j)];
            }
        }
        for (int i = n_ - 1; i >= 0; --i) {
            complexd s = rhs[std::size_t(i)];
            const int jmax = std::min(n_ - 1, i + kl_ + ku_);
            for (int j = i + 1; j <= jmax; ++j)
                s -= at(i, j) * rhs[std::size_t(j)];
            rhs[std::size_t(i)] = s / at(i, i);
        }
        return true;
    }

private:
    int band_row(int i, int j) const { return i - j + kl_ + ku_; }
    int n_, kl_, ku_, width_;
    std::vector<complexd> data_;
};

} // namespace

RegionDecomposition decompose(const BarrierGeometry& geom, double energy) {
    const long n = geom.barriers.value();
    RegionDecomposition out;
    out.regions.reserve(std::size_t(2 * n + 1));
    const double wb = geom.cell_width();
    const double wg = geom.gap_width();

    const auto push = [&](double x0, double x1, double v) {
        Region r;
        r.x_start = x0;
        r.x_end = x1;
        r.potential = v;
        r.wavenumber = std::sqrt(std::abs(energy - v));
        r.propagating = energy > v;
        out.regions.push_back(r);
    };

    double x = geom.left_edge();
    push(-std::numeric_limits<double>::infinity(), x, 0.0);
    for (long i = 0; i < n; ++i) {
        push(x, x + wb, geom.barrier_height);
        x += wb;
        if (i + 1 < n) {
            push(x, x + wg, 0.0);
            x += wg;
        }
    }
    push(x, std::numeric_limits<double>::infinity(), 0.0);
    return out;
}

ScatteringAmplitudes direct_scattering(const BarrierGeometry& geom, double energy) {
    if (!(energy > 0.0)) throw ValidationError("energy must be positive");
    const long n_barriers = geom.barriers.value();
    const RegionDecomposition dec = decompose(geom, energy);
    const int n_internal = int(dec.regions.size()) - 2; // 2N - 1
    const int n = 2 * n_internal + 2;                   // unknowns: r, pairs, t
    const double k = std::sqrt(energy);

    BandedSolver solver(n, 2, 2);
    std::vector<complexd> rhs(std::size_t(n), complexd(0.0, 0.0));

    // Interface positions: region i meets region i+1 at dec.regions[i].x_end.
    int row = 0;
    for (int iface = 0; iface <= n_internal; ++iface) {
        const double x = dec.regions[std::size_t(iface)].x_end;
        // Left side columns/values.
        complexd lv_p, ld_p, lv_m, ld_m;
        int lcol_p = -1, lcol_m = -1;
        if (iface == 0) {
            const complexd in = std::polar(1.0, k * x);
            rhs[std::size_t(row)] = -in;                        // incident e^{ikx}, unit amplitude
            rhs[std::size_t(row + 1)] = -complexd(0.0, k) * in; // moved to the RHS
            lv_p = std::conj(in);
            ld_p = complexd(0.0, -k) * std::conj(in);
            lcol_p = 0; // reflection coefficient
        } else {
            const BasisEval b = basis_at(dec.regions[std::size_t(iface)], energy, x);
            lv_p = b.value_p;
            ld_p = b.deriv_p;
            lv_m = b.value_m;
            ld_m = b.deriv_m;
            lcol_p = 2 * iface - 1;
            lcol_m = 2 * iface;
        }
        // Right side.
        complexd rv_p, rd_p, rv_m, rd_m;
        int rcol_p = -1, rcol_m = -1;
        if (iface == n_internal) {
            const complexd outw = std::polar(1.0, k * x);
            rv_p = outw;
            rd_p = complexd(0.0, k) * outw;
            rcol_p = n - 1; // transmission coefficient
        } else {
            const BasisEval b = basis_at(dec.regions[std::size_t(iface) + 1], energy, x);
            rv_p = b.value_p;
            rd_p = b.deriv_p;
            rv_m = b.value_m;
            rd_m = b.deriv_m;
            rcol_p = 2 * iface + 1;
            rcol_m = 2 * iface + 2;
        }

        solver.at(row, lcol_p) += lv_p;
        solver.at(row + 1, lcol_p) += ld_p;
        if (lcol_m >= 0) {
            solver.at(row, lcol_m) += lv_m;
            solver.at(row + 1, lcol_m) += ld_m;
        }
        solver.at(row, rcol_p) -= rv_p;
        solver.at(row + 1, rcol_p) -= rd_p;
        if (rcol_m >= 0) {
            solver.at(row, rcol_m) -= rv_m;
            solver.at(row + 1, rcol_m) -= rd_m;
        }
        row += 2;
    }
    (void)n_barriers;

    if (!solver.solve(rhs))
        throw NumericalError("boundary-matching system is singular at this energy");
    return {rhs[std::size_t(n - 1)], rhs[0]};
}

namespace {

// Dense LU with partial pivoting for the periodic check (the wraparound rows
// break the band structure). Factor once, then estimate the smallest
// singular value by inverse power iteration on A^H A.
struct DenseLU {
    int n = 0;
    std::vector<complexd> a; // row-major, factored in place
    std::vector<int> perm;
    bool singular = false;

    complexd& at(int i, int j) { return a[std::size_t(i) * std::size_t(n) + std::size_t(j)]; }

    void factor() {
        perm.resize(std::size_t(n));
        for (int i = 0; i < n; ++i) perm[std::size_t(i)] = i;
        for (int j = 0; j < n; ++j) {
            int pivot = j;
            double best = std::abs(at(j, j));
            for (int i = j + 1; i < n; ++i)
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    pivot = i;
                }
            if (!(best > 1e-300)) {
                singular = true;
                at(j, j) = 1e-300; // keep the factorization usable for inverse iteration
            }
            if (pivot != j) {
                for (int jj = 0; jj < n; ++jj) std::swap(at(pivot, jj), at(j, jj));
                std::swap(perm[std::size_t(pivot)], perm[std::size_t(j)]);
            }
            const complexd inv = 1.0 / at(j, j);
            for (int i = j + 1; i < n; ++i) {
                const complexd m = at(i, j) * inv;
                at(i, j) = m;
                for (int jj = j + 1; jj < n; ++jj) at(i, jj) -= m * at(j, jj);
            }
        }
    }

    // x <- A^{-1} b, using PA = LU.
    void solve(std::vector<complexd>& x, const std::vector<complexd>& b) const {
        for (int i = 0; i < n; ++i) x[std::size_t(i)] = b[std::size_t(perm[std::size_t(i)])];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j)
                x[std::size_t(i)] -= a[std::size_t(i) * std::size_t(n) + std::size_t(j)] * x[std::size_t(j)];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j)
                x[std::size_t(i)] -= a[std::size_t(i) * std::size_t(n) + std::size_t(j)] * x[std::size_t(j)];
            x[std::size_t(i)] /= a[std::size_t(i) * std::size_t(n) + std::size_t(i)];
        }
    }

    // x <- A^{-H} b: A^H = U^H L^H P.
    void solve_adjoint(std::vector<complexd>& x, const std::vector<complexd>& b) const {
        std::vector<complexd> w(b);
        for (int i = 0; i < n; ++i) { // U^H (lower triangular) forward solve
            for (int j = 0; j < i; ++j)
                w[std::size_t(i)] -= std::conj(a[std::size_t(j) * std::size_t(n) + std::size_t(i)]) * w[std::size_t(j)];
            w[std::size_t(i)] /= std::conj(a[std::size_t(i) * std::size_t(n) + std::size_t(i)]);
        }
        for (int i = n - 1; i >= 0; --i) // L^H (unit upper) backward solve
            for (int j = i + 1; j < n; ++j)
                w[std::size_t(i)] -= std::conj(a[std::size_t(j) * std::size_t(n) + std::size_t(i)]) * w[std::size_t(j)];
        for (int i = 0; i < n; ++i) x[std::size_t(perm[std::size_t(i)])] = w[std::size_t(i)];
    }
};

} // namespace

double periodic_smallest_singular(const BarrierGeometry& geom, const SpectrumConfig& config,
                                  double energy) {
    if (!(energy > 0.0)) throw ValidationError("energy must be positive");
    const double c_half = config.boundary_half_width;
    RegionDecomposition dec = decompose(geom, energy);
    dec.regions.front().x_start = -c_half;
    dec.regions.back().x_end = c_half;

    const int n_regions = int(dec.regions.size());
    const int n = 2 * n_regions;
    DenseLU lu;
    lu.n = n;
    lu.a.assign(std::size_t(n) * std::size_t(n), complexd(0.0, 0.0));

    int row = 0;
    for (int iface = 0; iface + 1 < n_regions; ++iface) {
        const double x = dec.regions[std::size_t(iface)].x_end;
        const BasisEval l = basis_at(dec.regions[std::size_t(iface)], energy, x);
        const BasisEval r = basis_at(dec.regions[std::size_t(iface) + 1], energy, x);
        const int lc = 2 * iface, rc = 2 * (iface + 1);
        lu.at(row, lc) = l.value_p;
        lu.at(row, lc + 1) = l.value_m;
        lu.at(row, rc) = -r.value_p;
        lu.at(row, rc + 1) = -r.value_m;
        lu.at(row + 1, lc) = l.deriv_p;
        lu.at(row + 1, lc + 1) = l.deriv_m;
        lu.at(row + 1, rc) = -r.deriv_p;
        lu.at(row + 1, rc + 1) = -r.deriv_m;
        row += 2;
    }
    // Periodic closure: psi(-C) = psi(C), psi'(-C) = psi'(C).
    const BasisEval left = basis_at(dec.regions.front(), energy, -c_half);
    const BasisEval right = basis_at(dec.regions.back(), energy, c_half);
    const int lc = 0, rc = 2 * (n_regions - 1);
    lu.at(row, lc) = left.value_p;
    lu.at(row, lc + 1) = left.value_m;
    lu.at(row, rc) = -right.value_p;
    lu.at(row, rc + 1) = -right.value_m;
    lu.at(row + 1, lc) = left.deriv_p;
    lu.at(row + 1, lc + 1) = left.deriv_m;
    lu.at(row + 1, rc) = -right.deriv_p;
    lu.at(row + 1, rc + 1) = -right.deriv_m;

    double frob = 0.0;
    for (const complexd& v : lu.a) frob += std::norm(v);
    const double scale = std::sqrt(frob / double(n));

    lu.factor();

    // Inverse power iteration on A^H A from a fixed seed.
    std::vector<complexd> v(static_cast<std::size_t>(n));
    std::vector<complexd> w(static_cast<std::size_t>(n));
    std::vector<complexd> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[std::size_t(i)] = complexd(1.0 + 0.37 * double(i % 7), 0.21 * double(i % 5));
    double inv_sq = 0.0;
    for (int it = 0; it < 24; ++it) {
        lu.solve_adjoint(w, v);
        lu.solve(u, w);
        double norm2 = 0.0;
        for (const complexd& x : u) norm2 += std::norm(x);
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0) || !std::isfinite(norm)) return 0.0;
        inv_sq = norm;
        for (int i = 0; i < n; ++i) v[std::size_t(i)] = u[std::size_t(i)] / norm;
    }
    const double sigma_min = 1.0 / std::sqrt(inv_sq);
    return sigma_min / scale;
}

bool oracle_quantization_check(const BarrierGeometry& geom, const SpectrumConfig& config,
                               double energy, double tolerance) {
    return periodic_smallest_singular(geom, config, energy) < tolerance;
}

} // namespace mbp
