#include "doctest.h"

#include <cmath>
#include <random>

#include "mbp/transfer.hpp"

using namespace mbp;

namespace {

const BarrierGeometry kStd = make_geometry(20, BarrierCount::finite(6), 3, 60);

double mat_dist(const Mat2c& a, const Mat2c& b) {
    return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12),
                     std::abs(a.m21 - b.m21), std::abs(a.m22 - b.m22)});
}

// The unit-determinant identity rests on cosh^2 - sinh^2 cancellation, so in
// floating point it holds relative to the squared entry size.
double det_defect(const Mat2c& m) {
    const double scale =
        std::max({1.0, std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
    return std::abs(m.det() - 1.0) / (scale * scale);
}

BarrierGeometry free_geometry(long n) {
    // v = 0 reference case (free propagation); bypasses the v > 0 validation
    // on purpose, the transparent array is the exactness anchor of the tests.
    return BarrierGeometry{20, BarrierCount::finite(n), 3, 0.0};
}

} // namespace

TEST_CASE("wave parameters split by regime") {
    const auto above = WaveParams::at(100, kStd);
    CHECK(above.regime == Regime::Above);
    CHECK(above.k == doctest::Approx(10.0));
    CHECK(above.q == doctest::Approx(std::sqrt(40.0)));
    CHECK(above.xi * above.xi - above.eta * above.eta == doctest::Approx(4.0));

    const auto below = WaveParams::at(30, kStd);
    CHECK(below.regime == Regime::Below);
    CHECK(below.q == doctest::Approx(std::sqrt(30.0)));
    // barred combinations obey the mirrored identity
    CHECK(below.eta_bar * below.eta_bar - below.xi_bar * below.xi_bar == doctest::Approx(4.0));

    CHECK(WaveParams::at(60.0 * (1.0 + 1e-10), kStd).regime == Regime::AtBarrier);
    CHECK_THROWS_AS(WaveParams::at(-1, kStd), ValidationError);
}

TEST_CASE("cell matrix: unimodular with conjugate structure in both regimes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> energy(0.11, 1080.0);
    for (int i = 0; i < 500; ++i) {
        const double e = energy(rng);
        const auto wp = WaveParams::at(e, kStd);
        const auto t = cell_matrix(kStd, wp);
        CHECK(det_defect(t) < 1e-12);
        CHECK(std::abs(t.m22 - std::conj(t.m11)) < 1e-14);
        CHECK(std::abs(t.m21 - std::conj(t.m12)) < 1e-14);
    }
}

TEST_CASE("cell matrix: high-energy limit is a pure phase") {
    const double e = 1e8;
    const auto wp = WaveParams::at(e, kStd);
    const auto t = cell_matrix(kStd, wp);
    const double arg = wp.q * kStd.cell_width();
    CHECK(std::abs(t.m11 - std::polar(1.0, arg)) < 1e-8);
    CHECK(std::abs(t.m22 - std::polar(1.0, -arg)) < 1e-8);
    CHECK(std::abs(t.m12) < 1e-6);
    CHECK(std::abs(t.m21) < 1e-6);
}

TEST_CASE("cell matrix: two-sided continuity across e = v") {
    // The e = v point is a removable singularity; entries evaluated just
    // above and just below must agree to first order.
    const double v = kStd.barrier_height;
    const auto above = cell_matrix(kStd, WaveParams::at(v * (1 + 1e-8), kStd));
    const auto below = cell_matrix(kStd, WaveParams::at(v * (1 - 1e-8), kStd));
    CHECK(mat_dist(above, below) < 1e-6);

    // and the limit value itself is the series form 1 + i a k / (2N)
    const auto at = cell_matrix(kStd, WaveParams::at(v, kStd));
    const double ak2n = kStd.cell_width() * std::sqrt(v) / 2.0;
    CHECK(std::abs(at.m11 - complexd(1.0, ak2n)) < 1e-9);
    CHECK(std::abs(at.m12 - complexd(0.0, -ak2n)) < 1e-9);
}

TEST_CASE("total transfer matrix: v = 0 telescopes to the identity") {
    for (long n : {2L, 6L, 35L}) {
        const auto geom = free_geometry(n);
        for (double e : {1.0, 10.0, 100.0}) {
            const auto q = total_transfer_matrix(geom, WaveParams::at(e, geom));
            CHECK(mat_dist(q, Mat2c::identity()) < 1e-12);
        }
    }
}

TEST_CASE("total transfer matrix: unimodular across parameters") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> energy(0.11, 1080.0), ratio(0.3, 20.0);
    for (long n : {2L, 5L, 17L, 200L}) {
        for (int i = 0; i < 100; ++i) {
            const auto geom = make_geometry(20, BarrierCount::finite(n), ratio(rng), 60);
            const double e = energy(rng);
            const auto q = total_transfer_matrix(geom, WaveParams::at(e, geom));
            CHECK(det_defect(q) < 1e-10);
            CHECK(std::abs(q.m22 - std::conj(q.m11)) < 1e-10 * std::abs(q.m11));
            CHECK(std::abs(q.m21 - std::conj(q.m12)) < 1e-10 * std::max(1.0, std::abs(q.m12)));
        }
    }
}

TEST_CASE("scattering matrix basics and unitarity") {
    const auto s_id = s_matrix(Mat2c::identity());
    CHECK(std::abs(s_id.s11 - 1.0) < 1e-15);
    CHECK(std::abs(s_id.s12) < 1e-15);
    CHECK(std::abs(s_id.s21) < 1e-15);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> energy(0.11, 1080.0), ratio(0.3, 20.0);
    for (int i = 0; i < 400; ++i) {
        const auto geom = make_geometry(20, BarrierCount::finite(2 + i % 9), ratio(rng), 60);
        const auto q = total_transfer_matrix(geom, WaveParams::at(energy(rng), geom));
        const auto s = s_matrix(q);
        const double norm = std::norm(s.s11) + std::norm(s.s21);
        CHECK(std::abs(norm - 1.0) < 1e-10);
    }

    CHECK_THROWS_AS(s_matrix(Mat2c{1.0, 0.0, 0.0, 0.0}), NumericalError);
}

TEST_CASE("v = 0 arrays transmit fully") {
    const auto geom = free_geometry(6);
    for (double e : {0.5, 7.0, 300.0}) {
        const auto s = s_matrix(total_transfer_matrix(geom, WaveParams::at(e, geom)));
        CHECK(std::norm(s.s11) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("dense-limit cell: definitions and limits") {
    const auto geom = make_geometry(20, BarrierCount::infinite(), 3, 60);

    const auto cell = infinite_cell(geom, WaveParams::at(120, geom));
    const double k = std::sqrt(120.0), a = 5, b = 15;
    CHECK(cell.f == doctest::Approx(k * b + a * (2 * 120 - 60) / (2 * k)));
    CHECK(cell.d == doctest::Approx(-a * 60 / (2 * k)));
    CHECK(cell.phi_sq == doctest::Approx(cell.f * cell.f - cell.d * cell.d));
    CHECK(cell.tau >= 1.0);

    // e >> v: d -> 0, tau -> 1, matrix becomes a pure phase rotation
    const auto high = infinite_cell(geom, WaveParams::at(1e9, geom));
    CHECK(high.tau == doctest::Approx(1.0).epsilon(1e-8));
    const auto qh = infinite_transfer_matrix(high);
    CHECK(std::abs(qh.m12) < 1e-4);
    CHECK(std::abs(std::abs(qh.m11) - 1.0) < 1e-10);

    CHECK_THROWS_AS(infinite_cell(kStd, WaveParams::at(120, kStd)), ValidationError);
}

TEST_CASE("dense-limit cell: negative phi^2 stays finite") {
    // phi^2 < 0 requires e < v/(1+c); pick c small so the window is visible
    const auto geom = make_geometry(20, BarrierCount::infinite(), 0.5, 60);
    const auto cell = infinite_cell(geom, WaveParams::at(1.0, geom));
    CHECK(cell.phi_sq < 0.0);
    CHECK(std::isfinite(cell.cos_phi));
    CHECK(std::isfinite(cell.sinc_phi));
    CHECK(cell.cos_phi == doctest::Approx(std::cosh(std::sqrt(-cell.phi_sq))));
    const auto q = infinite_transfer_matrix(cell);
    CHECK(det_defect(q) < 1e-10);
}

TEST_CASE("dense-limit transfer matrix: unit determinant and conjugate structure") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> energy(61.0, 1080.0), ratio(0.3, 20.0);
    for (int i = 0; i < 300; ++i) {
        const auto geom = make_geometry(20, BarrierCount::infinite(), ratio(rng), 60);
        const auto cell = infinite_cell(geom, WaveParams::at(energy(rng), geom));
        const auto q = infinite_transfer_matrix(cell);
        CHECK(det_defect(q) < 1e-12);
        CHECK(std::abs(q.m22 - std::conj(q.m11)) < 1e-12);
        CHECK(std::abs(q.m21 - std::conj(q.m12)) < 1e-12);
    }

    // f = d = 0 collapses everything to diag(e^{-iz}, e^{iz})
    InfiniteNCell flat;
    flat.z = 0.7;
    flat.cos_phi = 1.0;
    flat.sinc_phi = 1.0;
    flat.tau = 1.0;
    const auto q0 = infinite_transfer_matrix(flat);
    CHECK(std::abs(q0.m11 - std::polar(1.0, -0.7)) < 1e-15);
    CHECK(std::abs(q0.m12) < 1e-15);
}

TEST_CASE("dense-limit eigenvalues: product one, unit modulus in bands") {
    const auto geom = make_geometry(20, BarrierCount::infinite(), 3, 60);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> energy(61.0, 240.0);
    for (int i = 0; i < 300; ++i) {
        const auto cell = infinite_cell(geom, WaveParams::at(energy(rng), geom));
        const auto ev = infinite_eigenvalues(cell);
        CHECK(std::abs(ev.lambda1 * ev.lambda2 - 1.0) < 1e-12);
        const double w = cell.tau * std::cos(std::sqrt(cell.phi_sq) - cell.kappa_phase);
        if (std::abs(w) < 1.0 && cell.phi_sq > 0.0) {
            CHECK(std::abs(std::abs(ev.lambda1) - 1.0) < 1e-10);
            CHECK(std::abs(std::abs(ev.lambda2) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("dense-limit eigenvalues: branch point flagged at |tau cos| = 1") {
    InfiniteNCell cell;
    cell.tau = 1.0;
    cell.kappa_phase = 0.0;
    cell.phi_sq = 0.0; // cos(phi - kappa) = 1 exactly
    cell.cos_phi = 1.0;
    cell.sinc_phi = 1.0;
    const auto ev = infinite_eigenvalues(cell);
    CHECK(ev.near_branch_point);
    CHECK(std::abs(ev.lambda1 - 1.0) < 1e-7);
    CHECK(std::abs(ev.lambda2 - 1.0) < 1e-7);
}

TEST_CASE("finite product converges to the dense-limit exponential at O(1/N)") {
    const auto geom = make_geometry(20, BarrierCount::infinite(), 3, 60);
    const auto wp = WaveParams::at(120, geom);
    const auto cell = infinite_cell(geom, wp);

    // Target: exp(i(f sigma3 + i d sigma2)) = e^{iz sigma3} * Q_inf.
    const auto q = infinite_transfer_matrix(cell);
    const Mat2c ez = Mat2c::diag(std::polar(1.0, cell.z), std::polar(1.0, -cell.z));
    const Mat2c target = ez * q;

    const double err4 = mat_dist(finite_power_approximation(geom, wp, 10'000), target);
    CHECK(err4 < 1e-3);
    const double err3 = mat_dist(finite_power_approximation(geom, wp, 1'000), target);
    CHECK(err3 / err4 > 5.0); // O(1/N)
    CHECK(err3 / err4 < 20.0);
}
