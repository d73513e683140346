#include "doctest.h"

#include <random>

#include "mbp/geometry.hpp"

using namespace mbp;

TEST_CASE("derived widths from L and c") {
    const auto g = make_geometry(20, BarrierCount::finite(6), 3, 60);
    CHECK(g.total_barrier_width() == doctest::Approx(5.0));
    CHECK(g.total_gap_width() == doctest::Approx(15.0));
    CHECK(g.cell_width() == doctest::Approx(5.0 / 6.0));
    CHECK(g.gap_width() == doctest::Approx(3.0));
}

TEST_CASE("symmetric case c=1 gives a=b") {
    const auto g = make_geometry(20, BarrierCount::finite(2), 1, 60);
    CHECK(g.total_barrier_width() == doctest::Approx(10.0));
    CHECK(g.total_gap_width() == doctest::Approx(10.0));
    CHECK(g.gap_width() == doctest::Approx(10.0));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(BarrierCount::finite(1), ValidationError);
    CHECK_THROWS_AS(BarrierCount::finite(0), ValidationError);
    CHECK_THROWS_AS(make_geometry(-1, BarrierCount::finite(2), 1, 60), ValidationError);
    CHECK_THROWS_AS(make_geometry(20, BarrierCount::finite(2), 0, 60), ValidationError);
    CHECK_THROWS_AS(make_geometry(20, BarrierCount::finite(2), 1, -5), ValidationError);
}

TEST_CASE("a + b = L and a decreases with c") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> len(0.5, 200.0), ratio(0.01, 50.0);
    double prev_a = -1.0;
    for (int i = 0; i < 200; ++i) {
        const double L = len(rng);
        const double c = ratio(rng);
        const auto g = make_geometry(L, BarrierCount::finite(2 + i % 40), c, 60);
        CHECK(std::abs(g.total_barrier_width() + g.total_gap_width() - L) <= 1e-12 * L);
        CHECK(g.total_barrier_width() > 0.0);
        CHECK(g.total_gap_width() > 0.0);
    }
    for (double c : {0.1, 0.5, 1.0, 5.0, 20.0}) {
        const auto g = make_geometry(20, BarrierCount::finite(4), c, 60);
        if (prev_a > 0.0) CHECK(g.total_barrier_width() < prev_a);
        prev_a = g.total_barrier_width();
    }
}

TEST_CASE("infinite barrier count is a distinct case") {
    const auto inf = BarrierCount::infinite();
    CHECK(inf.is_infinite());
    CHECK_THROWS(inf.value());
    CHECK(inf.str() == "inf");
    const auto g = make_geometry(20, inf, 3, 60);
    CHECK(g.total_barrier_width() == doctest::Approx(5.0));
}

TEST_CASE("spectrum config tail index and boundary warning") {
    SpectrumConfig cfg; // C=90, e_split=1080
    CHECK(cfg.tail_start_index() == 941);
    CHECK(cfg.tail_start_energy() == doctest::Approx(1078.9317499606).epsilon(1e-9));
    CHECK(cfg.tail_start_energy() <= cfg.e_split);

    const auto near = make_geometry(30, BarrierCount::finite(2), 1, 60);
    CHECK(cfg.boundary_too_close(near)); // C/L = 3 < 4.5
    const auto far = make_geometry(20, BarrierCount::finite(2), 1, 60);
    CHECK(!cfg.boundary_too_close(far)); // C/L = 4.5
}
