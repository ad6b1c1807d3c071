#include <doctest.h>

#include <cmath>

#include "shocklab/stationary.hpp"
#include "shocklab/stats.hpp"

using namespace shocklab;
using namespace shocklab::stat;

TEST_CASE("boundary weights anchor and index arithmetic") {
    const SeedSpec seed{42, 0};
    const auto bw = boundary_weights(0.5, 0.3, -5, 5, seed);
    CHECK(bw.omega_at(0) == 0.0);
    // density 1/2, k = 2: two q's minus the p's of columns 0 and -1
    const double expect = boundary_q(seed, 0.3, 1) + boundary_q(seed, 0.3, 2) -
                          boundary_p(seed, 0.3, 0) - boundary_p(seed, 0.3, -1);
    CHECK(bw.omega_at(2) == doctest::Approx(expect).epsilon(1e-14));
    CHECK_THROWS_AS(boundary_weights(0.5, 1.5, -1, 1, seed), InvalidParameter);
    CHECK_THROWS_AS(bw.omega_at(6), InvalidParameter);
}

TEST_CASE("boundary increments telescope from the two streams") {
    const SeedSpec seed{4242, 0};
    const double lam = 0.25, rho_b = 0.6;
    const auto bw = boundary_weights(lam, rho_b, -20, 20, seed);
    for (i64 k = -19; k <= 20; ++k) {
        double inc = boundary_q(seed, rho_b, k);
        for (i64 c = lpp::density_line_x(lam, k) + 1; c <= lpp::density_line_x(lam, k - 1); ++c)
            inc -= boundary_p(seed, rho_b, c);
        CHECK(bw.omega_at(k) - bw.omega_at(k - 1) == doctest::Approx(inc).epsilon(1e-12));
    }
}

TEST_CASE("boundary drift matches the direct stream summation") {
    const SeedSpec seed{7, 0};
    const double lam = 0.5;
    const i64 k = 10000;
    const auto bw = boundary_weights(lam, lam, k, k, seed);
    double direct = 0.0;
    for (i64 r = 1; r <= k; ++r) direct += boundary_q(seed, lam, r);
    for (i64 c = lpp::density_line_x(lam, k) + 1; c <= 0; ++c)
        direct -= boundary_p(seed, lam, c);
    CHECK(bw.omega_at(k) == doctest::Approx(direct).epsilon(1e-10));
    // mean per step: 1/varrho - (1-lambda)/(lambda(1-varrho)) = 2 - 2 = 0 here
    CHECK(std::fabs(bw.omega_at(k) / static_cast<double>(k)) <= 0.1);
}

TEST_CASE("characteristic exit of the stationary geodesic") {
    // density 1/4 line to (N, N) at varrho = 1/4 exits near 2N/3
    CHECK(characteristic_exit(0.25, 0.25, {900, 900}) == 600);
    // the 45-degree line with target on its symmetry axis exits near 0
    CHECK(characteristic_exit(0.5, 0.5, {700, 700}) == 0);
}

TEST_CASE("singleton window reduces to point-to-point") {
    WeightField bulk;
    bulk.seed = {11, 0};
    lpp::StartSet single;
    single.points = {{0, 0}};
    single.boundary_value = {0.0};
    const Point target{40, 35};
    const auto via_line = lpp::solve_lines_to_points(bulk, {&single}, {target});
    const auto via_point = lpp::lpp_point_to_point(bulk, {0, 0}, target);
    CHECK(via_line[0][0].value == via_point.value);
}

TEST_CASE("stationary solve finds interior exits and flags impossible setups") {
    WeightField bulk;
    bulk.seed = {2311, 0};
    StationaryModel model{0.25, 0.25, bulk.seed};
    const auto out = model.solve(bulk, {{300, 300}});
    CHECK(out[0].exit_k > 100);
    CHECK(out[0].exit_k < 290);
    CHECK(out[0].value > 0.0);
}

TEST_CASE("horizontal increments of the stationary value are Exp(1-varrho)") {
    const double lam = 0.25, varrho = 0.4;
    const i64 N = 120;
    const i64 incr_per_rep = 20, reps = 150;
    std::vector<double> incs;
    std::vector<double> lag_a, lag_b;
    for (i64 rep = 0; rep < reps; ++rep) {
        const SeedSpec rs = SeedSpec{909, 0}.for_replica(rep);
        WeightField bulk;
        bulk.seed = rs;
        StationaryModel model{lam, varrho, rs};
        std::vector<Point> targets;
        for (i64 i = 0; i <= incr_per_rep; ++i) targets.push_back({N + i, N});
        const auto out = model.solve(bulk, targets);
        for (i64 i = 1; i <= incr_per_rep; ++i) {
            incs.push_back(out[i].value - out[i - 1].value);
            if (i >= 2) {
                lag_a.push_back(out[i - 1].value - out[i - 2].value);
                lag_b.push_back(out[i].value - out[i - 1].value);
            }
        }
    }
    std::sort(incs.begin(), incs.end());
    CHECK(incs.front() > 0.0);
    const double ks = mc::ks_statistic(
        incs, [&](double x) { return 1.0 - std::exp(-(1.0 - varrho) * x); });
    CHECK(ks <= 0.035);  // 3000 samples
    CHECK(std::fabs(mc::pearson(lag_a, lag_b)) <= 0.06);
}

TEST_CASE("deterministic coupling inequalities never fail (small scale)") {
    const i64 N = 150;
    i64 premise_hits = 0;
    for (u64 rep = 0; rep < 60; ++rep) {
        const SeedSpec rs = SeedSpec{321, 0}.for_replica(rep);
        WeightField bulk;
        bulk.seed = rs;
        const double n13 = std::cbrt(static_cast<double>(N));
        StationaryModel model{0.25, 0.25 + 1.0 / n13, rs};
        const auto c = coupling_inequality_check(bulk, model, N, 3, 11);
        if (c.premise_up) {
            ++premise_hits;
            CHECK(c.holds_up);
        }
        if (c.premise_down) {
            ++premise_hits;
            CHECK(c.holds_down);
        }
    }
    CHECK(premise_hits > 0);  // the check must actually bite
}

TEST_CASE("degenerate x1 = x2 collapses to zero on both sides") {
    WeightField bulk;
    bulk.seed = {5, 0};
    StationaryModel model{0.25, 0.3, bulk.seed};
    const auto c = coupling_inequality_check(bulk, model, 100, 4, 4);
    // the increments collapse to 0 <= 0 whenever a premise holds
    CHECK(c.holds_up);
    CHECK(c.holds_down);
    CHECK_THROWS_AS(coupling_inequality_check(bulk, model, 100, 0, 4), InvalidParameter);
}

TEST_CASE("exit tail profile is nonincreasing with gaussian-looking decay") {
    const std::vector<double> grid = {0.4, 0.8, 1.2, 1.6};
    const auto prof = exit_tail_profile(60, 0.25, 0.5, 1.0, grid, 400, {2024, 0});
    for (size_t i = 1; i < prof.size(); ++i) CHECK(prof[i].probability <= prof[i - 1].probability);
    CHECK(prof[0].probability > prof.back().probability);
    CHECK_FALSE(prof[0].beyond_window);
}

TEST_CASE("good event requires valid perturbed densities") {
    CHECK_THROWS_AS(good_event_complement(125, 8.0, 2.0, 0.25, 0.75, 4, {1, 0}),
                    InvalidParameter);
    // r -> 0 keeps the densities valid and the event nontrivial
    const double c = good_event_complement(125, 0.5, 1.0, 0.25, 0.75, 40, {1, 0});
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
}

TEST_CASE("rescaled stationary process starts at zero and has linear variance") {
    const i64 N = 200;
    const std::vector<double> grid = {0.5, 1.0, 2.0};
    std::vector<double> b1, b2, b4;
    for (u64 rep = 0; rep < 400; ++rep) {
        const auto inc = stationary_rescaled_increments(N, grid, 0.25, 0.75, 1.0, +1,
                                                        SeedSpec{31, 0}.for_replica(rep));
        b1.push_back(inc.walk[0]);
        b2.push_back(inc.walk[1]);
        b4.push_back(inc.walk[2]);
    }
    // var of the centered walk grows linearly in u
    const double v1 = mc::variance_of(b1), v2 = mc::variance_of(b2), v4 = mc::variance_of(b4);
    CHECK(v2 / v1 == doctest::Approx(2.0).epsilon(0.35));
    CHECK(v4 / v2 == doctest::Approx(2.0).epsilon(0.35));
}
