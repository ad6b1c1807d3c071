#include <doctest.h>

#include <cmath>

#include "shocklab/interface.hpp"
#include "shocklab/tasep.hpp"

using namespace shocklab;
using namespace shocklab::compint;

TEST_CASE("shock line construction and preconditions") {
    CHECK_THROWS_AS(make_shock_lines(0.6, 0.8, 10, -10), InvalidParameter);  // lambda > 1/2
    const ShockLines lines = make_shock_lines(0.25, 0.75, 6, -4);
    CHECK(lines.minus.points.back() == Point{1, 0});   // the tracer
    CHECK(lines.plus.points.front() == Point{-3, 1});  // first left particle at -4
    // right-density particles shifted one site right: original 2,3,4 -> 3,4,5
    const auto& m = lines.minus.points;
    CHECK(m[m.size() - 2] == Point{-1 + 2 + 1, -1});
}

TEST_CASE("the first interface step is always to the right") {
    for (u64 rep = 0; rep < 10; ++rep) {
        WeightField f;
        f.seed = SeedSpec{17, 0}.for_replica(rep);
        const auto path = competition_interface(f, 0.25, 0.75, 1);
        REQUIRE(path.steps.size() == 2);
        CHECK(path.steps[0] == Point{0, 0});
        CHECK(path.steps[1] == Point{1, 0});
        CHECK(path.times[0] == 0.0);
        CHECK(path.times[1] == 0.0);  // the tracer starts at site 1
    }
}

TEST_CASE("interface structure invariants") {
    WeightField f;
    f.seed = {808, 0};
    const auto path = competition_interface(f, 0.25, 0.75, 60);
    for (size_t n = 0; n < path.steps.size(); ++n) {
        CHECK(path.steps[n].x + path.steps[n].y == static_cast<i64>(n));
        if (n > 0) {
            const i64 dx = path.steps[n].x - path.steps[n - 1].x;
            const i64 dy = path.steps[n].y - path.steps[n - 1].y;
            CHECK(dx + dy == 1);
            CHECK(dx >= 0);
            CHECK(dy >= 0);
        }
        if (n >= 2) CHECK(path.times[n] > path.times[n - 1]);
    }
}

TEST_CASE("forced weights decide the first cluster membership") {
    const ShockLines lines = make_shock_lines(0.25, 0.75, 8, -8);
    WeightField f;
    f.forced = [](i64, i64) { return 1.0; };
    // paths from the upper-left half to (1,1) collect strictly more unit
    // weights than the single step from the tracer
    CHECK(cluster_of(f, lines, {1, 1}) == Cluster::kPlus);

    WeightField tie;
    tie.forced = [](i64 i, i64 j) { return (i == 1 && j == 1) ? 1.0 : 0.0; };
    CHECK_THROWS_AS(cluster_of(tie, lines, {1, 1}), DegenerateTie);
    CHECK_THROWS_AS(cluster_of(f, lines, {0, 1}), InvalidParameter);
}

TEST_CASE("cluster sides are consistent with the interface polyline") {
    WeightField f;
    f.seed = {99, 0};
    const i64 n_steps = 40;
    const auto path = competition_interface(f, 0.25, 0.75, n_steps);
    const ShockLines lines = make_shock_lines(0.25, 0.75, n_steps + 2, -3 * (n_steps + 2));
    // on each antidiagonal, points strictly right of the interface point
    // belong to the lower cluster and points strictly left to the upper one
    for (size_t n = 4; n < path.steps.size(); n += 5) {
        const Point s = path.steps[n];
        for (i64 d : {1, 2}) {
            if (s.y - d >= 1 && s.x + d >= 1)
                CHECK(cluster_of(f, lines, {s.x + d, s.y - d}) == Cluster::kMinus);
            if (s.x - d >= 1 && s.y + d >= 1)
                CHECK(cluster_of(f, lines, {s.x - d, s.y + d}) == Cluster::kPlus);
        }
    }
}

TEST_CASE("piecewise-constant readout of a synthetic path") {
    InterfacePath p;
    p.steps = {{0, 0}, {1, 0}, {1, 1}, {2, 1}};
    p.times = {0.0, 0.7, 1.5, 2.4};
    CHECK(p.position_at(0.0) == -1);  // before the first recorded move
    CHECK(p.position_at(0.699) == -1);
    CHECK(p.position_at(0.7) == 0);
    CHECK(p.position_at(1.9) == -1);
    CHECK(p.position_at(2.3999) == -1);
    CHECK_THROWS_AS(p.position_at(2.4), InsufficientHorizon);
    CHECK_THROWS_AS(p.position_at(-0.5), InvalidParameter);
}

TEST_CASE("time-changed interface equals the weight-driven second-class run") {
    const double horizon = 20.0;
    for (u64 rep = 0; rep < 10; ++rep) {
        WeightField f;
        f.seed = SeedSpec{640, 0}.for_replica(rep);
        const auto traj = tasep::run_second_class_weighted(f, 0.25, 0.75, horizon);
        const auto path = competition_interface_until(f, 0.25, 0.75, horizon);
        // compare on the union of both event sets and a uniform grid
        std::vector<double> probes = traj.times;
        for (double t = 0.0; t < horizon; t += 0.37) probes.push_back(t);
        for (double t : probes) {
            if (t >= horizon) continue;
            CHECK(path.position_at(t) == traj.position_at(t));
            CHECK(path.step_count_until(t) == traj.steps_until(t));
        }
    }
}
