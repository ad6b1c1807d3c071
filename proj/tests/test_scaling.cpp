#include <doctest.h>

#include <cmath>

#include "shocklab/scaling.hpp"

using namespace shocklab;

TEST_CASE("shock constants at the symmetric pair") {
    const ShockConstants sc = shock_constants(0.25, 0.75);
    CHECK(sc.v == 0.0);
    CHECK(sc.gamma == 0.0);
    CHECK(sc.mu0 == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK(sc.upsilon == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK(sc.sigma1 == doctest::Approx(3.0525).epsilon(2e-4));
    CHECK(sc.sigma2 == doctest::Approx(sc.sigma1).epsilon(1e-12));
    CHECK(sc.xi_lambda == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(sc.xi_rho == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("shock constants at an asymmetric pair") {
    const ShockConstants sc = shock_constants(0.2, 0.6);
    CHECK(sc.v == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sc.gamma == doctest::Approx(0.4545).epsilon(2e-4));
    CHECK(sc.mu0 == doctest::Approx(4.5455).epsilon(2e-4));
    CHECK(sc.upsilon == doctest::Approx(4.5833).epsilon(2e-4));
    CHECK(sc.sigma1 == doctest::Approx(3.0512).epsilon(2e-4));
    CHECK(sc.sigma2 == doctest::Approx(2.6652).epsilon(2e-4));
    CHECK(sc.xi_lambda > 0.0);
    CHECK(sc.xi_rho < 0.0);
}

TEST_CASE("symmetric pairs have zero speed and centered gamma") {
    for (double lambda : {0.1, 0.3, 0.45}) {
        const ShockConstants sc = shock_constants(lambda, 1.0 - lambda);
        CHECK(sc.v == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(sc.gamma == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation and degeneration of the drift gap") {
    CHECK_THROWS_AS(shock_constants(0.75, 0.25), InvalidParameter);
    CHECK_THROWS_AS(shock_constants(0.0, 0.5), InvalidParameter);
    double prev = 1e9;
    for (double gap : {0.2, 0.1, 0.05, 0.02, 0.01}) {
        const ShockConstants sc = shock_constants(0.5 - gap / 2, 0.5 + gap / 2);
        CHECK(sc.upsilon > 0.0);
        CHECK(sc.upsilon < prev);
        prev = sc.upsilon;
    }
    CHECK(prev < 0.1);  // vanishes as the densities merge
}

TEST_CASE("point-to-point scaling constants") {
    const PtPointScaling p = pt_point_scaling(1.0);
    CHECK(p.mu_pp == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(p.sigma_eta == doctest::Approx(std::pow(2.0, 4.0 / 3.0)).epsilon(1e-12));
    // normalized by the geometric mean of the two sides, the constant is
    // minimized exactly on the diagonal
    for (double eta : {0.25, 0.5, 2.0, 5.0})
        CHECK(pt_point_scaling(eta).mu_pp / std::sqrt(eta) > 4.0);
    CHECK(pt_point_scaling(1.0).mu_pp / 1.0 == doctest::Approx(4.0));
    CHECK_THROWS_AS(pt_point_scaling(0.0), InvalidParameter);
}

TEST_CASE("shock end-point placement") {
    const ShockConstants sc = shock_constants(0.25, 0.75);  // gamma = 0
    CHECK(point_P(1000, 0.0, 0.0, sc) == Point{1000, 1000});
    CHECK(point_P(1000, 2.0, 0.0, sc) == Point{1020, 980});
    // the coordinate sum never depends on u
    for (double u : {-3.0, -1.2, 0.7, 5.0}) {
        const Point p = point_P(1000, u, 1.3, sc);
        const Point q = point_P(1000, 0.0, 1.3, sc);
        CHECK(p.x + p.y == q.x + q.y);
    }
    CHECK_THROWS_AS(point_P(10, -200.0, 0.0, sc), InvalidParameter);
}

TEST_CASE("characteristic points sit between the start region and P") {
    const ShockConstants sc = shock_constants(0.25, 0.75);
    const auto [el, er] = characteristic_points(1000, 0.5, sc);
    const Point p = point_P(1000, 0.0, 0.0, sc);
    CHECK(el.x < p.x);
    CHECK(el.y < p.y);
    CHECK(er.x < p.x);
    CHECK(er.y < p.y);
    // nearly equal density pair: the two points collapse
    const ShockConstants tight = shock_constants(0.4, 0.4 + 1e-9);
    const auto [a, b] = characteristic_points(1000, 0.5, tight);
    CHECK(a == b);
    CHECK_THROWS_AS(characteristic_points(1000, 1.5, sc), InvalidParameter);
}

TEST_CASE("rescale and unrescale are exact inverses") {
    const ShockConstants sc = shock_constants(0.2, 0.6);
    for (double raw : {5300.0, 5401.25, 4999.75}) {
        for (double u : {-2.0, 0.0, 1.5}) {
            const double r = rescale(raw, 1000, u, 0.7, Side::kLambda, sc);
            CHECK(unrescale(r, 1000, u, 0.7, Side::kLambda, sc) ==
                  doctest::Approx(raw).epsilon(1e-14));
        }
    }
    // at u = v = 0 the centering collapses to mu0 * N
    const double r0 = rescale(sc.mu0 * 1000.0, 1000, 0.0, 0.0, Side::kRho, sc);
    CHECK(r0 == doctest::Approx(0.0).epsilon(1e-12));
}
