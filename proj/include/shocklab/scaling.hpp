#pragma once

// Deterministic constants of the shock geometry and the affine rescalings of
// line-to-point passage times around the shock end-point.

#include <utility>
#include <vector>

#include "shocklab/common.hpp"
#include "shocklab/rng.hpp"

namespace shocklab {

struct ShockConstants {
    double lambda = 0.0, rho = 0.0;
    double v = 0.0;        // shock speed 1 - lambda - rho
    double denom = 0.0;    // 1 - lambda - rho + 2*lambda*rho
    double gamma = 0.0;    // v / denom
    double mu0 = 0.0;      // 2 / denom
    double upsilon = 0.0;  // drift gap between the two sides
    double sigma1 = 0.0, sigma2 = 0.0;
    double xi_lambda = 0.0, xi_rho = 0.0;  // macroscopic exit positions (units of N)
    double drift_lambda = 0.0;             // (1-2*lambda)/(lambda*(1-lambda))
    double drift_rho = 0.0;
    double char_dir_lambda[2] = {0, 0};  // ((1-lambda)^2, lambda^2)
    double char_dir_rho[2] = {0, 0};
};

// Requires 0 < lambda < rho < 1.
ShockConstants shock_constants(double lambda, double rho);

struct PtPointScaling {
    double eta = 1.0;
    double mu_pp = 4.0;     // (1 + sqrt(eta))^2
    double sigma_eta = 0.0; // eta^(-1/6) * (1 + sqrt(eta))^(4/3)
};
PtPointScaling pt_point_scaling(double eta);

// Lattice point P(u, v) = ((1+gamma)*Nt, (1-gamma)*Nt) + u*N^(1/3)*(1, -1)
// with Nt = N + v*N^(1/3). x is rounded to the nearest integer and y is
// derived from the rounded coordinate sum, so x + y is independent of u.
Point point_P(i64 N, double u, double v, const ShockConstants& sc);

// Points on the two characteristics at distance N^nu from P.
std::pair<Point, Point> characteristic_points(i64 N, double nu, const ShockConstants& sc);

enum class Side { kLambda, kRho };

// Affine centering/scaling of a raw passage time at P(u, v); exact inverse in
// unrescale.
double rescale(double raw, i64 N, double u, double v, Side side, const ShockConstants& sc);
double unrescale(double rescaled, i64 N, double u, double v, Side side, const ShockConstants& sc);

// --- Monte Carlo diagnostics around the shock point ---------------------

// Rescaled passage times from the two half lines to P(0,0) on shared bulk
// weights, one pair per replica.
struct OnePointPair {
    double chi_lambda = 0.0;
    double chi_rho = 0.0;
};
std::vector<OnePointPair> one_point_samples(i64 N, i64 replicas, const ShockConstants& sc,
                                            const SeedSpec& seed);

struct IndependenceReport {
    double correlation = 0.0;
    double joint_product_sup = 0.0;  // sup |F12 - F1*F2| over a quantile grid
    i64 n = 0;
};
IndependenceReport independence_diagnostic(i64 N, i64 replicas, const ShockConstants& sc,
                                           const SeedSpec& seed);
IndependenceReport independence_report(const std::vector<OnePointPair>& pairs);

// Per replica, sup over the (u,v) grid of |Lresc(u,v) - Lresc(0,0)| on the
// lambda side. Optional corridor halfwidth trims the DP to the maximizer
// corridor (only sensible when well above 10 N^(2/3)).
std::vector<double> modulus_samples(i64 N, double C, i64 grid_per_side, i64 replicas,
                                    const ShockConstants& sc, const SeedSpec& seed,
                                    i64 corridor_halfwidth = 0);

// Crossing of the two drift-adjusted rescaled profiles along the
// antidiagonal: the scaled location where the lambda-side passage time stops
// dominating the rho side.
struct CrossingSample {
    bool found = false;
    double u_star = 0.0;
    double chi_lambda = 0.0;
    double chi_rho = 0.0;
};
std::vector<CrossingSample> crossing_samples(i64 N, double u_max, const ShockConstants& sc,
                                             i64 replicas, const SeedSpec& seed);

}  // namespace shocklab
