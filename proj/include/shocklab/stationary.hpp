#pragma once

// Stationary last passage percolation on an inclined line with boundary
// weights, its exit points, the deterministic comparison inequalities, and
// the exit-ordering event machinery.

#include <vector>

#include "shocklab/lpp.hpp"

namespace shocklab::stat {

// Boundary weights along the density-lambda line, anchored at omega(0) = 0.
// Each up step along the line adds an Exp(varrho) draw, each left step
// subtracts an Exp(1-varrho) draw; the increments recompute exactly from the
// two streams.
struct BoundaryWeightSeq {
    double lambda_line = 0.0;
    double varrho = 0.0;
    i64 k_lo = 0, k_hi = 0;
    std::vector<double> omega;

    double omega_at(i64 k) const {
        if (k < k_lo || k > k_hi) throw InvalidParameter("omega_at: index outside range");
        return omega[k - k_lo];
    }
};

BoundaryWeightSeq boundary_weights(double lambda_line, double varrho, i64 k_lo, i64 k_hi,
                                   const SeedSpec& seed);

// The underlying per-column / per-row draws (Exp(1-varrho) and Exp(varrho)),
// exposed so the telescoping of the boundary weights can be recomputed.
double boundary_p(const SeedSpec& seed, double varrho, i64 column);
double boundary_q(const SeedSpec& seed, double varrho, i64 row);

struct StationaryOutcome {
    double value = 0.0;
    i64 exit_k = 0;
};

// k-index around which the maximizer from the line to `target` concentrates.
i64 characteristic_exit(double lambda_line, double varrho, Point target);

// Stationary model: line density, boundary parameter, and the seed whose
// kBoundaryP/kBoundaryQ streams generate the boundary weights (the bulk field
// passed to solve keeps its own stream, so several models can share bulk
// randomness).
struct StationaryModel {
    double lambda_line = 0.0;
    double varrho = 0.0;
    SeedSpec seed;

    // Truncates the line to a window around the characteristic exits of the
    // targets (halfwidth max(20, 12 N^(2/3))) and doubles it whenever an
    // argmax lands on a truncation edge.
    std::vector<StationaryOutcome> solve(const WeightField& bulk,
                                         const std::vector<Point>& targets) const;
};

// Deterministic comparison of increments against the stationary model on the
// same bulk weights. Targets are (N + x, N - x).
struct CouplingCheck {
    bool premise_up = false;   // stationary exit at x1 <= plain exit at x2
    bool holds_up = true;      // plain increment <= stationary increment
    bool premise_down = false; // plain exit at x1 <= stationary exit at x2
    bool holds_down = true;    // stationary increment <= plain increment
};
CouplingCheck coupling_inequality_check(const WeightField& bulk, const StationaryModel& model,
                                        i64 N, i64 x1, i64 x2);

// Tail profile of the stationary exit point: targets ((1-r)^2 N + x, r^2 N - x)
// with x = round(c N^(1/3)). Returns (M, empirical P(|exit| >= M N^(2/3)))
// with a flag for levels beyond the truncation window.
struct TailPoint {
    double m = 0.0;
    double probability = 0.0;
    bool beyond_window = false;
};
std::vector<TailPoint> exit_tail_profile(i64 N, double lambda_line, double varrho, double c,
                                         const std::vector<double>& m_grid, i64 replicas,
                                         const SeedSpec& seed);

// Same profile for the plain (boundary-free) line from the shock geometry,
// centered at the macroscopic exit xi_lambda * N.
std::vector<TailPoint> exit_tail_profile_plain(i64 N, double lambda, double rho, double c,
                                               const std::vector<double>& m_grid, i64 replicas,
                                               const SeedSpec& seed);

// One sample of the exit-ordering event and the increment sandwich built on
// shared bulk weights: stationary models at varrho = lambda -+ r N^(-1/3)
// and the plain line, targets on the antidiagonal through the shock point.
struct GoodEventSample {
    bool good = false;          // both exit orderings hold
    bool sandwich_checked = false;
    bool sandwich_ok = true;    // increments ordered on every grid pair
};
GoodEventSample good_event_sample(i64 N, double r, double C, double lambda, double rho,
                                  const SeedSpec& seed, bool check_sandwich,
                                  const std::vector<double>& u_grid = {});

// Complement probability estimate of the exit-ordering event.
double good_event_complement(i64 N, double r, double C, double lambda, double rho, i64 replicas,
                             const SeedSpec& seed);

// Rescaled stationary process at varrho = lambda + sign*r*N^(-1/3) on the
// u-grid: b[i] = (L(P(u_i N^(1/3))) - L(P(0)) + drift*u_i N^(1/3)) / N^(1/3)
// and the centered walk scaled by N^(1/6).
struct RescaledIncrements {
    std::vector<double> b;
    std::vector<double> walk;
};
RescaledIncrements stationary_rescaled_increments(i64 N, const std::vector<double>& u_grid,
                                                  double lambda, double rho, double r, int sign,
                                                  const SeedSpec& seed);

}  // namespace shocklab::stat
