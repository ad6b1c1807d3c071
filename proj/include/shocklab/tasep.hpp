#pragma once

// Continuous-time TASEP with the deterministic two-density initial condition
// and one second-class particle at the origin. Two drivers:
//
//  * a uniformized site-clock engine (one global rate-n Poisson stream, the
//    ringing site uniform) used for the Monte Carlo experiments and for the
//    basic-coupling discrepancy runs, replayable as a pure function of the
//    seed;
//  * a waiting-time engine driven by a WeightField, where particle k's jump
//    into site s consumes the field weight at (s + k, k). This is the driver
//    the passage-time couplings are checked against.

#include <vector>

#include "shocklab/rng.hpp"

namespace shocklab::tasep {

struct TasepConfig {
    double lambda = 0.25;  // density on the negative axis
    double rho = 0.75;     // density on the positive axis
    double horizon = 0.0;
    i64 window_halfwidth = 0;      // 0 = auto from the horizon
    bool allow_unordered = false;  // permit lambda >= rho for exploratory runs

    void validate() const;
    i64 halfwidth() const;
};

// light-cone padding: 2t + 10 sqrt(t) + 10
i64 default_halfwidth(double horizon);

struct ShockSample {
    i64 x_t = 0;
    i64 n_t = 0;
    double x_rescaled = 0.0;
    double n_rescaled = 0.0;
};

ShockSample make_shock_sample(i64 x_t, i64 n_t, double t, double lambda, double rho);

class TasepState {
public:
    explicit TasepState(const TasepConfig& config);

    // explicit occupancy over [-halfwidth, halfwidth] (0 hole, 1 first class,
    // 2 second class); sc_site must carry the mark 2
    static TasepState with_occupancy(const TasepConfig& config,
                                     const std::vector<signed char>& occ, i64 sc_site);

    const TasepConfig& config() const { return config_; }
    double time() const { return time_; }
    i64 second_class_position() const { return sc_idx_ - half_; }
    i64 step_count() const { return n_steps_; }
    i64 occupancy(i64 site) const;  // 0 hole, 1 first class, 2 second class

    // Advances the uniformized dynamics to time t (t <= horizon). Throws
    // WindowOverflow if any particle reaches the window boundary.
    ShockSample run_until(double t, const SeedSpec& seed);

private:
    void apply_ring(i64 idx);
    void refill_rings(const SeedSpec& clocks);

    TasepConfig config_;
    std::vector<signed char> occ_;
    i64 half_ = 0;
    i64 sc_idx_ = 0;
    i64 n_steps_ = 0;
    double time_ = 0.0;
    // rings are generated in batches; the stream state is part of the
    // replayable state so runs can be advanced incrementally
    u64 ring_counter_ = 0;
    double ring_time_ = 0.0;
    std::vector<double> ring_times_;
    std::vector<i32> ring_sites_;
    size_t ring_cursor_ = 0;
};

TasepState init_shock_state(const TasepConfig& config);

// Two configurations coupled through the same clock stream, differing only at
// the origin. Returns the discrepancy position at each time of the grid and
// aborts if the discrepancy is ever not a single site.
std::vector<i64> run_discrepancy_grid(const TasepConfig& config, const std::vector<double>& t_grid,
                                      const SeedSpec& seed);
i64 run_discrepancy(const TasepConfig& config, double t, const SeedSpec& seed);

// Piecewise-constant trajectory of the second-class particle.
struct Trajectory {
    std::vector<double> times;     // strictly increasing, times[0] = 0
    std::vector<i64> positions;    // positions[k] holds on [times[k], times[k+1])
    double horizon = 0.0;

    i64 position_at(double t) const;
    i64 steps_until(double t) const;  // number of moves in (0, t]
};

// Second-class dynamics driven by field weights (waiting-time semantics).
// The second-class particle at X is bookkept as a hole at X and a tracer
// particle at X+1 in an ordinary TASEP whose initial data is the two-density
// profile with the right half shifted by one site; a swap transfers the
// tracer role to the arriving particle. Requires lambda <= 1/2 so that the
// first left particle starts at most at -2.
Trajectory run_second_class_weighted(const WeightField& field, double lambda, double rho,
                                     double horizon);

struct CouplingReport {
    bool ok = true;
    i64 checks = 0;
    std::string first_failure;
};

// Pathwise equivalence of the waiting-time dynamics with the passage-time
// recursion: step initial data x_n(0) = -n for n = 1..n_particles, events
// compared on every (m, n) in the window for every t in the grid.
CouplingReport verify_lpp_coupling(const WeightField& field, i64 n_particles, i64 m_max,
                                   const std::vector<double>& t_grid);

}  // namespace shocklab::tasep
