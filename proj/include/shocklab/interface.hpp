#pragma once

// Competition interface between the two growth clusters fed by the halves of
// the initial line, and its time change into the second-class particle
// trajectory.
//
// The second-class particle at the origin is bookkept as a hole at 0 plus a
// tracer particle at 1 (label 0), with the right-density particles shifted
// one site to the right by the extra site. The resulting labeled line is
// split into the half with labels >= 1 and the half with labels <= 0; the
// interface steps right when the next diagonal cell belongs to the upper
// cluster and the passage time to the n-th interface point is the time of
// the (n-1)-th second-class move.

#include <vector>

#include "shocklab/lpp.hpp"

namespace shocklab::compint {

enum class Cluster { kPlus, kMinus };

struct ShockLines {
    lpp::StartSet plus;   // labels k >= 1 (left densities)
    lpp::StartSet minus;  // labels k <= 0 (tracer and right densities)
    double lambda = 0.0, rho = 0.0;
};

// Requires lambda <= 1/2 (the first left particle must start at -2 or lower,
// otherwise the two clusters tie on the first diagonal cell).
ShockLines make_shock_lines(double lambda, double rho, i64 k_max_plus, i64 k_min_minus);

// Cluster membership of p (both coordinates >= 1). Exact equality of the two
// passage times throws DegenerateTie.
Cluster cluster_of(const WeightField& field, const ShockLines& lines, Point p);

struct InterfacePath {
    std::vector<Point> steps;   // steps[n] is the n-th interface point, steps[0] = (0,0)
    std::vector<double> times;  // times[n] = passage time to steps[n]; times[0] = times[1] = 0

    i64 position_at(double t) const;     // I(t) - J(t) - 1
    i64 step_count_until(double t) const;  // moves made by the second-class particle by time t
};

InterfacePath competition_interface(const WeightField& field, double lambda, double rho,
                                    i64 n_steps);

// Grows the interface until its clock passes the horizon.
InterfacePath competition_interface_until(const WeightField& field, double lambda, double rho,
                                          double horizon);

}  // namespace shocklab::compint
