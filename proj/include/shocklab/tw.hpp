#pragma once

// Tracy-Widom GUE/GOE distribution functions via Nystrom-discretized
// Fredholm determinants, and the two-variable GOE combination laws the shock
// limit needs. Tables are immutable once built and safe to share across
// threads.

#include <string>
#include <vector>

#include "shocklab/common.hpp"
#include "shocklab/rng.hpp"
#include "shocklab/scaling.hpp"

namespace shocklab::tw {

// Airy function and derivative. Maclaurin series on |x| <= 8, asymptotic
// expansions beyond, smoothly blended over [7.5, 8.5]. Valid for |x| <= 40.
double airy_ai(double x);
double airy_ai_prime(double x);

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const Quadrature& gauss_legendre(int order);

// F_GUE(s): det(I - K_Airy) on L^2(s, infinity), Airy kernel.
double f_gue_cdf(double s, int order = 64);

// F_GOE(s): det(I - B) on L^2(s/2, infinity) with B(x,y) = Ai(x+y).
double f_goe_cdf(double s, int order = 64);

// Raw scalar-kernel determinant det(I - Ai(x+y)) on L^2(window_lo, infinity),
// kept separate so the argument/window bookkeeping can be cross-checked.
double goe_scalar_determinant(double window_lo, int order = 64);

struct DistTable {
    std::vector<double> s_grid;  // increasing
    std::vector<double> cdf;     // nondecreasing, in [0, 1]
    int order = 0;
    std::string kernel_id;

    double cdf_at(double s) const;       // monotone cubic interpolation, clamped
    double quantile(double u) const;     // inverse CDF
    std::vector<double> density() const; // centered differences on the grid
    double mean() const;
    double variance() const;
    double sample(const SeedSpec& seed, u64 counter) const;
};

DistTable tabulate_gue(int order = 64, double s_lo = -10.0, double s_hi = 7.0,
                       double step = 0.02);
DistTable tabulate_goe(int order = 64, double s_lo = -10.0, double s_hi = 7.0,
                       double step = 0.02);

// CDF of a*xi1 + b*xi2 with xi1, xi2 independent GOE Tracy-Widom variables.
// A vanishing coefficient degenerates to the single-variable law.
DistTable two_goe_combination(double a, double b, const DistTable& goe, double s_lo,
                              double s_hi, double step = 0.02);

// Coefficients of the limit laws for the second-class particle position (X)
// and its jump count (N), as linear combinations of two independent GOE
// Tracy-Widom variables.
struct LimitCoefficients {
    double a = 0.0, b = 0.0;
};
LimitCoefficients x_limit_coefficients(const ShockConstants& sc);
LimitCoefficients n_limit_coefficients(const ShockConstants& sc);

enum class LimitLaw { kPosition, kJumpCount };
DistTable limit_law_cdf(LimitLaw which, const ShockConstants& sc, const DistTable& goe);

}  // namespace shocklab::tw
