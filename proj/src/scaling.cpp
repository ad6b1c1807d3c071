#include "shocklab/scaling.hpp"

#include <cmath>

namespace shocklab {

ShockConstants shock_constants(double lambda, double rho) {
    if (!(0.0 < lambda && lambda < rho && rho < 1.0))
        throw InvalidParameter("shock_constants: need 0 < lambda < rho < 1");
    ShockConstants sc;
    sc.lambda = lambda;
    sc.rho = rho;
    sc.v = 1.0 - lambda - rho;
    sc.denom = 1.0 - lambda - rho + 2.0 * lambda * rho;
    sc.gamma = sc.v / sc.denom;
    sc.mu0 = 2.0 / sc.denom;
    sc.drift_lambda = (1.0 - 2.0 * lambda) / (lambda * (1.0 - lambda));
    sc.drift_rho = (1.0 - 2.0 * rho) / (rho * (1.0 - rho));
    sc.upsilon = sc.drift_lambda - sc.drift_rho;
    const double c = std::cbrt(2.0);
    sc.sigma1 = c / std::cbrt(lambda * (1.0 - lambda) * sc.denom);
    sc.sigma2 = c / std::cbrt(rho * (1.0 - rho) * sc.denom);
    sc.xi_lambda = 2.0 * (rho - lambda) * lambda / sc.denom;
    sc.xi_rho = -2.0 * (rho - lambda) * rho / sc.denom;
    sc.char_dir_lambda[0] = (1.0 - lambda) * (1.0 - lambda);
    sc.char_dir_lambda[1] = lambda * lambda;
    sc.char_dir_rho[0] = (1.0 - rho) * (1.0 - rho);
    sc.char_dir_rho[1] = rho * rho;
    return sc;
}

PtPointScaling pt_point_scaling(double eta) {
    if (!(eta > 0.0)) throw InvalidParameter("pt_point_scaling: eta must be positive");
    PtPointScaling p;
    p.eta = eta;
    const double r = 1.0 + std::sqrt(eta);
    p.mu_pp = r * r;
    p.sigma_eta = std::pow(eta, -1.0 / 6.0) * std::pow(r, 4.0 / 3.0);
    return p;
}

Point point_P(i64 N, double u, double v, const ShockConstants& sc) {
    const double n13 = std::cbrt(static_cast<double>(N));
    const double nt = static_cast<double>(N) + v * n13;
    const i64 sum = 2 * static_cast<i64>(std::llround(nt));
    const i64 x = static_cast<i64>(std::llround((1.0 + sc.gamma) * nt + u * n13));
    const Point p{x, sum - x};
    if (p.x <= 0 || p.y <= 0)
        throw InvalidParameter("point_P: coordinates must stay positive");
    return p;
}

std::pair<Point, Point> characteristic_points(i64 N, double nu, const ShockConstants& sc) {
    if (!(nu > 0.0 && nu < 1.0)) throw InvalidParameter("characteristic_points: nu in (0,1)");
    const Point p = point_P(N, 0.0, 0.0, sc);
    const double step = std::pow(static_cast<double>(N), nu);
    const Point e_lambda{p.x - static_cast<i64>(std::llround(sc.char_dir_lambda[0] * step)),
                         p.y - static_cast<i64>(std::llround(sc.char_dir_lambda[1] * step))};
    const Point e_rho{p.x - static_cast<i64>(std::llround(sc.char_dir_rho[0] * step)),
                      p.y - static_cast<i64>(std::llround(sc.char_dir_rho[1] * step))};
    return {e_lambda, e_rho};
}

double rescale(double raw, i64 N, double u, double v, Side side, const ShockConstants& sc) {
    const double n13 = std::cbrt(static_cast<double>(N));
    const double drift = side == Side::kLambda ? sc.drift_lambda : sc.drift_rho;
    const double center = sc.mu0 * (static_cast<double>(N) + v * n13) - drift * u * n13;
    return (raw - center) / n13;
}

double unrescale(double rescaled, i64 N, double u, double v, Side side,
                 const ShockConstants& sc) {
    const double n13 = std::cbrt(static_cast<double>(N));
    const double drift = side == Side::kLambda ? sc.drift_lambda : sc.drift_rho;
    const double center = sc.mu0 * (static_cast<double>(N) + v * n13) - drift * u * n13;
    return rescaled * n13 + center;
}

}  // namespace shocklab
