#include <algorithm>
#include <cmath>

#include "shocklab/lpp.hpp"
#include "shocklab/scaling.hpp"

namespace shocklab {

namespace {

// both half lines, pruned by the solver to what the targets can reach
struct ShockLanes {
    lpp::StartSet lambda_line;
    lpp::StartSet rho_line;
};

ShockLanes make_lanes(const ShockConstants& sc, i64 max_tx, i64 max_ty) {
    ShockLanes lanes;
    lanes.lambda_line = lpp::density_line(sc.lambda, 0, max_ty);
    i64 k_lo = -static_cast<i64>(std::ceil(static_cast<double>(max_tx) * sc.rho / (1.0 - sc.rho))) - 2;
    while (lpp::density_line_x(sc.rho, k_lo) > max_tx) ++k_lo;
    lanes.rho_line = lpp::density_line(sc.rho, k_lo, -1);
    return lanes;
}

}  // namespace

std::vector<OnePointPair> one_point_samples(i64 N, i64 replicas, const ShockConstants& sc,
                                            const SeedSpec& seed) {
    std::vector<OnePointPair> out(replicas);
    const Point p = point_P(N, 0.0, 0.0, sc);
#pragma omp parallel for schedule(dynamic)
    for (i64 rep = 0; rep < replicas; ++rep) {
        WeightField bulk;
        bulk.seed = seed.for_replica(rep);
        const ShockLanes lanes = make_lanes(sc, p.x, p.y);
        const auto res =
            lpp::solve_lines_to_points(bulk, {&lanes.lambda_line, &lanes.rho_line}, {p});
        out[rep] = {rescale(res[0][0].value, N, 0.0, 0.0, Side::kLambda, sc),
                    rescale(res[1][0].value, N, 0.0, 0.0, Side::kRho, sc)};
    }
    return out;
}

IndependenceReport independence_report(const std::vector<OnePointPair>& pairs) {
    const i64 n = static_cast<i64>(pairs.size());
    IndependenceReport rep;
    rep.n = n;
    if (n < 2) return rep;
    double ma = 0, mb = 0;
    for (const auto& p : pairs) {
        ma += p.chi_lambda;
        mb += p.chi_rho;
    }
    ma /= n;
    mb /= n;
    double saa = 0, sbb = 0, sab = 0;
    for (const auto& p : pairs) {
        const double a = p.chi_lambda - ma, b = p.chi_rho - mb;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    rep.correlation = sab / std::sqrt(saa * sbb);

    // joint empirical CDF against the product of the marginals on a grid of
    // marginal quantiles
    std::vector<double> a(n), b(n);
    for (i64 i = 0; i < n; ++i) {
        a[i] = pairs[i].chi_lambda;
        b[i] = pairs[i].chi_rho;
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const int g = 40;
    std::vector<double> qa(g), qb(g);
    for (int i = 0; i < g; ++i) {
        const size_t idx = static_cast<size_t>((i + 1) * (n - 1) / (g + 1));
        qa[i] = a[idx];
        qb[i] = b[idx];
    }
    double worst = 0.0;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            i64 joint = 0;
            for (const auto& p : pairs)
                if (p.chi_lambda <= qa[i] && p.chi_rho <= qb[j]) ++joint;
            const double f1 = static_cast<double>(std::upper_bound(a.begin(), a.end(), qa[i]) -
                                                  a.begin()) /
                              n;
            const double f2 = static_cast<double>(std::upper_bound(b.begin(), b.end(), qb[j]) -
                                                  b.begin()) /
                              n;
            worst = std::max(worst,
                             std::fabs(static_cast<double>(joint) / n - f1 * f2));
        }
    }
    rep.joint_product_sup = worst;
    return rep;
}

IndependenceReport independence_diagnostic(i64 N, i64 replicas, const ShockConstants& sc,
                                           const SeedSpec& seed) {
    return independence_report(one_point_samples(N, replicas, sc, seed));
}

std::vector<double> modulus_samples(i64 N, double C, i64 grid_per_side, i64 replicas,
                                    const ShockConstants& sc, const SeedSpec& seed,
                                    i64 corridor_halfwidth) {
    if (grid_per_side < 2) throw InvalidParameter("modulus: need at least a 2x2 grid");
    std::vector<Point> targets = {point_P(N, 0.0, 0.0, sc)};
    std::vector<std::pair<double, double>> uv = {{0.0, 0.0}};
    for (i64 a = 0; a < grid_per_side; ++a) {
        for (i64 b = 0; b < grid_per_side; ++b) {
            const double u = -C + 2.0 * C * static_cast<double>(a) / (grid_per_side - 1);
            const double v = -C + 2.0 * C * static_cast<double>(b) / (grid_per_side - 1);
            targets.push_back(point_P(N, u, v, sc));
            uv.emplace_back(u, v);
        }
    }
    i64 max_tx = 0, max_ty = 0;
    for (const Point& t : targets) {
        max_tx = std::max(max_tx, t.x);
        max_ty = std::max(max_ty, t.y);
    }

    lpp::SolveOptions opts;
    i64 k_lo = 0, k_hi = max_ty;
    if (corridor_halfwidth > 0) {
        const i64 k_star = static_cast<i64>(std::llround(sc.xi_lambda * static_cast<double>(N)));
        k_lo = std::max<i64>(0, k_star - corridor_halfwidth);
        k_hi = std::min<i64>(max_ty, k_star + corridor_halfwidth);
        opts.corridor = lpp::Corridor{{lpp::density_line_x(sc.lambda, k_star), k_star},
                                      {max_tx, max_ty},
                                      corridor_halfwidth};
    }

    std::vector<double> out(replicas);
#pragma omp parallel for schedule(dynamic)
    for (i64 rep = 0; rep < replicas; ++rep) {
        WeightField bulk;
        bulk.seed = seed.for_replica(rep);
        const lpp::StartSet line = lpp::density_line(sc.lambda, k_lo, k_hi);
        const auto res = lpp::solve_lines_to_points(bulk, {&line}, targets, opts);
        const double base = rescale(res[0][0].value, N, 0.0, 0.0, Side::kLambda, sc);
        double sup = 0.0;
        for (size_t t = 1; t < targets.size(); ++t) {
            const double r =
                rescale(res[0][t].value, N, uv[t].first, uv[t].second, Side::kLambda, sc);
            sup = std::max(sup, std::fabs(r - base));
        }
        out[rep] = sup;
    }
    return out;
}

std::vector<CrossingSample> crossing_samples(i64 N, double u_max, const ShockConstants& sc,
                                             i64 replicas, const SeedSpec& seed) {
    const double n13 = std::cbrt(static_cast<double>(N));
    const i64 u_lattice = std::max<i64>(1, static_cast<i64>(std::llround(0.1 * n13)));
    const i64 span = static_cast<i64>(std::llround(u_max * n13));
    std::vector<Point> targets;
    std::vector<i64> shifts;
    i64 zero_idx = -1;
    for (i64 U = -span; U <= span; U += u_lattice) {
        if (U == 0) zero_idx = static_cast<i64>(targets.size());
        targets.push_back(point_P(N, static_cast<double>(U) / n13, 0.0, sc));
        shifts.push_back(U);
    }
    if (zero_idx < 0) throw ContractViolation("crossing: grid must contain 0");
    i64 max_tx = 0, max_ty = 0;
    for (const Point& t : targets) {
        max_tx = std::max(max_tx, t.x);
        max_ty = std::max(max_ty, t.y);
    }

    std::vector<CrossingSample> out(replicas);
#pragma omp parallel for schedule(dynamic)
    for (i64 rep = 0; rep < replicas; ++rep) {
        WeightField bulk;
        bulk.seed = seed.for_replica(rep);
        const ShockLanes lanes = make_lanes(sc, max_tx, max_ty);
        const auto res =
            lpp::solve_lines_to_points(bulk, {&lanes.lambda_line, &lanes.rho_line}, targets);
        CrossingSample cs;
        cs.chi_lambda = rescale(res[0][zero_idx].value, N, 0.0, 0.0, Side::kLambda, sc);
        cs.chi_rho = rescale(res[1][zero_idx].value, N, 0.0, 0.0, Side::kRho, sc);
        // f(U) = L_lambda - L_rho decreases with drift -Upsilon; locate its root
        double prev = res[0][0].value - res[1][0].value;
        for (size_t i = 1; i < targets.size(); ++i) {
            const double curf = res[0][i].value - res[1][i].value;
            if (prev >= 0.0 && curf < 0.0) {
                const double frac = prev / (prev - curf);
                const double u_lo = static_cast<double>(shifts[i - 1]) / n13;
                const double u_hi = static_cast<double>(shifts[i]) / n13;
                cs.found = true;
                cs.u_star = u_lo + frac * (u_hi - u_lo);
                break;
            }
            prev = curf;
        }
        out[rep] = cs;
    }
    return out;
}

}  // namespace shocklab
