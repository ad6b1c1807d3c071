#include "shocklab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shocklab/scaling.hpp"

namespace shocklab::stat {

double boundary_p(const SeedSpec& seed, double varrho, i64 column) {
    const SeedSpec s = seed.with_tag(SeedSpec::kBoundaryP);
    return exponential_from_uniform(
        sample_uniform(s, static_cast<u64>(static_cast<u32>(column))), 1.0 - varrho);
}

double boundary_q(const SeedSpec& seed, double varrho, i64 row) {
    const SeedSpec s = seed.with_tag(SeedSpec::kBoundaryQ);
    return exponential_from_uniform(sample_uniform(s, static_cast<u64>(static_cast<u32>(row))),
                                    varrho);
}

BoundaryWeightSeq boundary_weights(double lambda_line, double varrho, i64 k_lo, i64 k_hi,
                                   const SeedSpec& seed) {
    if (!(varrho > 0.0 && varrho < 1.0))
        throw InvalidParameter("boundary_weights: varrho must lie in (0,1)");
    if (!(lambda_line > 0.0 && lambda_line < 1.0))
        throw InvalidParameter("boundary_weights: line density must lie in (0,1)");
    if (k_lo > k_hi) throw InvalidParameter("boundary_weights: empty range");

    BoundaryWeightSeq bw;
    bw.lambda_line = lambda_line;
    bw.varrho = varrho;
    bw.k_lo = k_lo;
    bw.k_hi = k_hi;
    bw.omega.assign(k_hi - k_lo + 1, 0.0);

    auto store = [&](i64 k, double v) {
        if (k >= k_lo && k <= k_hi) bw.omega[k - k_lo] = v;
    };
    store(0, 0.0);
    // anchored at omega(0) = 0; going up (k > 0) each row adds a q and each
    // crossed column subtracts a p, going down it is the reverse
    double acc = 0.0;
    for (i64 k = 1; k <= k_hi; ++k) {
        acc += boundary_q(seed, varrho, k);
        const i64 from = lpp::density_line_x(lambda_line, k) + 1;
        const i64 to = lpp::density_line_x(lambda_line, k - 1);
        for (i64 c = from; c <= to; ++c) acc -= boundary_p(seed, varrho, c);
        store(k, acc);
    }
    acc = 0.0;
    for (i64 k = -1; k >= k_lo; --k) {
        acc -= boundary_q(seed, varrho, k + 1);
        const i64 from = lpp::density_line_x(lambda_line, k + 1) + 1;
        const i64 to = lpp::density_line_x(lambda_line, k);
        for (i64 c = from; c <= to; ++c) acc += boundary_p(seed, varrho, c);
        store(k, acc);
    }
    return bw;
}

i64 characteristic_exit(double lambda_line, double varrho, Point target) {
    const double a = (1.0 - varrho) * (1.0 - varrho);
    const double b = varrho * varrho;
    const double num = lambda_line * (a * static_cast<double>(target.y) -
                                      b * static_cast<double>(target.x));
    const double den = lambda_line * a + (1.0 - lambda_line) * b;
    return static_cast<i64>(std::llround(num / den));
}

namespace {

struct StatLaneSpec {
    double varrho = 0.0;
    SeedSpec seed;
};

struct FusedResult {
    std::vector<std::vector<StationaryOutcome>> stat;  // [lane][target]
    std::vector<std::vector<lpp::TargetValue>> plain;  // [target] (if requested)
};

// One sweep over shared bulk weights: any number of stationary lanes (each
// with its own truncation window, jointly doubled on an edge argmax) plus an
// optional plain boundary-free lane on the same line.
FusedResult solve_fused(const WeightField& bulk, double lambda_line,
                        const std::vector<StatLaneSpec>& specs, bool with_plain,
                        const std::vector<Point>& targets) {
    i64 max_tx = targets.at(0).x, max_ty = targets[0].y;
    double scale = 0.0;
    for (const Point& t : targets) {
        max_tx = std::max(max_tx, t.x);
        max_ty = std::max(max_ty, t.y);
        scale = std::max(scale, 0.5 * static_cast<double>(t.x + t.y));
    }
    // feasibility range of line indices
    i64 feas_lo = -static_cast<i64>(
        std::ceil(static_cast<double>(std::max<i64>(max_tx, 1)) * lambda_line /
                  (1.0 - lambda_line))) -
        2;
    while (lpp::density_line_x(lambda_line, feas_lo) > max_tx) ++feas_lo;
    const i64 feas_hi = max_ty;

    i64 w = std::max<i64>(20, static_cast<i64>(std::ceil(12.0 * std::pow(scale, 2.0 / 3.0))));
    for (int attempt = 0; attempt < 7; ++attempt) {
        std::vector<lpp::StartSet> sets(specs.size());
        std::vector<i64> klo(specs.size()), khi(specs.size());
        for (size_t l = 0; l < specs.size(); ++l) {
            i64 k_min = std::numeric_limits<i64>::max(), k_max = std::numeric_limits<i64>::min();
            for (const Point& t : targets) {
                const i64 k = characteristic_exit(lambda_line, specs[l].varrho, t);
                k_min = std::min(k_min, k);
                k_max = std::max(k_max, k);
            }
            klo[l] = std::max(feas_lo, k_min - w);
            khi[l] = std::min(feas_hi, k_max + w);
            if (klo[l] > khi[l]) throw InvalidParameter("stationary window empty");
            const BoundaryWeightSeq bw =
                boundary_weights(lambda_line, specs[l].varrho, klo[l], khi[l], specs[l].seed);
            sets[l] = lpp::density_line(lambda_line, klo[l], khi[l]);
            sets[l].boundary_value = bw.omega;
        }
        lpp::StartSet plain;
        std::vector<const lpp::StartSet*> lanes;
        for (const auto& s : sets) lanes.push_back(&s);
        if (with_plain) {
            plain = lpp::density_line(lambda_line, 0, feas_hi);
            lanes.push_back(&plain);
        }
        const auto res = lpp::solve_lines_to_points(bulk, lanes, targets);

        bool edge = false;
        FusedResult out;
        out.stat.resize(specs.size());
        for (size_t l = 0; l < specs.size(); ++l) {
            out.stat[l].resize(targets.size());
            for (size_t t = 0; t < targets.size(); ++t) {
                const auto& tv = res[l][t];
                if (!tv.reachable)
                    throw InvalidParameter("stationary solve: unreachable target");
                const i64 k = klo[l] + tv.exit_index;
                out.stat[l][t] = {tv.value, k};
                if ((k == klo[l] && klo[l] != feas_lo) || (k == khi[l] && khi[l] != feas_hi))
                    edge = true;
            }
        }
        if (edge) {
            w *= 2;
            continue;
        }
        if (with_plain) out.plain.push_back(res.back());
        return out;
    }
    throw WindowOverflow("stationary solve: truncation window kept hitting its edge");
}

}  // namespace

std::vector<StationaryOutcome> StationaryModel::solve(const WeightField& bulk,
                                                      const std::vector<Point>& targets) const {
    return solve_fused(bulk, lambda_line, {{varrho, seed}}, false, targets).stat[0];
}

CouplingCheck coupling_inequality_check(const WeightField& bulk, const StationaryModel& model,
                                        i64 N, i64 x1, i64 x2) {
    if (!(0 < x1 && x1 <= x2)) throw InvalidParameter("coupling check: need 0 < x1 <= x2");
    const std::vector<Point> targets = {{N + x1, N - x1}, {N + x2, N - x2}};
    const FusedResult r =
        solve_fused(bulk, model.lambda_line, {{model.varrho, model.seed}}, true, targets);
    const auto& stat = r.stat[0];
    const auto& plain = r.plain[0];
    for (const auto& tv : plain)
        if (!tv.reachable) throw InvalidParameter("coupling check: unreachable target");

    CouplingCheck c;
    const double d_plain = plain[1].value - plain[0].value;
    const double d_stat = stat[1].value - stat[0].value;
    const double tol = 1e-7;  // float headroom on a deterministic inequality
    c.premise_up = stat[0].exit_k <= plain[1].exit_index;  // plain line starts at k = 0
    if (c.premise_up) c.holds_up = d_plain <= d_stat + tol;
    c.premise_down = plain[0].exit_index <= stat[1].exit_k;
    if (c.premise_down) c.holds_down = d_stat <= d_plain + tol;
    return c;
}

std::vector<TailPoint> exit_tail_profile(i64 N, double lambda_line, double varrho, double c,
                                         const std::vector<double>& m_grid, i64 replicas,
                                         const SeedSpec& seed) {
    for (size_t i = 1; i < m_grid.size(); ++i)
        if (m_grid[i] <= m_grid[i - 1]) throw InvalidParameter("exit tails: grid not increasing");
    const double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
    const i64 x = static_cast<i64>(std::llround(c * std::cbrt(static_cast<double>(N))));
    const Point target{
        static_cast<i64>(std::llround((1.0 - varrho) * (1.0 - varrho) * static_cast<double>(N))) +
            x,
        static_cast<i64>(std::llround(varrho * varrho * static_cast<double>(N))) - x};

    std::vector<i64> hits(m_grid.size(), 0);
    for (i64 rep = 0; rep < replicas; ++rep) {
        const SeedSpec rs = seed.for_replica(rep);
        WeightField bulk;
        bulk.seed = rs;
        StationaryModel model{lambda_line, varrho, rs};
        const auto out = model.solve(bulk, {target});
        const double z = std::fabs(static_cast<double>(out[0].exit_k));
        for (size_t i = 0; i < m_grid.size(); ++i)
            if (z >= m_grid[i] * n23) ++hits[i];
    }
    std::vector<TailPoint> profile(m_grid.size());
    const double base_window = std::max(20.0, 12.0 * n23);
    for (size_t i = 0; i < m_grid.size(); ++i) {
        profile[i].m = m_grid[i];
        profile[i].probability = static_cast<double>(hits[i]) / static_cast<double>(replicas);
        profile[i].beyond_window = m_grid[i] * n23 > base_window;
    }
    return profile;
}

std::vector<TailPoint> exit_tail_profile_plain(i64 N, double lambda, double rho, double c,
                                               const std::vector<double>& m_grid, i64 replicas,
                                               const SeedSpec& seed) {
    const ShockConstants sc = shock_constants(lambda, rho);
    const double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
    const Point target = point_P(N, c, 0.0, sc);
    const double center = sc.xi_lambda * static_cast<double>(N);

    std::vector<i64> hits(m_grid.size(), 0);
    for (i64 rep = 0; rep < replicas; ++rep) {
        const SeedSpec rs = seed.for_replica(rep);
        WeightField bulk;
        bulk.seed = rs;
        const lpp::StartSet line = lpp::density_line(lambda, 0, target.y);
        const auto res = lpp::solve_lines_to_points(bulk, {&line}, {target});
        if (!res[0][0].reachable) throw InvalidParameter("exit tails: unreachable target");
        const double z = std::fabs(static_cast<double>(res[0][0].exit_index) - center);
        for (size_t i = 0; i < m_grid.size(); ++i)
            if (z >= m_grid[i] * n23) ++hits[i];
    }
    std::vector<TailPoint> profile(m_grid.size());
    for (size_t i = 0; i < m_grid.size(); ++i) {
        profile[i].m = m_grid[i];
        profile[i].probability = static_cast<double>(hits[i]) / static_cast<double>(replicas);
    }
    return profile;
}

GoodEventSample good_event_sample(i64 N, double r, double C, double lambda, double rho,
                                  const SeedSpec& seed, bool check_sandwich,
                                  const std::vector<double>& u_grid) {
    const double n13 = std::cbrt(static_cast<double>(N));
    const double lam_minus = lambda - r / n13;
    const double lam_plus = lambda + r / n13;
    if (!(lam_minus > 0.0 && lam_plus < 1.0))
        throw InvalidParameter("good_event: lambda -+ r N^(-1/3) leaves (0,1)");
    const ShockConstants sc = shock_constants(lambda, rho);

    std::vector<Point> targets = {point_P(N, 0.0, 0.0, sc), point_P(N, C, 0.0, sc)};
    std::vector<double> us = {0.0, C};
    if (check_sandwich)
        for (double u : u_grid)
            if (u > 0.0 && u < C) {
                targets.push_back(point_P(N, u, 0.0, sc));
                us.push_back(u);
            }

    WeightField bulk;
    bulk.seed = seed;
    const FusedResult res =
        solve_fused(bulk, lambda, {{lam_minus, seed}, {lam_plus, seed}}, true, targets);
    const auto& minus = res.stat[0];
    const auto& plus = res.stat[1];
    const auto& plain = res.plain[0];

    // With exits measured in ascending line index, the boundary parameter
    // lambda+ pulls the geodesic toward the lower (down-right) arm and
    // lambda- toward the upper one; the ordering event and the envelopes
    // follow that orientation.
    GoodEventSample out;
    out.good = plus[1].exit_k <= plain[0].exit_index && plain[1].exit_index <= minus[0].exit_k;
    if (!check_sandwich || !out.good) return out;

    out.sandwich_checked = true;
    // drift-adjusted values; their increments are the rescaled increments
    auto adjusted = [&](double raw, double u) { return raw + sc.drift_lambda * u * n13; };
    std::vector<std::pair<double, size_t>> order;
    for (size_t i = 0; i < us.size(); ++i) order.emplace_back(us[i], i);
    std::sort(order.begin(), order.end());
    const double tol = 1e-7;
    for (size_t a = 0; a < order.size(); ++a) {
        for (size_t b = a + 1; b < order.size(); ++b) {
            const size_t i = order[a].second;  // smaller offset
            const size_t j = order[b].second;
            const double u = order[a].first, v = order[b].first;
            // increasing-offset increments: lower envelope from lambda-,
            // upper from lambda+
            const double d_minus = adjusted(minus[j].value, v) - adjusted(minus[i].value, u);
            const double d_plus = adjusted(plus[j].value, v) - adjusted(plus[i].value, u);
            const double d_plain = adjusted(plain[j].value, v) - adjusted(plain[i].value, u);
            if (!(d_minus <= d_plain + tol && d_plain <= d_plus + tol)) out.sandwich_ok = false;
        }
    }
    return out;
}

double good_event_complement(i64 N, double r, double C, double lambda, double rho, i64 replicas,
                             const SeedSpec& seed) {
    if (!(r > 0.0)) throw InvalidParameter("good_event: r must be positive");
    i64 bad = 0;
    for (i64 rep = 0; rep < replicas; ++rep)
        if (!good_event_sample(N, r, C, lambda, rho, seed.for_replica(rep), false).good) ++bad;
    return static_cast<double>(bad) / static_cast<double>(replicas);
}

RescaledIncrements stationary_rescaled_increments(i64 N, const std::vector<double>& u_grid,
                                                  double lambda, double rho, double r, int sign,
                                                  const SeedSpec& seed) {
    const double n13 = std::cbrt(static_cast<double>(N));
    const double varrho = lambda + (sign >= 0 ? r : -r) / n13;
    if (!(varrho > 0.0 && varrho < 1.0))
        throw InvalidParameter("rescaled increments: varrho leaves (0,1)");
    const ShockConstants sc = shock_constants(lambda, rho);

    std::vector<Point> targets = {point_P(N, 0.0, 0.0, sc)};
    for (double u : u_grid) targets.push_back(point_P(N, u, 0.0, sc));
    WeightField bulk;
    bulk.seed = seed;
    StationaryModel model{lambda, varrho, seed};
    const auto out = model.solve(bulk, targets);

    RescaledIncrements inc;
    const double base = out[0].value;
    const double mean_drift = (2.0 * varrho - 1.0) / (varrho * (1.0 - varrho));
    for (size_t i = 0; i < u_grid.size(); ++i) {
        const double raw = out[i + 1].value - base;
        inc.b.push_back((raw + sc.drift_lambda * u_grid[i] * n13) / n13);
        inc.walk.push_back((raw - mean_drift * u_grid[i] * n13) /
                           std::pow(static_cast<double>(N), 1.0 / 6.0));
    }
    return inc;
}

}  // namespace shocklab::stat
