#include "shocklab/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shocklab::compint {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

i64 lambda_site(double lambda, i64 k) { return -snapped_floor(static_cast<double>(k) / lambda); }
i64 rho_site(double rho, i64 k) { return -snapped_floor(static_cast<double>(k) / rho); }

}  // namespace

ShockLines make_shock_lines(double lambda, double rho, i64 k_max_plus, i64 k_min_minus) {
    if (!(lambda > 0.0 && lambda < rho && rho < 1.0))
        throw InvalidParameter("make_shock_lines: need 0 < lambda < rho < 1");
    if (lambda_site(lambda, 1) >= -1)
        throw InvalidParameter(
            "make_shock_lines: first left particle must start below -1 (lambda <= 1/2)");
    if (k_max_plus < 1 || k_min_minus > 0)
        throw InvalidParameter("make_shock_lines: empty half line");
    ShockLines lines;
    lines.lambda = lambda;
    lines.rho = rho;
    for (i64 k = 1; k <= k_max_plus; ++k) lines.plus.points.push_back({k + lambda_site(lambda, k), k});
    for (i64 k = k_min_minus; k <= -1; ++k)
        lines.minus.points.push_back({k + rho_site(rho, k) + 1, k});
    lines.minus.points.push_back({1, 0});  // the tracer particle
    lines.plus.validate();
    lines.minus.validate();
    return lines;
}

Cluster cluster_of(const WeightField& field, const ShockLines& lines, Point p) {
    if (p.x < 1 || p.y < 1) throw InvalidParameter("cluster_of: need both coordinates >= 1");
    const auto values =
        lpp::solve_lines_to_points(field, {&lines.plus, &lines.minus}, {p});
    const double vp = values[0][0].reachable ? values[0][0].value : kNegInf;
    const double vm = values[1][0].reachable ? values[1][0].value : kNegInf;
    if (vp == vm) throw DegenerateTie("cluster_of: exact tie of the two passage times");
    return vp > vm ? Cluster::kPlus : Cluster::kMinus;
}

i64 InterfacePath::position_at(double t) const {
    if (t < 0.0) throw InvalidParameter("InterfacePath: negative time");
    if (times.size() < 2 || t >= times.back())
        throw InsufficientHorizon("InterfacePath: time beyond the computed horizon");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const size_t n = static_cast<size_t>(it - times.begin()) - 1;
    return steps[n].x - steps[n].y - 1;
}

i64 InterfacePath::step_count_until(double t) const {
    if (times.size() < 2 || t >= times.back())
        throw InsufficientHorizon("InterfacePath: time beyond the computed horizon");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    // the interface is at step n on [times[n], times[n+1}); the particle has
    // made n - 1 moves by then
    return static_cast<i64>(it - times.begin()) - 2;
}

InterfacePath competition_interface(const WeightField& field, double lambda, double rho,
                                    i64 n_steps) {
    if (n_steps < 1) throw InvalidParameter("competition_interface: need n_steps >= 1");
    const i64 i_max = n_steps + 2;
    const i64 j_max = n_steps + 2;
    // lowest useful right-half label: its site must not exceed i_max
    i64 k_min = -1;
    while (k_min + rho_site(rho, k_min) + 1 <= i_max) --k_min;
    const ShockLines lines = make_shock_lines(lambda, rho, j_max, k_min + 1);

    struct Lane {
        const lpp::StartSet* set;
        i64 next = 0;  // next source index
        i64 stair = std::numeric_limits<i64>::max();
        std::vector<double> val;
    };
    const i64 j_lo = lines.minus.points.front().y;
    i64 x_min = std::min(lines.plus.points.back().x, lines.minus.points.back().x);
    x_min = std::min(x_min, lines.minus.points.front().x);
    const i64 off = -(x_min - 1);
    const i64 width = i_max + off + 1;

    Lane lanes[2] = {{&lines.plus}, {&lines.minus}};
    for (Lane& ln : lanes) ln.val.assign(width, kNegInf);

    // merged passage times and cluster signs on the quadrant the interface
    // can visit
    const i64 qw = i_max + 1;
    std::vector<double> merged(static_cast<size_t>(j_max + 1) * qw, kNegInf);
    std::vector<signed char> sign(static_cast<size_t>(j_max + 1) * qw, 0);

    std::vector<double> wrow(width);
    for (i64 j = j_lo; j <= j_max; ++j) {
        i64 union_lo = std::numeric_limits<i64>::max();
        for (Lane& ln : lanes) {
            if (ln.next < static_cast<i64>(ln.set->points.size()) &&
                ln.set->points[ln.next].y == j)
                ln.stair = ln.set->points[ln.next].x;
            union_lo = std::min(union_lo, ln.stair);
        }
        if (union_lo > i_max) continue;
        fill_weight_row(field, j, union_lo, i_max - union_lo + 1, wrow.data() + union_lo + off);
        for (Lane& ln : lanes) {
            if (ln.stair > i_max) continue;
            double* v = ln.val.data() + off;
            const double* w = wrow.data() + off;
            i64 x = ln.stair;
            if (ln.next < static_cast<i64>(ln.set->points.size()) &&
                ln.set->points[ln.next].y == j) {
                v[x] = 0.0;
                ++ln.next;
                ++x;
            }
            for (; x <= i_max; ++x) {
                const double best = std::max(v[x - 1], v[x]);
                v[x] = best == kNegInf ? kNegInf : w[x] + best;
            }
        }
        if (j >= 0) {
            double* mrow = merged.data() + static_cast<size_t>(j) * qw;
            signed char* srow = sign.data() + static_cast<size_t>(j) * qw;
            const double* vp = lanes[0].val.data() + off;
            const double* vm = lanes[1].val.data() + off;
            for (i64 x = 0; x <= i_max; ++x) {
                mrow[x] = std::max(vp[x], vm[x]);
                srow[x] = vp[x] > vm[x] ? 1 : (vm[x] > vp[x] ? -1 : 0);
            }
        }
    }

    InterfacePath path;
    path.steps.reserve(n_steps + 1);
    path.times.reserve(n_steps + 1);
    path.steps.push_back({0, 0});
    path.times.push_back(0.0);
    auto merged_at = [&](Point p) { return merged[static_cast<size_t>(p.y) * qw + p.x]; };
    auto sign_at = [&](Point p) { return sign[static_cast<size_t>(p.y) * qw + p.x]; };
    for (i64 n = 0; n < n_steps; ++n) {
        const Point probe{path.steps.back().x + 1, path.steps.back().y + 1};
        const signed char s = sign_at(probe);
        if (s == 0)
            throw DegenerateTie("competition_interface: cluster tie at (" +
                                std::to_string(probe.x) + "," + std::to_string(probe.y) + ")");
        const Point next = s > 0 ? Point{probe.x, probe.y - 1} : Point{probe.x - 1, probe.y};
        const double tau = merged_at(next);
        if (!(tau >= path.times.back()))
            throw ContractViolation("competition_interface: passage times not monotone");
        if (n >= 1 && !(tau > path.times.back()))
            throw DegenerateTie("competition_interface: tied passage times");
        path.steps.push_back(next);
        path.times.push_back(tau);
    }
    return path;
}

InterfacePath competition_interface_until(const WeightField& field, double lambda, double rho,
                                          double horizon) {
    const double denom = 1.0 - lambda - rho + 2.0 * lambda * rho;
    i64 n_steps = static_cast<i64>(std::ceil(denom * horizon + 10.0 * std::cbrt(horizon + 1.0))) + 30;
    for (int attempt = 0; attempt < 4; ++attempt) {
        InterfacePath path = competition_interface(field, lambda, rho, n_steps);
        if (path.times.back() > horizon) return path;
        n_steps *= 2;
    }
    throw InsufficientHorizon("competition_interface_until: horizon not reached");
}

}  // namespace shocklab::compint
