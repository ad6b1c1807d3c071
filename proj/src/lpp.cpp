#include "shocklab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shocklab::lpp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// max-plus cell update shared by every solver so that row-sweep, wavefront
// and full-table runs agree to the last bit. Ties go to `down`.
inline void combine(double w, double left, double down, i32 exit_left, i32 exit_down,
                    double& out_v, i32& out_e) {
    out_v = w + std::max(down, left);  // ties resolve to the step from below
    out_e = left > down ? exit_left : exit_down;
}

struct LanePrep {
    const StartSet* set = nullptr;
    i64 keep_lo = 0, keep_hi = -1;  // kept index range after feasibility pruning
    bool dead = true;
    i64 min_x = 0;
    i64 first_y = 0;
    // row tables over [j_lo, j_hi]
    std::vector<i64> src_x;    // source column in this row, INT64_MIN if none
    std::vector<i64> src_idx;  // original start index of that source
    std::vector<i64> stair_x;  // first in-region column of the row (INT64_MAX while inactive)
};

struct Workspace {
    i64 j_lo = 0, j_hi = 0;
    i64 x_min = 0, x_hi = 0;
    std::vector<LanePrep> lanes;
    bool any = false;
};

Workspace prepare(const std::vector<const StartSet*>& lanes, const std::vector<Point>& targets) {
    if (lanes.empty() || targets.empty())
        throw InvalidParameter("solve_lines_to_points: need at least one lane and one target");
    i64 max_tx = targets[0].x, max_ty = targets[0].y;
    for (const Point& t : targets) {
        max_tx = std::max(max_tx, t.x);
        max_ty = std::max(max_ty, t.y);
    }

    Workspace ws;
    ws.x_hi = max_tx;
    ws.lanes.resize(lanes.size());
    i64 j_lo = std::numeric_limits<i64>::max();
    i64 x_min = std::numeric_limits<i64>::max();
    for (size_t l = 0; l < lanes.size(); ++l) {
        lanes[l]->validate();
        LanePrep& lp = ws.lanes[l];
        lp.set = lanes[l];
        const auto& pts = lanes[l]->points;
        // y ascending: y <= max_ty keeps a prefix; x weakly decreasing:
        // x <= max_tx keeps a suffix.
        i64 hi = static_cast<i64>(pts.size()) - 1;
        while (hi >= 0 && pts[hi].y > max_ty) --hi;
        i64 lo = 0;
        while (lo <= hi && pts[lo].x > max_tx) ++lo;
        if (lo > hi) continue;
        lp.keep_lo = lo;
        lp.keep_hi = hi;
        lp.dead = false;
        lp.min_x = pts[hi].x;
        lp.first_y = pts[lo].y;
        ws.any = true;
        j_lo = std::min(j_lo, lp.first_y);
        x_min = std::min(x_min, lp.min_x);
    }
    if (!ws.any) return ws;
    ws.j_lo = j_lo;
    ws.j_hi = max_ty;
    ws.x_min = x_min;

    const i64 rows = ws.j_hi - ws.j_lo + 1;
    for (LanePrep& lp : ws.lanes) {
        if (lp.dead) continue;
        lp.src_x.assign(rows, std::numeric_limits<i64>::min());
        lp.src_idx.assign(rows, -1);
        lp.stair_x.assign(rows, std::numeric_limits<i64>::max());
        const auto& pts = lp.set->points;
        i64 k = lp.keep_lo;
        i64 cur = std::numeric_limits<i64>::max();
        for (i64 j = ws.j_lo; j <= ws.j_hi; ++j) {
            const i64 r = j - ws.j_lo;
            if (k <= lp.keep_hi && pts[k].y == j) {
                lp.src_x[r] = pts[k].x;
                lp.src_idx[r] = k;
                cur = pts[k].x;
                ++k;
            }
            lp.stair_x[r] = cur;
        }
    }
    return ws;
}

struct CorridorEval {
    bool active = false;
    Point a, b;
    i64 hw = 0;

    void init(const std::optional<Corridor>& c) {
        if (!c) return;
        if (c->b.x < c->a.x || c->b.y < c->a.y || c->halfwidth <= 0)
            throw InvalidParameter("corridor: b must be up-right of a, halfwidth positive");
        active = true;
        a = c->a;
        b = c->b;
        hw = c->halfwidth;
    }
    i64 center(i64 j) const {
        if (j <= a.y) return a.x;
        if (j >= b.y) return b.x;
        const double t = static_cast<double>(j - a.y) / static_cast<double>(b.y - a.y);
        return a.x + static_cast<i64>(std::llround(t * static_cast<double>(b.x - a.x)));
    }
    i64 lo(i64 j) const { return active ? center(j) - hw : std::numeric_limits<i64>::min(); }
    i64 hi(i64 j) const { return active ? center(j) + hw : std::numeric_limits<i64>::max(); }
};

std::vector<std::vector<TargetValue>> solve_serial(const WeightField& field, const Workspace& ws,
                                                   const std::vector<Point>& targets,
                                                   const CorridorEval& corr) {
    const size_t n_lanes = ws.lanes.size();
    std::vector<std::vector<TargetValue>> result(n_lanes,
                                                 std::vector<TargetValue>(targets.size()));
    if (!ws.any) return result;

    const i64 width = ws.x_hi - ws.x_min + 2;  // one -inf sentinel column on the left
    const i64 off = -(ws.x_min - 1);           // buffer index of column x is x + off
    std::vector<std::vector<double>> val(n_lanes, std::vector<double>(width, kNegInf));
    std::vector<std::vector<i32>> ext(n_lanes, std::vector<i32>(width, -1));
    std::vector<double> wrow(width, 0.0);

    // targets grouped by row
    std::vector<size_t> order(targets.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return targets[a].y < targets[b].y; });
    size_t next_target = 0;
    while (next_target < order.size() && targets[order[next_target]].y < ws.j_lo) ++next_target;

    for (i64 j = ws.j_lo; j <= ws.j_hi; ++j) {
        const i64 r = j - ws.j_lo;
        const i64 chi = std::min(ws.x_hi, corr.hi(j));
        const i64 clo = corr.lo(j);

        i64 union_lo = std::numeric_limits<i64>::max();
        for (const LanePrep& lp : ws.lanes)
            if (!lp.dead && lp.stair_x[r] != std::numeric_limits<i64>::max())
                union_lo = std::min(union_lo, std::max(lp.stair_x[r], clo));
        if (union_lo <= chi) {
            fill_weight_row(field, j, union_lo, chi - union_lo + 1, wrow.data() + union_lo + off);

            for (size_t l = 0; l < n_lanes; ++l) {
                const LanePrep& lp = ws.lanes[l];
                if (lp.dead || lp.stair_x[r] == std::numeric_limits<i64>::max()) continue;
                double* v = val[l].data() + off;
                i32* e = ext[l].data() + off;
                const double* w = wrow.data() + off;
                i64 lo = lp.stair_x[r];
                if (corr.active && clo > lo) {
                    lo = clo;
                    v[lo - 1] = kNegInf;  // stale columns left behind by the moving corridor
                    e[lo - 1] = -1;
                }
                const i64 sx = lp.src_x[r];
                i64 x = lo;
                if (sx >= lo && sx <= chi) {
                    for (; x < sx; ++x) combine(w[x], v[x - 1], v[x], e[x - 1], e[x], v[x], e[x]);
                    v[sx] = lp.set->bv(lp.src_idx[r]);
                    e[sx] = static_cast<i32>(lp.src_idx[r]);
                    x = sx + 1;
                }
                for (; x <= chi; ++x) combine(w[x], v[x - 1], v[x], e[x - 1], e[x], v[x], e[x]);
            }
        }

        while (next_target < order.size() && targets[order[next_target]].y == j) {
            const size_t ti = order[next_target];
            const Point t = targets[ti];
            for (size_t l = 0; l < n_lanes; ++l) {
                TargetValue& tv = result[l][ti];
                const LanePrep& lp = ws.lanes[l];
                if (lp.dead || t.x < ws.x_min || t.x > ws.x_hi ||
                    (corr.active && (t.x < clo || t.x > chi))) {
                    tv = {};
                    continue;
                }
                const double value = val[l][t.x + off];
                if (value == kNegInf || lp.stair_x[r] == std::numeric_limits<i64>::max() ||
                    t.x < lp.stair_x[r]) {
                    tv = {};
                } else {
                    tv.reachable = true;
                    tv.value = value;
                    tv.exit_index = ext[l][t.x + off];
                }
            }
            ++next_target;
        }
    }
    return result;
}

std::vector<std::vector<TargetValue>> solve_wavefront(const WeightField& field,
                                                      const Workspace& ws,
                                                      const std::vector<Point>& targets,
                                                      const CorridorEval& corr) {
    const size_t n_lanes = ws.lanes.size();
    std::vector<std::vector<TargetValue>> result(n_lanes,
                                                 std::vector<TargetValue>(targets.size()));
    if (!ws.any) return result;

    const i64 rows = ws.j_hi - ws.j_lo + 1;
    std::vector<std::vector<double>> prev(n_lanes, std::vector<double>(rows, kNegInf));
    std::vector<std::vector<double>> cur(n_lanes, std::vector<double>(rows, kNegInf));
    std::vector<std::vector<i32>> prev_e(n_lanes, std::vector<i32>(rows, -1));
    std::vector<std::vector<i32>> cur_e(n_lanes, std::vector<i32>(rows, -1));

    const i64 d_lo = ws.x_min + ws.j_lo;
    const i64 d_hi = ws.x_hi + ws.j_hi;
    for (i64 d = d_lo; d <= d_hi; ++d) {
        const i64 r_lo = std::max(ws.j_lo, d - ws.x_hi) - ws.j_lo;
        const i64 r_hi = std::min(ws.j_hi, d - ws.x_min) - ws.j_lo;
        for (size_t l = 0; l < n_lanes; ++l) {
            const LanePrep& lp = ws.lanes[l];
            if (lp.dead) continue;
            double* c = cur[l].data();
            i32* ce = cur_e[l].data();
            const double* p = prev[l].data();
            const i32* pe = prev_e[l].data();
#pragma omp parallel for schedule(static) if (r_hi - r_lo > 2048)
            for (i64 rr = r_lo; rr <= r_hi; ++rr) {
                const i64 j = rr + ws.j_lo;
                const i64 x = d - j;
                const i64 stair = lp.stair_x[rr];
                if (stair == std::numeric_limits<i64>::max() || x < stair || x < corr.lo(j) ||
                    x > corr.hi(j)) {
                    c[rr] = kNegInf;
                    ce[rr] = -1;
                } else if (x == lp.src_x[rr]) {
                    c[rr] = lp.set->bv(lp.src_idx[rr]);
                    ce[rr] = static_cast<i32>(lp.src_idx[rr]);
                } else {
                    const double left = p[rr];  // (x-1, j), diagonal d-1
                    const double down = rr > 0 ? p[rr - 1] : kNegInf;
                    const i32 el = pe[rr];
                    const i32 ed = rr > 0 ? pe[rr - 1] : -1;
                    combine(weight_at(field, x, j), left, down, el, ed, c[rr], ce[rr]);
                }
            }
        }
        for (size_t ti = 0; ti < targets.size(); ++ti) {
            const Point t = targets[ti];
            if (t.x + t.y != d || t.y < ws.j_lo || t.y > ws.j_hi || t.x < ws.x_min ||
                t.x > ws.x_hi)
                continue;
            const i64 rr = t.y - ws.j_lo;
            for (size_t l = 0; l < n_lanes; ++l) {
                if (ws.lanes[l].dead) continue;
                const double v = cur[l][rr];
                if (v != kNegInf) result[l][ti] = {true, v, cur_e[l][rr]};
            }
        }
        std::swap(prev, cur);
        std::swap(prev_e, cur_e);
    }

    // targets below/left of every lane never appear on a scanned diagonal
    for (size_t ti = 0; ti < targets.size(); ++ti) {
        const Point t = targets[ti];
        if (t.y < ws.j_lo || t.x < ws.x_min)
            for (size_t l = 0; l < n_lanes; ++l) result[l][ti] = {};
    }
    return result;
}

}  // namespace

void StartSet::validate() const {
    if (points.empty()) throw InvalidParameter("StartSet: empty");
    if (!boundary_value.empty() && boundary_value.size() != points.size())
        throw InvalidParameter("StartSet: boundary_value size mismatch");
    for (size_t k = 1; k < points.size(); ++k) {
        if (points[k].y <= points[k - 1].y || points[k].x > points[k - 1].x)
            throw InvalidParameter("StartSet: points must move up (strictly) and left (weakly)");
    }
}

std::vector<std::vector<TargetValue>> solve_lines_to_points(const WeightField& field,
                                                            const std::vector<const StartSet*>& lanes,
                                                            const std::vector<Point>& targets,
                                                            const SolveOptions& opts) {
    Workspace ws = prepare(lanes, targets);
    CorridorEval corr;
    corr.init(opts.corridor);
    if (opts.exec == Exec::kParallel) return solve_wavefront(field, ws, targets, corr);
    return solve_serial(field, ws, targets, corr);
}

LppOutcome lpp_point_to_point(const WeightField& field, Point from, Point to, bool want_path) {
    const StartSet s = StartSet::single(from);
    return lpp_line_to_point(field, s, to, want_path);
}

LppOutcome lpp_line_to_point(const WeightField& field, const StartSet& starts, Point to,
                             bool want_path) {
    if (want_path) {
        DpTable table = solve_with_table(field, starts, to);
        LppOutcome out;
        out.reachable = table.at_target().reachable;
        if (out.reachable) {
            out.value = table.at_target().value;
            out.exit_index = table.at_target().exit_index;
            out.path = backtrack_path(table);
        }
        return out;
    }
    const auto res = solve_lines_to_points(field, {&starts}, {to});
    const TargetValue& tv = res[0][0];
    LppOutcome out;
    out.reachable = tv.reachable;
    out.value = tv.value;
    out.exit_index = tv.exit_index;
    return out;
}

DpTable solve_with_table(const WeightField& field, const StartSet& starts, Point to) {
    Workspace ws = prepare({&starts}, {to});
    DpTable t;
    t.recorded_ = true;
    t.target_ = to;
    if (!ws.any) return t;
    const LanePrep& lp = ws.lanes[0];

    t.j_lo = ws.j_lo;
    t.j_hi = ws.j_hi;
    const i64 rows = ws.j_hi - ws.j_lo + 1;
    t.row_lo.resize(rows);
    t.row_offset.resize(rows);
    t.src_x.assign(lp.src_x.begin(), lp.src_x.end());
    i64 total = 0;
    for (i64 r = 0; r < rows; ++r) {
        const i64 stair = lp.stair_x[r];
        t.row_lo[r] = (stair == std::numeric_limits<i64>::max()) ? ws.x_hi + 1 : stair;
        t.row_offset[r] = total;
        total += std::max<i64>(0, ws.x_hi - t.row_lo[r] + 1);
    }
    t.value.assign(total, kNegInf);

    std::vector<double> wrow(ws.x_hi - ws.x_min + 1);
    for (i64 r = 0; r < rows; ++r) {
        const i64 lo = t.row_lo[r];
        if (lo > ws.x_hi) continue;
        const i64 j = ws.j_lo + r;
        fill_weight_row(field, j, lo, ws.x_hi - lo + 1, wrow.data());
        double* row = t.value.data() + t.row_offset[r];
        const double* below =
            (r > 0 && t.row_lo[r - 1] <= ws.x_hi) ? t.value.data() + t.row_offset[r - 1] : nullptr;
        const i64 below_lo = r > 0 ? t.row_lo[r - 1] : 0;
        for (i64 x = lo; x <= ws.x_hi; ++x) {
            const i64 c = x - lo;
            if (x == lp.src_x[r]) {
                row[c] = starts.bv(lp.src_idx[r]);
                continue;
            }
            const double left = x > lo ? row[c - 1] : kNegInf;
            const double down = (below && x >= below_lo) ? below[x - below_lo] : kNegInf;
            const double m = std::max(left, down);
            row[c] = m == kNegInf ? kNegInf : wrow[x - lo] + m;
        }
    }

    const i64 tr = to.y - ws.j_lo;
    if (to.y >= ws.j_lo && to.y <= ws.j_hi && to.x >= t.row_lo[tr] && to.x <= ws.x_hi) {
        const double v = t.value[t.row_offset[tr] + (to.x - t.row_lo[tr])];
        if (v != kNegInf) {
            t.target_value_.reachable = true;
            t.target_value_.value = v;
        }
    }
    if (t.target_value_.reachable) {
        // walk once to identify the exit
        DpTable& tt = t;
        std::vector<Point> p = backtrack_path(tt);
        for (size_t k = lp.keep_lo; k <= static_cast<size_t>(lp.keep_hi); ++k)
            if (starts.points[k] == p.front()) {
                t.target_value_.exit_index = static_cast<i64>(k);
                break;
            }
    }
    return t;
}

std::vector<Point> backtrack_path(const DpTable& t) {
    if (!t.recorded_) throw ContractViolation("backtrack_path: table not recorded");
    if (!t.target_value_.reachable)
        throw ContractViolation("backtrack_path: target not reachable");
    auto val = [&](i64 x, i64 j) -> double {
        if (j < t.j_lo || j > t.j_hi) return kNegInf;
        const i64 r = j - t.j_lo;
        if (x < t.row_lo[r] || x > t.target_.x) return kNegInf;
        return t.value[t.row_offset[r] + (x - t.row_lo[r])];
    };
    std::vector<Point> rev;
    Point cell = t.target_;
    while (true) {
        rev.push_back(cell);
        const i64 r = cell.y - t.j_lo;
        if (t.src_x[r] == cell.x) break;  // reached the start line
        const double down = val(cell.x, cell.y - 1);
        const double left = val(cell.x - 1, cell.y);
        if (down == kNegInf && left == kNegInf)
            throw ContractViolation("backtrack_path: broken table");
        cell = down >= left ? Point{cell.x, cell.y - 1} : Point{cell.x - 1, cell.y};
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

bool maximizer_hits(const std::vector<Point>& path, const std::vector<Point>& targets) {
    if (path.empty() || targets.empty()) return false;
    std::unordered_set<u64> set;
    set.reserve(targets.size() * 2);
    auto pack = [](Point p) {
        return (static_cast<u64>(static_cast<u32>(p.x)) << 32) ^
               static_cast<u64>(static_cast<u32>(p.y));
    };
    for (const Point& p : targets) set.insert(pack(p));
    for (const Point& p : path)
        if (set.count(pack(p))) return true;
    return false;
}

i64 density_line_x(double density, i64 k) {
    if (!(density > 0.0 && density < 1.0))
        throw InvalidParameter("density_line_x: density must lie in (0,1)");
    return snapped_floor((density - 1.0) * static_cast<double>(k) / density);
}

StartSet density_line(double density, i64 k_lo, i64 k_hi) {
    if (k_lo > k_hi) throw InvalidParameter("density_line: empty range");
    StartSet s;
    s.points.reserve(k_hi - k_lo + 1);
    for (i64 k = k_lo; k <= k_hi; ++k) s.points.push_back({density_line_x(density, k), k});
    return s;
}

void rect_rowsweep(const WeightField& field, Point lo, Point hi, std::vector<double>& top_row) {
    if (!reaches(lo, hi)) throw InvalidParameter("rect kernel: hi must dominate lo");
    const i64 w = hi.x - lo.x + 1;
    std::vector<double> wrow(w);
    top_row.assign(w, 0.0);
    for (i64 j = lo.y; j <= hi.y; ++j) {
        fill_weight_row(field, j, lo.x, w, wrow.data());
        for (i64 c = 0; c < w; ++c) {
            if (j == lo.y && c == 0) {
                top_row[0] = 0.0;  // the start cell's weight is not collected
                continue;
            }
            const double left = c > 0 ? top_row[c - 1] : kNegInf;
            const double down = j > lo.y ? top_row[c] : kNegInf;
            top_row[c] = wrow[c] + std::max(left, down);
        }
    }
}

void rect_wavefront(const WeightField& field, Point lo, Point hi, std::vector<double>& top_row,
                    Exec exec) {
    if (!reaches(lo, hi)) throw InvalidParameter("rect kernel: hi must dominate lo");
    const i64 w = hi.x - lo.x + 1;
    const i64 h = hi.y - lo.y + 1;
    std::vector<double> prev(h, kNegInf), cur(h, kNegInf);
    top_row.assign(w, 0.0);
    const bool par = exec == Exec::kParallel;
    for (i64 d = 0; d <= w + h - 2; ++d) {
        const i64 r_lo = std::max<i64>(0, d - (w - 1));
        const i64 r_hi = std::min<i64>(h - 1, d);
        double* c = cur.data();
        const double* p = prev.data();
#pragma omp parallel for schedule(static) if (par && r_hi - r_lo > 2048)
        for (i64 r = r_lo; r <= r_hi; ++r) {
            const i64 cx = d - r;
            if (r == 0 && cx == 0) {
                c[0] = 0.0;
            } else {
                const double left = cx > 0 ? p[r] : kNegInf;
                const double down = r > 0 ? p[r - 1] : kNegInf;
                c[r] = weight_at(field, lo.x + cx, lo.y + r) + std::max(left, down);
            }
        }
        if (d >= h - 1) top_row[d - (h - 1)] = cur[h - 1];
        std::swap(prev, cur);
    }
}

}  // namespace shocklab::lpp
