#pragma once

// Last passage percolation solvers. One DP sweep can serve several start
// lines ("lanes") on the same weight field and read off values at many
// targets, which is what the couplings downstream need: the lanes must see
// identical bulk randomness, and regenerating counter-based weights is the
// dominant cost.

#include <optional>
#include <vector>

#include "shocklab/rng.hpp"

namespace shocklab::lpp {

// Start line for line-to-point problems. Points ordered by strictly
// increasing y with weakly decreasing x (read backwards it is a down-right
// staircase). Cells on the line act as sources pinned to their boundary
// value; a path never collects the weight of a source cell.
struct StartSet {
    std::vector<Point> points;
    std::vector<double> boundary_value;  // empty means all zero

    double bv(i64 k) const { return boundary_value.empty() ? 0.0 : boundary_value[k]; }
    void validate() const;

    static StartSet single(Point p, double value = 0.0) { return {{p}, {value}}; }
};

struct LppOutcome {
    bool reachable = false;
    double value = 0.0;
    i64 exit_index = -1;
    std::vector<Point> path;  // filled only when a path was requested
};

enum class Exec { kSerial, kParallel };

// Clamps the DP to columns within `halfwidth` of the segment a -> b
// (b up-right of a). Only for very large solves where the maximizer corridor
// is understood; halfwidths below ~12 N^(2/3) start to bias the values.
struct Corridor {
    Point a, b;
    i64 halfwidth = 0;
};

struct SolveOptions {
    Exec exec = Exec::kSerial;
    std::optional<Corridor> corridor;
};

struct TargetValue {
    bool reachable = false;
    double value = 0.0;
    i64 exit_index = -1;
};

// Core sweep. Result is indexed [lane][target]. Ties between equal path
// values resolve toward the step from below, hence toward the smaller exit
// index on the lines used here; this makes the measure-zero float-tie case
// deterministic.
std::vector<std::vector<TargetValue>> solve_lines_to_points(const WeightField& field,
                                                            const std::vector<const StartSet*>& lanes,
                                                            const std::vector<Point>& targets,
                                                            const SolveOptions& opts = {});

LppOutcome lpp_point_to_point(const WeightField& field, Point from, Point to,
                              bool want_path = false);
LppOutcome lpp_line_to_point(const WeightField& field, const StartSet& starts, Point to,
                             bool want_path = false);

// Full-table DP state, kept only when a path needs to be reconstructed.
class DpTable {
public:
    bool recorded() const { return recorded_; }
    const TargetValue& at_target() const { return target_value_; }
    Point target() const { return target_; }

private:
    friend DpTable solve_with_table(const WeightField&, const StartSet&, Point);
    friend std::vector<Point> backtrack_path(const DpTable&);

    bool recorded_ = false;
    Point target_;
    TargetValue target_value_;
    i64 j_lo = 0, j_hi = 0;
    std::vector<i64> row_lo;         // first column of each row
    std::vector<i64> row_offset;     // index of that column in `value`
    std::vector<i64> src_x;          // source column per row, or INT64_MIN
    std::vector<double> value;
};

DpTable solve_with_table(const WeightField& field, const StartSet& starts, Point to);

// Maximizer, start point first. Prefers the step from below on exact value
// ties. Throws ContractViolation if the table was not recorded.
std::vector<Point> backtrack_path(const DpTable& table);

bool maximizer_hits(const std::vector<Point>& path, const std::vector<Point>& targets);

// x-coordinate of the density-d anti-diagonal line at height k:
// floor((d-1)*k/d).
i64 density_line_x(double density, i64 k);

// The line {(density_line_x(d,k), k) : k_lo <= k <= k_hi} as a StartSet with
// zero boundary values.
StartSet density_line(double density, i64 k_lo, i64 k_hi);

// Rectangle kernels used by the benchmark and the kernel-equality tests.
// Both write the values of the top row [lo.x..hi.x] at y = hi.y and must
// agree bit for bit.
void rect_rowsweep(const WeightField& field, Point lo, Point hi, std::vector<double>& top_row);
void rect_wavefront(const WeightField& field, Point lo, Point hi, std::vector<double>& top_row,
                    Exec exec = Exec::kParallel);

}  // namespace shocklab::lpp
