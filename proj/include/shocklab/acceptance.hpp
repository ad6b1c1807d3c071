#pragma once

// The verification suite: one entry per release criterion, each printing a
// pass/fail line with its measured quantities. Runs the full problem sizes by
// default; quick mode shrinks scales for smoke checks and is not the release
// gate.

#include <iosfwd>
#include <string>
#include <vector>

#include "shocklab/common.hpp"

namespace shocklab::accept {

struct Options {
    bool quick = false;
    u64 master_seed = 20240809;
    int workers = 0;
    std::vector<int> only;  // run a subset (1-based criterion numbers)
};

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(const Options& opts, std::ostream& progress);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace shocklab::accept
