// Runs the full verification suite and prints one line per criterion.
// --quick shrinks the problem sizes (smoke mode; the release gate is the
// full run).

#include <cstring>
#include <iostream>

#include "shocklab/acceptance.hpp"

int main(int argc, char** argv) {
    shocklab::accept::Options opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            opts.only.push_back(std::atoi(argv[++i]));
    }
    const auto results = shocklab::accept::run_acceptance(opts, std::cout);
    const bool ok = shocklab::accept::all_pass(results);
    std::cout << (ok ? "ALL PASS" : "FAILURES PRESENT") << std::endl;
    return ok ? 0 : 1;
}
