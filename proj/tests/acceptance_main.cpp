// Verification suite: one pass/fail line per criterion, nonzero exit on any
// failure. Sizes are the pinned defaults (1d N=512, torus N=256 K=64).

#include <cstdlib>
#include <iostream>

#include "bslab/acceptance.hpp"

int main(int argc, char** argv) {
    bslab::acceptance::Options opt;
    if (argc > 1) opt.model_filter = argv[1];
    const auto results = bslab::acceptance::run_acceptance(opt);
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << bslab::acceptance::format_result(r) << std::endl;
        all_ok = all_ok && r.ok();
    }
    std::cout << (all_ok ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << std::endl;
    return all_ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
