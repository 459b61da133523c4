#pragma once

#include <string>
#include <vector>

namespace bslab::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool time_ok = false;
    double seconds = 0.0;
    double budget = 0.0;
    std::string details;

    bool ok() const { return pass && time_ok; }
};

struct Options {
    int grid_1d = 512;
    int torus_grid = 256;
    int torus_modes = 64;
    std::string model_filter;  // "", "example1d" or "halftorus"
};

/// Runs the full verification suite (ten criteria, fixed tolerances and
/// runtime budgets) and reports one result per criterion.
std::vector<CriterionResult> run_acceptance(const Options& opt = {});

std::string format_result(const CriterionResult& r);

}  // namespace bslab::acceptance
