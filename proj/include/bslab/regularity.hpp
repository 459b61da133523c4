#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bslab/discretize.hpp"
#include "bslab/types.hpp"

namespace bslab::regularity {

/// ||delta1^k(a)|| for k = 0..k_max, where delta1(T) = [H^2, T](1+H^2)^{-1/2}
/// and (1+H^2)^{-1/2} is formed from the full eigendecomposition of H.
/// k_max above 4 is rejected (cost guard).
std::vector<double> delta1_iterate(const RealMatrix& a, const disc::DiscreteRealization& r,
                                   int k_max);

enum class Trend { Bounded, Inconclusive, Growing };

struct RegularityReport {
    std::string function_id;
    std::vector<int> levels;                  // grid sizes N
    std::vector<std::vector<double>> norms;   // [level][k]
    std::vector<double> growth_exponent;      // per k: slope of log norm vs log N
    std::vector<Trend> classification;        // per k
    double bounded_threshold = 0.1;           // artifact conventions, reported as data
    double growing_threshold = 0.4;
};

/// Runs delta1_iterate on the 1D model across refinement levels and fits the
/// growth exponent of each iterated norm. Fewer than 3 levels is an error.
RegularityReport regularity_trend(const std::string& function_id,
                                  const std::function<double(double)>& f,
                                  const std::vector<int>& levels, int k_max,
                                  disc::Backend backend = disc::Backend::FiniteDifference);

const char* trend_name(Trend t);

}  // namespace bslab::regularity
