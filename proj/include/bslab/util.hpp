#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "bslab/types.hpp"

namespace bslab {

/// Operator 2-norm (largest singular value).
double op_norm(const Matrix& x);
double op_norm(const RealMatrix& x);

/// Thread count: BSLAB_THREADS env var, else hardware concurrency.
int thread_count();

/// Parallel index map over [0, n). Work items must be independent; callers
/// are responsible for writing results into per-index slots so that the
/// merged output is identical to a serial run.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace bslab
