#include "bslab/util.hpp"

#include <Eigen/SVD>
#include <atomic>

namespace bslab {

double op_norm(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(x);
    return svd.singularValues()(0);
}

double op_norm(const RealMatrix& x) {
    if (x.size() == 0) return 0.0;
    Eigen::BDCSVD<RealMatrix> svd(x);
    return svd.singularValues()(0);
}

int thread_count() {
    if (const char* env = std::getenv("BSLAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bslab
