#include "bslab/spectral_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bslab::spectral {

void SpectralData::finalize() {
    order.clear();
    double max_abs_val = 0.0;
    int total = 0;
    for (const auto& b : blocks) {
        total += static_cast<int>(b.values.size());
        for (Eigen::Index i = 0; i < b.values.size(); ++i)
            max_abs_val = std::max(max_abs_val, std::abs(b.values(i)));
    }
    order.reserve(total);
    for (int bi = 0; bi < static_cast<int>(blocks.size()); ++bi) {
        const auto& b = blocks[bi];
        for (int ci = 0; ci < static_cast<int>(b.values.size()); ++ci) {
            order.push_back({std::abs(b.values(ci)), b.values(ci), bi, ci});
        }
    }
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        if (a.abs != b.abs) return a.abs < b.abs;
        if (a.value != b.value) return a.value < b.value;
        if (a.block != b.block) return a.block < b.block;
        return a.col < b.col;
    });
    kernel_tol = 10.0 * std::numeric_limits<double>::epsilon() * max_abs_val;
    kernel_dim = 0;
    for (const auto& e : order) {
        if (e.abs <= kernel_tol) ++kernel_dim;
        else break;
    }
}

int SpectralData::total_count() const { return static_cast<int>(order.size()); }

bool SpectralData::has_vector(const Entry& e) const {
    return blocks[e.block].vector_column(e.col) >= 0;
}

Eigen::Ref<const RealVector> SpectralData::vector(const Entry& e) const {
    const int c = blocks[e.block].vector_column(e.col);
    if (c < 0) throw std::runtime_error("SpectralData: eigenvector not stored for this entry");
    return blocks[e.block].vectors.col(c);
}

}  // namespace bslab::spectral
