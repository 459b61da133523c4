#pragma once

#include <limits>
#include <vector>

#include "bslab/types.hpp"

namespace bslab::spectral {

/// Eigen-decomposition of one block (one tangential mode, or the single
/// block of a 1D model). Eigenvectors are optional and may be stored for a
/// subset of the eigenvalues only; vec_cols maps stored columns to value
/// indices.
struct ModeSpectrum {
    int mode = 0;
    RealVector values;      // ascending
    RealMatrix vectors;     // vectors.col(i) belongs to values(vec_cols[i])
    std::vector<int> vec_cols;

    /// Column of `vectors` holding the eigenvector of values(col), or -1.
    int vector_column(int col) const {
        for (size_t i = 0; i < vec_cols.size(); ++i)
            if (vec_cols[i] == col) return static_cast<int>(i);
        return -1;
    }
};

/// Full spectrum of a discretized model: per-mode blocks plus a flat order
/// sorted by |lambda|. Kernel modes are excluded from all |D|^{-s} sums; only
/// eigenvalues inside the trusted window enter asymptotic fits.
struct SpectralData {
    struct Entry {
        double abs = 0.0;
        double value = 0.0;
        int block = 0;  // index into blocks
        int col = 0;    // index into blocks[block].values
    };

    std::vector<ModeSpectrum> blocks;
    std::vector<Entry> order;  // sorted by (abs, value, block, col)
    double trusted = std::numeric_limits<double>::infinity();
    double kernel_tol = 0.0;
    int kernel_dim = 0;
    int dim = 1;         // eigenvalue-growth dimension of the model
    int block_rows = 0;  // length of one eigenvector

    /// Build `order`, kernel_tol (10 eps ||H||) and kernel_dim from blocks.
    void finalize();

    bool is_kernel(const Entry& e) const { return e.abs <= kernel_tol; }
    int total_count() const;
    double max_abs() const { return order.empty() ? 0.0 : order.back().abs; }

    /// Eigenvector for an entry; throws if not stored.
    Eigen::Ref<const RealVector> vector(const Entry& e) const;
    bool has_vector(const Entry& e) const;
};

}  // namespace bslab::spectral
