#include "bslab/regularity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "bslab/util.hpp"

namespace bslab::regularity {

std::vector<double> delta1_iterate(const RealMatrix& a, const disc::DiscreteRealization& r,
                                   int k_max) {
    if (k_max < 0 || k_max > 4)
        throw std::invalid_argument("delta1_iterate: k_max must be in [0, 4] (cost guard)");
    const RealMatrix h = r.dense();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("delta1_iterate: eigensolver failed");
    const RealVector lam = es.eigenvalues();
    const RealMatrix& q = es.eigenvectors();
    RealVector scale(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) scale(i) = 1.0 / std::sqrt(1.0 + lam(i) * lam(i));
    const RealMatrix b_inv = q * scale.asDiagonal() * q.transpose();
    const RealMatrix h2 = h * h;

    std::vector<double> norms;
    norms.reserve(static_cast<size_t>(k_max) + 1);
    RealMatrix t = a;
    norms.push_back(op_norm(t));
    for (int k = 1; k <= k_max; ++k) {
        t = (h2 * t - t * h2) * b_inv;
        norms.push_back(op_norm(t));
    }
    return norms;
}

RegularityReport regularity_trend(const std::string& function_id,
                                  const std::function<double(double)>& f,
                                  const std::vector<int>& levels, int k_max,
                                  disc::Backend backend) {
    if (levels.size() < 3)
        throw std::invalid_argument("regularity_trend: need at least 3 refinement levels");
    if (backend != disc::Backend::FiniteDifference)
        throw std::invalid_argument("regularity_trend: fd backend only");

    RegularityReport rep;
    rep.function_id = function_id;
    rep.levels = levels;
    rep.norms.resize(levels.size());
    parallel_for(static_cast<int>(levels.size()), [&](int i) {
        const auto r = disc::discretize_1d_example(levels[static_cast<size_t>(i)], backend);
        const RealVector diag = disc::multiplication_diagonal(r, f);
        rep.norms[static_cast<size_t>(i)] =
            delta1_iterate(RealMatrix(diag.asDiagonal()), r, k_max);
    });

    // Least-squares slope of log norm against log N, per commutator order.
    for (int k = 0; k <= k_max; ++k) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(levels.size());
        for (int i = 0; i < n; ++i) {
            const double x = std::log(static_cast<double>(levels[static_cast<size_t>(i)]));
            const double y = std::log(std::max(rep.norms[static_cast<size_t>(i)]
                                                        [static_cast<size_t>(k)],
                                               1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        rep.growth_exponent.push_back(slope);
        if (slope < rep.bounded_threshold) rep.classification.push_back(Trend::Bounded);
        else if (slope > rep.growing_threshold) rep.classification.push_back(Trend::Growing);
        else rep.classification.push_back(Trend::Inconclusive);
    }
    return rep;
}

const char* trend_name(Trend t) {
    switch (t) {
        case Trend::Bounded: return "bounded";
        case Trend::Growing: return "growing";
        default: return "inconclusive";
    }
}

}  // namespace bslab::regularity
