#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace bslab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

/// i^n for n mod 4, exact.
inline Complex ipow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace bslab
