// Test-only oracles, independent of the library implementation paths they
// check: closed-form spectra, classical sums and brute-force searches.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

/// Exact eigenvalues of the staggered half-circle matrix with N interior
/// nodes: 0 and +-(2/h) sin(k h / 2), k = 1..N, h = pi/(N+1). Ascending.
inline std::vector<double> staggered_1d_eigenvalues(int n) {
    const double h = kPi / (n + 1);
    std::vector<double> out;
    for (int k = n; k >= 1; --k) out.push_back(-(2.0 / h) * std::sin(0.5 * k * h));
    out.push_back(0.0);
    for (int k = 1; k <= n; ++k) out.push_back((2.0 / h) * std::sin(0.5 * k * h));
    return out;
}

/// Continuum spectrum of the half-circle realization: all integers in
/// [-n_max, n_max], each simple.
inline std::vector<double> continuum_1d_spectrum(int n_max) {
    std::vector<double> out;
    for (int k = -n_max; k <= n_max; ++k) out.push_back(k);
    return out;
}

/// Continuum eigenvalues of the mode-k radial problem on [0, pi] with the
/// chiral condition at both ends: -k and +-sqrt(k^2 + n^2), n = 1..n_max.
inline std::vector<double> continuum_mode_spectrum(int k, int n_max) {
    std::vector<double> out;
    out.push_back(-static_cast<double>(k));
    for (int n = 1; n <= n_max; ++n) {
        const double lam = std::sqrt(static_cast<double>(k) * k + static_cast<double>(n) * n);
        out.push_back(lam);
        out.push_back(-lam);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Basel-type partial sum: sum_{n=1..n_max} n^{-2}.
inline double basel_partial(int n_max) {
    double s = 0.0;
    for (int n = n_max; n >= 1; --n) s += 1.0 / (static_cast<double>(n) * n);
    return s;
}

/// Harmonic number H_n.
inline double harmonic(int n) {
    double s = 0.0;
    for (int k = n; k >= 1; --k) s += 1.0 / k;
    return s;
}

/// Theta-type sum over the integers: sum_{n in Z} exp(-t n^2), 30 terms a side.
inline double theta_sum(double t) {
    double s = 1.0;
    for (int n = 1; n <= 30; ++n) s += 2.0 * std::exp(-t * n * n);
    return s;
}

}  // namespace oracles
