#pragma once

#include <vector>

#include "bslab/types.hpp"

namespace bslab::clifford {

/// d anticommuting selfadjoint unitary matrices of size 2^{d/2}, built by a
/// fixed iterated tensor-product recursion so that two calls with equal d
/// return bit-identical matrices. All entries lie in {0, +-1, +-i}.
struct GammaSet {
    int dim = 0;                 // spacetime dimension d (even)
    std::vector<Matrix> gammas;  // gammas[i] is gamma_{i+1}

    int rep_size() const { return gammas.empty() ? 0 : static_cast<int>(gammas[0].rows()); }
    const Matrix& gamma(int i) const { return gammas.at(static_cast<size_t>(i) - 1); }  // 1-based
    const Matrix& normal() const { return gammas.back(); }  // gamma_d, the inward-normal one
};

/// Boundary chirality chi = (-i)^{d/2+1} gamma_1 ... gamma_{d-1}, its
/// eigenprojectors, the volume chirality i*chi*gamma_d and the boundary
/// condition endomorphism S = Pi_-.
struct ChiralData {
    Matrix chi;
    Matrix chi_volume;  // i * chi * gamma_d; anticommutes with every gamma
    Matrix pi_plus;     // (1 + chi)/2
    Matrix pi_minus;    // (1 - chi)/2
    Matrix s;           // = pi_minus
};

/// Antilinear operator v -> u * conj(v). Always an isometry here (u unitary).
struct ConjugationOp {
    Matrix u;
    int epsilon = +1;        // sign in D J = eps J D for the flat Dirac operator
    int epsilon_prime = 0;   // sign in J chi_vol = eps' chi_vol J

    Vector apply(const Vector& v) const { return u * v.conjugate(); }
    /// J X J^{-1} for linear X.
    Matrix sandwich(const Matrix& x) const { return u * x.conjugate() * u.adjoint(); }
};

GammaSet build_gamma(int d);  // throws std::invalid_argument unless d even, 2 <= d <= 8

ChiralData build_chirality(const GammaSet& g);

/// The conjugation operator J with J gamma_i = -gamma_i J for all i, built as
/// a product of a fixed subset of gammas and verified; phase fixed so the
/// first nonzero entry of u is positive real. Throws if verification fails.
ConjugationOp build_conjugation(const GammaSet& g);

/// J~ := J * chi_vol (antilinear isometry, anticommutes with the Dirac op).
ConjugationOp conjugation_tilde(const GammaSet& g);

/// J' := J when d/2 is even, J~ when d/2 is odd. Satisfies J' S = S J'.
ConjugationOp conjugation_selector(const GammaSet& g);

/// Largest residual over all defining relations: gamma_i gamma_j + gamma_j
/// gamma_i = 2 delta_ij, selfadjointness and unitarity of each gamma.
double relation_residual(const GammaSet& g);

/// Residuals of the chi relations: chi = chi*, chi^2 = 1, {chi, gamma_d} = 0,
/// [chi, gamma_n] = 0 for n < d, plus the Pi/S idempotent identities.
double chirality_residual(const GammaSet& g, const ChiralData& c);

/// Residuals of J gamma_i = -gamma_i J, the isometry property and the
/// epsilon' parity relation.
double conjugation_residual(const GammaSet& g, const ConjugationOp& j);

}  // namespace bslab::clifford
