#include "bslab/clifford.hpp"

#include <stdexcept>
#include <string>

#include "bslab/util.hpp"

namespace bslab::clifford {

namespace {

Matrix pauli(int i) {
    Matrix m(2, 2);
    switch (i) {
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0); break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Multiply by a phase so the first nonzero entry (row-major scan) is
/// positive real. Keeps outputs reproducible across platforms.
Matrix phase_normalize(const Matrix& u) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            Complex e = u(i, j);
            if (std::abs(e) > 1e-14) return (std::abs(e) / e) * u;
        }
    }
    return u;
}

}  // namespace

GammaSet build_gamma(int d) {
    if (d % 2 != 0 || d < 2 || d > 8) {
        throw std::invalid_argument("build_gamma: dimension must be even and in [2, 8], got " +
                                    std::to_string(d));
    }
    GammaSet g;
    g.dim = d;
    g.gammas = {pauli(1), pauli(2)};
    // d -> d+2: tensor the old generators with the 2x2 grading factor and
    // append two fresh generators acting on the new slot.
    while (static_cast<int>(g.gammas.size()) < d) {
        const Matrix id = Matrix::Identity(g.gammas[0].rows(), g.gammas[0].cols());
        std::vector<Matrix> next;
        next.reserve(g.gammas.size() + 2);
        for (const auto& gi : g.gammas) next.push_back(kron(gi, pauli(3)));
        next.push_back(kron(id, pauli(1)));
        next.push_back(kron(id, pauli(2)));
        g.gammas = std::move(next);
    }
    return g;
}

ChiralData build_chirality(const GammaSet& g) {
    const int d = g.dim;
    const int n = g.rep_size();
    Matrix chi = Matrix::Identity(n, n);
    for (int i = 1; i <= d - 1; ++i) chi = chi * g.gamma(i);
    chi = ipow(-(d / 2 + 1)) * chi;  // (-i)^{d/2+1}

    ChiralData c;
    c.chi = chi;
    c.chi_volume = Complex(0, 1) * chi * g.normal();
    c.pi_plus = 0.5 * (Matrix::Identity(n, n) + chi);
    c.pi_minus = 0.5 * (Matrix::Identity(n, n) - chi);
    c.s = c.pi_minus;
    return c;
}

ConjugationOp build_conjugation(const GammaSet& g) {
    const int d = g.dim;
    const int n = g.rep_size();
    // In the fixed convention the even-index gammas are the imaginary ones.
    // The product of the imaginary gammas works when their count d/2 is odd;
    // the product of the real ones works when d/2 is even.
    Matrix u = Matrix::Identity(n, n);
    const bool use_imaginary = (d / 2) % 2 == 1;
    for (int i = 1; i <= d; ++i) {
        const bool imaginary = (i % 2 == 0);
        if (imaginary == use_imaginary) u = u * g.gamma(i);
    }
    u = phase_normalize(u);

    ConjugationOp j;
    j.u = u;
    j.epsilon = +1;

    // Verify U conj(gamma_i) U^* = -gamma_i before accepting the candidate.
    double res = 0.0;
    for (int i = 1; i <= d; ++i) {
        res = std::max(res, op_norm(Matrix(u * g.gamma(i).conjugate() * u.adjoint() + g.gamma(i))));
    }
    if (res > 1e-12) {
        throw std::runtime_error("build_conjugation: no unitary in the gamma-product family "
                                 "anticommutes with all gammas (residual " + std::to_string(res) + ")");
    }

    // epsilon': measured, then checked against the d/2 parity rule.
    const Matrix chi_vol = build_chirality(g).chi_volume;
    const double plus = op_norm(Matrix(u * chi_vol.conjugate() - chi_vol * u));
    const double minus = op_norm(Matrix(u * chi_vol.conjugate() + chi_vol * u));
    j.epsilon_prime = plus <= minus ? +1 : -1;
    const int expected = (d / 2) % 2 == 0 ? +1 : -1;
    if (j.epsilon_prime != expected || std::min(plus, minus) > 1e-12) {
        throw std::runtime_error("build_conjugation: epsilon' does not match the parity rule");
    }
    return j;
}

ConjugationOp conjugation_tilde(const GammaSet& g) {
    const ConjugationOp j = build_conjugation(g);
    const Matrix chi_vol = build_chirality(g).chi_volume;
    ConjugationOp jt;
    jt.u = j.u * chi_vol.conjugate();  // (J chi_vol)(v) = U conj(chi_vol) conj(v)
    jt.epsilon = -j.epsilon;           // chi_vol anticommutes with the Dirac operator
    jt.epsilon_prime = j.epsilon_prime;  // J~ chi_vol = J = eps' chi_vol J~
    return jt;
}

ConjugationOp conjugation_selector(const GammaSet& g) {
    return (g.dim / 2) % 2 == 0 ? build_conjugation(g) : conjugation_tilde(g);
}

double relation_residual(const GammaSet& g) {
    const int n = g.rep_size();
    const Matrix id = Matrix::Identity(n, n);
    double res = 0.0;
    for (int i = 1; i <= g.dim; ++i) {
        const Matrix& gi = g.gamma(i);
        res = std::max(res, op_norm(Matrix(gi - gi.adjoint())));
        res = std::max(res, op_norm(Matrix(gi * gi.adjoint() - id)));
        for (int j = i; j <= g.dim; ++j) {
            const Matrix& gj = g.gamma(j);
            const Matrix anti = gi * gj + gj * gi - (i == j ? 2.0 : 0.0) * id;
            res = std::max(res, op_norm(anti));
        }
    }
    return res;
}

double chirality_residual(const GammaSet& g, const ChiralData& c) {
    const int n = g.rep_size();
    const Matrix id = Matrix::Identity(n, n);
    double res = 0.0;
    res = std::max(res, op_norm(Matrix(c.chi - c.chi.adjoint())));
    res = std::max(res, op_norm(Matrix(c.chi * c.chi - id)));
    res = std::max(res, op_norm(Matrix(c.chi * g.normal() + g.normal() * c.chi)));
    for (int i = 1; i < g.dim; ++i)
        res = std::max(res, op_norm(Matrix(c.chi * g.gamma(i) - g.gamma(i) * c.chi)));
    res = std::max(res, op_norm(Matrix(c.pi_plus + c.pi_minus - id)));
    res = std::max(res, op_norm(Matrix(c.pi_plus * c.pi_plus - c.pi_plus)));
    res = std::max(res, op_norm(Matrix(c.pi_minus * c.pi_minus - c.pi_minus)));
    res = std::max(res, op_norm(Matrix(c.s - c.s.adjoint())));
    res = std::max(res, op_norm(Matrix(c.chi_volume - c.chi_volume.adjoint())));
    res = std::max(res, op_norm(Matrix(c.chi_volume * c.chi_volume - id)));
    for (int i = 1; i <= g.dim; ++i)
        res = std::max(res, op_norm(Matrix(c.chi_volume * g.gamma(i) + g.gamma(i) * c.chi_volume)));
    return res;
}

double conjugation_residual(const GammaSet& g, const ConjugationOp& j) {
    const int n = g.rep_size();
    double res = op_norm(Matrix(j.u * j.u.adjoint() - Matrix::Identity(n, n)));
    for (int i = 1; i <= g.dim; ++i)
        res = std::max(res, op_norm(Matrix(j.u * g.gamma(i).conjugate() + g.gamma(i) * j.u)));
    const Matrix chi_vol = build_chirality(g).chi_volume;
    res = std::max(res, op_norm(Matrix(
        j.u * chi_vol.conjugate() - static_cast<double>(j.epsilon_prime) * chi_vol * j.u)));
    return res;
}

}  // namespace bslab::clifford
