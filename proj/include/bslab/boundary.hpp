#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bslab/clifford.hpp"
#include "bslab/types.hpp"

namespace bslab::boundary {

/// First-order symmetric operator J0 d/dtheta + V(theta) on an interval.
/// J0 must be anti-selfadjoint and invertible, V(theta) selfadjoint.
struct FirstOrderOp1D {
    Matrix j0;
    std::function<Matrix(double)> potential;  // empty -> zero potential
    double theta_min = -kPi / 2;
    double theta_max = +kPi / 2;

    int fiber_dim() const { return static_cast<int>(j0.rows()); }
    Matrix potential_at(double theta) const {
        return potential ? potential(theta) : Matrix::Zero(j0.rows(), j0.cols());
    }
};

/// The default half-circle example: J0 = (0 1; -1 0), V = 0.
FirstOrderOp1D example_1d();

enum class Side { Left, Right };  // Left: inward normal +d/dtheta, Right: -d/dtheta

/// Boundary endomorphism from the Green formula, per boundary component.
struct GreenMatrix {
    Matrix a;             // invertible, anti-selfadjoint
    int inward_sign = 1;  // +1 if the inward normal is +d/dtheta
};

/// Idempotent selfadjoint endomorphism defining the trace condition S gamma_0.
struct TraceCondition {
    Matrix s;
};

/// Green matrix of a first-order operator at one boundary component:
/// A = i S1 where the operator is S1 (-i d_n) + tangential, d_n the inward
/// normal derivative. Throws if the normal coefficient is not invertible.
GreenMatrix green_matrix(const FirstOrderOp1D& op, Side side);

/// Dirac case: A = -i * sign * gamma_d with gamma_d the last generator and
/// sign the inward-normal orientation of the component.
GreenMatrix green_matrix_dirac(const clifford::GammaSet& g, int inward_sign);

struct SelfadjointVerdict {
    bool ok = false;
    double r1 = 0.0;  // ||(1-S) A (1-S)||
    double r2 = 0.0;  // ||S A^{-1} S||
};

/// Selfadjointness criterion for the realization: both (1-S) A (1-S) and
/// S A^{-1} S must vanish. Throws on singular A or shape mismatch.
SelfadjointVerdict check_selfadjoint(const GreenMatrix& a, const TraceCondition& t,
                                     double tol = 1e-10);

/// Conjunction over boundary components.
SelfadjointVerdict check_selfadjoint(
    const std::vector<std::pair<GreenMatrix, TraceCondition>>& components, double tol = 1e-10);

/// Smooth test section with an analytic derivative.
struct SmoothSection {
    std::function<Vector(double)> value;
    std::function<Vector(double)> derivative;
};

enum class QuadRule { Trapezoid, Simpson };

/// |(Pu, v) - (u, Pv) - sum_b (A_b u(b), v(b))| by quadrature. The interior
/// integrals use the analytic derivatives of u and v; the boundary term is
/// evaluated pointwise, so the residual is pure quadrature error and decays
/// at the rule's order.
double green_formula_residual(const FirstOrderOp1D& op, const SmoothSection& u,
                              const SmoothSection& v, int quad_points,
                              QuadRule rule = QuadRule::Trapezoid);

/// Trigonometric polynomial a(theta) = sum_{|m|<=M} c_m e^{i m theta}.
struct TrigPoly {
    Vector coeff;  // size 2M+1, coeff(M + m) = c_m

    TrigPoly() : coeff(Vector::Zero(1)) {}
    explicit TrigPoly(Vector c) : coeff(std::move(c)) {}
    static TrigPoly zero(int max_degree) { return TrigPoly(Vector::Zero(2 * max_degree + 1)); }
    static TrigPoly constant(Complex c);
    static TrigPoly sin_wave(int n);    // sin(n theta)
    static TrigPoly cos_wave(int n);    // cos(n theta)
    static TrigPoly wave(int n);        // e^{i n theta}

    int max_degree() const { return static_cast<int>(coeff.size()) / 2; }
    Complex c(int m) const;                 // 0 outside range
    Complex eval(double theta) const;
    Complex derivative_at(double theta, int order) const;
    TrigPoly operator*(const TrigPoly& rhs) const;  // coefficient convolution
    TrigPoly operator+(const TrigPoly& rhs) const;
    bool is_real() const;  // c_{-m} == conj(c_m)
};

struct MembershipResult {
    bool member = false;
    // (derivative order index k, boundary point theta) of the first failure
    std::optional<std::pair<int, double>> first_violation;
};

/// Membership of a in the admissible algebra for the half-circle example:
/// all odd derivatives vanish at both endpoints. By a Vandermonde argument
/// in the squared frequencies, checking orders 2k+1 for k = 0..M is an exact
/// finite test for a trig polynomial of degree M.
MembershipResult algebra_membership_1d(const TrigPoly& a);

/// Smooth-domain test for the half-circle example: even derivatives of psi1
/// and odd derivatives of psi2 vanish at both endpoints.
MembershipResult smooth_domain_membership_1d(const TrigPoly& psi1, const TrigPoly& psi2);

}  // namespace bslab::boundary
