#include "bslab/boundary.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "bslab/util.hpp"

namespace bslab::boundary {

FirstOrderOp1D example_1d() {
    FirstOrderOp1D op;
    op.j0 = Matrix(2, 2);
    op.j0 << 0, 1, -1, 0;
    return op;
}

GreenMatrix green_matrix(const FirstOrderOp1D& op, Side side) {
    Eigen::FullPivLU<Matrix> lu(op.j0);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("green_matrix: not elliptic in normal direction "
                                    "(singular normal coefficient)");
    }
    if (op_norm(Matrix(op.j0 + op.j0.adjoint())) > 1e-12 * (1.0 + op_norm(op.j0))) {
        throw std::invalid_argument("green_matrix: normal coefficient must be anti-selfadjoint");
    }
    GreenMatrix out;
    out.inward_sign = side == Side::Left ? +1 : -1;
    // With inward derivative d_n = sign * d/dtheta the operator reads
    // (i sign J0)(-i d_n) + V, so A = i * (i sign J0) = -sign * J0.
    out.a = -static_cast<double>(out.inward_sign) * op.j0;
    return out;
}

GreenMatrix green_matrix_dirac(const clifford::GammaSet& g, int inward_sign) {
    GreenMatrix out;
    out.inward_sign = inward_sign;
    out.a = Complex(0, -1) * static_cast<double>(inward_sign) * g.normal();
    return out;
}

SelfadjointVerdict check_selfadjoint(const GreenMatrix& a, const TraceCondition& t, double tol) {
    if (a.a.rows() != t.s.rows() || a.a.cols() != t.s.cols()) {
        throw std::invalid_argument("check_selfadjoint: shape mismatch between A and S");
    }
    Eigen::FullPivLU<Matrix> lu(a.a);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("check_selfadjoint: singular Green matrix, criterion undefined");
    }
    const Matrix inv = lu.inverse();
    const Matrix one = Matrix::Identity(a.a.rows(), a.a.cols());
    SelfadjointVerdict v;
    v.r1 = op_norm(Matrix((one - t.s) * a.a * (one - t.s)));
    v.r2 = op_norm(Matrix(t.s * inv * t.s));
    v.ok = std::max(v.r1, v.r2) < tol;
    return v;
}

SelfadjointVerdict check_selfadjoint(
    const std::vector<std::pair<GreenMatrix, TraceCondition>>& components, double tol) {
    SelfadjointVerdict all;
    all.ok = true;
    for (const auto& [a, t] : components) {
        const SelfadjointVerdict v = check_selfadjoint(a, t, tol);
        all.ok = all.ok && v.ok;
        all.r1 = std::max(all.r1, v.r1);
        all.r2 = std::max(all.r2, v.r2);
    }
    return all;
}

namespace {

Complex inner_sum(const Vector& x, const Vector& y) { return y.dot(x); }  // (x, y) = y^H x

}  // namespace

double green_formula_residual(const FirstOrderOp1D& op, const SmoothSection& u,
                              const SmoothSection& v, int quad_points, QuadRule rule) {
    const double a = op.theta_min, b = op.theta_max;
    const int n = std::max(quad_points, 4);

    const auto integrand = [&](double th) -> Complex {
        const Vector uu = u.value(th), du = u.derivative(th);
        const Vector vv = v.value(th), dv = v.derivative(th);
        const Matrix pot = op.potential_at(th);
        const Vector pu = op.j0 * du + pot * uu;
        const Vector pv = op.j0 * dv + pot * vv;
        return inner_sum(pu, vv) - inner_sum(uu, pv);
    };

    Complex interior = 0;
    if (rule == QuadRule::Trapezoid) {
        const double h = (b - a) / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            interior += w * integrand(a + i * h);
        }
        interior *= h;
    } else {
        const int m = n % 2 == 0 ? n + 1 : n;  // Simpson needs an odd point count
        const double h = (b - a) / (m - 1);
        for (int i = 0; i < m; ++i) {
            double w = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            interior += w * integrand(a + i * h);
        }
        interior *= h / 3.0;
    }

    Complex bdry = 0;
    for (Side side : {Side::Left, Side::Right}) {
        const double th = side == Side::Left ? a : b;
        const GreenMatrix gm = green_matrix(op, side);
        bdry += inner_sum(Vector(gm.a * u.value(th)), v.value(th));
    }
    return std::abs(interior - bdry);
}

TrigPoly TrigPoly::constant(Complex c) {
    Vector v(1);
    v(0) = c;
    return TrigPoly(v);
}

TrigPoly TrigPoly::wave(int n) {
    const int m = std::abs(n);
    Vector v = Vector::Zero(2 * m + 1);
    v(m + n) = 1.0;
    return TrigPoly(v);
}

TrigPoly TrigPoly::sin_wave(int n) {
    const int m = std::abs(n);
    Vector v = Vector::Zero(2 * m + 1);
    v(m + n) = Complex(0, -0.5);
    v(m - n) = Complex(0, +0.5);
    return TrigPoly(v);
}

TrigPoly TrigPoly::cos_wave(int n) {
    const int m = std::abs(n);
    Vector v = Vector::Zero(2 * m + 1);
    v(m + n) = 0.5;
    v(m - n) = 0.5;
    return TrigPoly(v);
}

Complex TrigPoly::c(int m) const {
    const int shift = max_degree();
    if (m < -shift || m > shift) return 0.0;
    return coeff(shift + m);
}

Complex TrigPoly::eval(double theta) const {
    const int shift = max_degree();
    Complex out = 0;
    for (int m = -shift; m <= shift; ++m) out += c(m) * std::exp(Complex(0, m * theta));
    return out;
}

Complex TrigPoly::derivative_at(double theta, int order) const {
    const int shift = max_degree();
    Complex out = 0;
    for (int m = -shift; m <= shift; ++m) {
        if (c(m) == Complex(0, 0)) continue;
        out += c(m) * std::pow(Complex(0, m), order) * std::exp(Complex(0, m * theta));
    }
    return out;
}

TrigPoly TrigPoly::operator*(const TrigPoly& rhs) const {
    const int m1 = max_degree(), m2 = rhs.max_degree();
    const int m = m1 + m2;
    Vector out = Vector::Zero(2 * m + 1);
    for (int p = -m1; p <= m1; ++p)
        for (int q = -m2; q <= m2; ++q) out(m + p + q) += c(p) * rhs.c(q);
    return TrigPoly(out);
}

TrigPoly TrigPoly::operator+(const TrigPoly& rhs) const {
    const int m = std::max(max_degree(), rhs.max_degree());
    Vector out = Vector::Zero(2 * m + 1);
    for (int p = -m; p <= m; ++p) out(m + p) = c(p) + rhs.c(p);
    return TrigPoly(out);
}

bool TrigPoly::is_real() const {
    for (int m = 0; m <= max_degree(); ++m)
        if (std::abs(c(-m) - std::conj(c(m))) > 1e-13) return false;
    return true;
}

namespace {

/// Check sum_m c_m (i m)^{order} e^{i m theta0} = 0 at both endpoints for the
/// listed derivative orders. Powers are evaluated with frequencies scaled to
/// [-1, 1] (the zero set is scale-invariant) so no overflow at any degree.
MembershipResult derivative_conditions(const TrigPoly& a, bool odd_orders,
                                       double theta_left, double theta_right) {
    const int m_max = a.max_degree();
    double coeff_scale = 0.0;
    for (int m = -m_max; m <= m_max; ++m) coeff_scale += std::abs(a.c(m));
    MembershipResult out;
    if (coeff_scale == 0.0) {
        out.member = true;
        return out;
    }
    const double tol = 1e-9 * coeff_scale;
    const double denom = std::max(1, m_max);

    for (int k = 0; k <= m_max; ++k) {
        const int order = odd_orders ? 2 * k + 1 : 2 * k;
        for (double th : {theta_right, theta_left}) {
            Complex val = 0;
            for (int m = -m_max; m <= m_max; ++m) {
                if (a.c(m) == Complex(0, 0)) continue;
                const double scaled = m / denom;
                double pw = 1.0;
                for (int p = 0; p < order; ++p) pw *= scaled;
                val += a.c(m) * pw * std::exp(Complex(0, m * th));
            }
            if (std::abs(val) > tol) {
                out.member = false;
                out.first_violation = {k, th};
                return out;
            }
        }
    }
    out.member = true;
    return out;
}

}  // namespace

MembershipResult algebra_membership_1d(const TrigPoly& a) {
    return derivative_conditions(a, /*odd_orders=*/true, -kPi / 2, kPi / 2);
}

MembershipResult smooth_domain_membership_1d(const TrigPoly& psi1, const TrigPoly& psi2) {
    const MembershipResult even = derivative_conditions(psi1, /*odd_orders=*/false, -kPi / 2, kPi / 2);
    if (!even.member) return even;
    return derivative_conditions(psi2, /*odd_orders=*/true, -kPi / 2, kPi / 2);
}

}  // namespace bslab::boundary
