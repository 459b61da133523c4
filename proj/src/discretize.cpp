#include "bslab/discretize.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "bslab/util.hpp"

namespace bslab::disc {

namespace {

constexpr double kResolvedKH = 0.35;  // kh cap: relative eigenvalue error < 0.5%

void fill_staggered_tridiagonal(DiscreteRealization& r, int n, double diag_first,
                                double diag_second) {
    const int m = 2 * n + 1;
    r.tri_diag = RealVector(m);
    r.tri_sub = RealVector(m - 1);
    for (int p = 0; p < m; ++p) r.tri_diag(p) = (p % 2 == 1) ? diag_first : diag_second;
    for (int p = 0; p + 1 < m; ++p) r.tri_sub(p) = (p % 2 == 0 ? -1.0 : +1.0) / r.grid.h;
}

}  // namespace

int DiscreteRealization::size() const {
    if (backend == Backend::Basis) return static_cast<int>(dense_h.rows());
    return static_cast<int>(tri_diag.size());
}

RealMatrix DiscreteRealization::dense() const {
    if (backend == Backend::Basis) return dense_h;
    const int m = size();
    RealMatrix h = RealMatrix::Zero(m, m);
    for (int p = 0; p < m; ++p) h(p, p) = tri_diag(p);
    for (int p = 0; p + 1 < m; ++p) h(p, p + 1) = h(p + 1, p) = tri_sub(p);
    return h;
}

bool DiscreteRealization::is_first_component(int p) const {
    if (backend == Backend::Basis) return p < grid.n_interior;
    return p % 2 == 1;
}

double DiscreteRealization::position(int p) const {
    if (backend == Backend::Basis)
        throw std::logic_error("position: basis backend has no grid positions");
    if (p % 2 == 1) return grid.x0 + ((p + 1) / 2) * grid.h;
    return grid.x0 + (p / 2 + 0.5) * grid.h;
}

RealVector DiscreteRealization::component_sign() const {
    const int m = size();
    RealVector s(m);
    for (int p = 0; p < m; ++p) s(p) = is_first_component(p) ? +1.0 : -1.0;
    return s;
}

double DiscreteRealization::boundary_trace_norm(Eigen::Ref<const RealVector> v) const {
    if (backend == Backend::FiniteDifference) {
        // First-component boundary unknowns are eliminated; the trace the
        // condition acts on is identically zero in this representation.
        (void)v;
        return 0.0;
    }
    // Basis backend: evaluate the first component at both endpoints.
    const int n = grid.n_interior;
    double sq = 0.0;
    for (double th : {grid.x0, grid.x1}) {
        double val = 0.0;
        for (int i = 0; i < n; ++i) {
            const int freq = i + 1;
            val += v(i) * (freq % 2 == 1 ? std::cos(freq * th) : std::sin(freq * th));
        }
        sq += val * val;
    }
    return std::sqrt(sq);
}

DiscreteRealization discretize_1d_example(int n, Backend backend) {
    if (n < 8) throw std::invalid_argument("discretize_1d_example: grid size must be >= 8");
    DiscreteRealization r;
    r.model = "example1d";
    r.backend = backend;
    r.bc = "dirichlet1";
    r.grid.n_interior = n;
    r.grid.x0 = -kPi / 2;
    r.grid.x1 = +kPi / 2;
    r.grid.h = kPi / (n + 1);

    if (backend == Backend::FiniteDifference) {
        fill_staggered_tridiagonal(r, n, 0.0, 0.0);
        return r;
    }

    // Galerkin rows: first component cos(n th) for n odd / sin(n th) for n
    // even, second component const + sin(n th) odd / cos(n th) even. The
    // derivative couples equal frequencies only, with integer coefficients.
    const int m = 2 * n + 1;
    RealMatrix h = RealMatrix::Zero(m, m);
    for (int freq = 1; freq <= n; ++freq) {
        const int row1 = freq - 1;      // first-component basis index
        const int row2 = n + freq;      // second-component index (0 is the constant)
        const double c = freq % 2 == 1 ? static_cast<double>(freq) : -static_cast<double>(freq);
        h(row1, row2) = c;
        h(row2, row1) = c;
    }
    r.dense_h = std::move(h);
    return r;
}

HalfTorusModel discretize_half_torus(int n_radial, int mode_cutoff, double length) {
    if (n_radial < 16) throw std::invalid_argument("discretize_half_torus: radial grid must be >= 16");
    if (mode_cutoff < 4) throw std::invalid_argument("discretize_half_torus: mode cutoff must be >= 4");
    if (!(length > 0)) throw std::invalid_argument("discretize_half_torus: length must be positive");

    HalfTorusModel m;
    m.n_radial = n_radial;
    m.mode_cutoff = mode_cutoff;
    m.length = length;
    m.h = length / (n_radial + 1);
    m.gamma = clifford::build_gamma(2);

    // Chiral data per component, each built from its own inward normal. The
    // tangential frame vector is kept; only gamma_d flips across components.
    m.chiral_left = clifford::build_chirality(m.gamma);
    clifford::GammaSet flipped = m.gamma;
    flipped.gammas.back() = -flipped.gammas.back();
    m.chiral_right = clifford::build_chirality(flipped);

    m.modes.reserve(2 * mode_cutoff + 1);
    for (int k = -mode_cutoff; k <= mode_cutoff; ++k) {
        DiscreteRealization r;
        r.model = "halftorus";
        r.backend = Backend::FiniteDifference;
        r.bc = "chiral";
        r.mode = k;
        r.grid.n_interior = n_radial;
        r.grid.x0 = 0.0;
        r.grid.x1 = length;
        r.grid.h = m.h;
        // In the basis diagonalizing the boundary projector the mode operator
        // is d/dx off-diagonal plus k * diag(+1 first, -1 second).
        fill_staggered_tridiagonal(r, n_radial, static_cast<double>(k), -static_cast<double>(k));
        m.modes.push_back(std::move(r));
    }
    return m;
}

const DiscreteRealization& HalfTorusModel::mode(int k) const {
    if (k < -mode_cutoff || k > mode_cutoff)
        throw std::out_of_range("HalfTorusModel::mode: |k| beyond cutoff");
    return modes[static_cast<size_t>(k + mode_cutoff)];
}

const Matrix* ModeCoupledOp::block(int p) const {
    auto it = blocks.find(p);
    return it == blocks.end() ? nullptr : &it->second;
}

ModeCoupledOp ModeCoupledOp::compose(const ModeCoupledOp& rhs) const {
    ModeCoupledOp out;
    out.mode_cutoff = mode_cutoff;
    out.block_rows = block_rows;
    for (const auto& [p, bp] : blocks)
        for (const auto& [q, bq] : rhs.blocks) {
            Matrix prod = bp * bq;
            auto it = out.blocks.find(p + q);
            if (it == out.blocks.end()) out.blocks.emplace(p + q, std::move(prod));
            else it->second += prod;
        }
    return out;
}

ModeCoupledOp ModeCoupledOp::adjoint() const {
    ModeCoupledOp out;
    out.mode_cutoff = mode_cutoff;
    out.block_rows = block_rows;
    for (const auto& [p, b] : blocks) out.blocks[-p] = b.adjoint();
    return out;
}

ModeCoupledOp ModeCoupledOp::operator+(const ModeCoupledOp& rhs) const {
    ModeCoupledOp out = *this;
    for (const auto& [p, b] : rhs.blocks) {
        auto [it, inserted] = out.blocks.try_emplace(p, b);
        if (!inserted) it->second += b;
    }
    return out;
}

ModeCoupledOp ModeCoupledOp::operator-(const ModeCoupledOp& rhs) const {
    return *this + rhs * Complex(-1.0, 0.0);
}

ModeCoupledOp ModeCoupledOp::operator*(Complex scale) const {
    ModeCoupledOp out = *this;
    for (auto& [p, b] : out.blocks) b *= scale;
    return out;
}

Matrix ModeCoupledOp::dense() const {
    const int nk = 2 * mode_cutoff + 1;
    if (static_cast<long>(nk) * block_rows > 20000)
        throw std::length_error("ModeCoupledOp::dense: materialization too large, "
                                "use the block interface");
    Matrix out = Matrix::Zero(nk * block_rows, nk * block_rows);
    for (int k = -mode_cutoff; k <= mode_cutoff; ++k) {
        for (const auto& [p, b] : blocks) {
            const int src = k - p;
            if (src < -mode_cutoff || src > mode_cutoff) continue;
            out.block((k + mode_cutoff) * block_rows, (src + mode_cutoff) * block_rows, block_rows,
                      block_rows) += b;
        }
    }
    return out;
}

double ModeCoupledOp::norm_bound() const {
    double s = 0.0;
    for (const auto& [p, b] : blocks) s += op_norm(b);
    return s;
}

double ModeCoupledOp::norm_dense() const { return op_norm(dense()); }

ModeCoupledOp multiplication_tangential(const HalfTorusModel& m, const boundary::TrigPoly& f) {
    ModeCoupledOp op;
    op.mode_cutoff = m.mode_cutoff;
    op.block_rows = m.block_rows();
    const Matrix id = Matrix::Identity(op.block_rows, op.block_rows);
    for (int p = -f.max_degree(); p <= f.max_degree(); ++p) {
        const Complex c = f.c(p);
        if (std::abs(c) == 0.0) continue;
        op.blocks[p] = c * id;
    }
    return op;
}

ModeCoupledOp tangential_commutator(const HalfTorusModel& m, const boundary::TrigPoly& f) {
    ModeCoupledOp op;
    op.mode_cutoff = m.mode_cutoff;
    op.block_rows = m.block_rows();
    const RealVector sign = m.modes.front().component_sign();
    for (int p = -f.max_degree(); p <= f.max_degree(); ++p) {
        const Complex c = f.c(p);
        if (std::abs(c) == 0.0 || p == 0) continue;
        op.blocks[p] = (c * static_cast<double>(p)) * sign.cast<Complex>().asDiagonal();
    }
    return op;
}

ModeCoupledOp control_multiplication(const HalfTorusModel& m,
                                     const std::function<double(double)>& g) {
    const int n = m.n_radial;
    const int rows = m.block_rows();
    const DiscreteRealization& r0 = m.modes.front();
    RealMatrix c = RealMatrix::Zero(rows, rows);
    // Component swap g(x) * (u <-> v): u_j couples to the two neighbouring
    // midpoints with weight g(x_j)/2; symmetrized so the block is exactly
    // Hermitian.
    for (int j = 1; j <= n; ++j) {
        const int pu = 2 * j - 1;
        const double gj = g(r0.position(pu));
        c(pu, pu - 1) += 0.5 * gj;
        c(pu - 1, pu) += 0.5 * gj;
        c(pu, pu + 1) += 0.5 * gj;
        c(pu + 1, pu) += 0.5 * gj;
    }
    ModeCoupledOp op;
    op.mode_cutoff = m.mode_cutoff;
    op.block_rows = rows;
    op.blocks[0] = c.cast<Complex>();
    return op;
}

TangentialOperator tangential_operator(const HalfTorusModel& m) {
    const int k_max = m.mode_cutoff;
    const int fiber = m.gamma.rep_size();
    TangentialOperator t;
    t.mode_cutoff = k_max;
    t.d_n = Matrix::Zero(fiber * (2 * k_max + 1), fiber * (2 * k_max + 1));
    for (int k = -k_max; k <= k_max; ++k) {
        t.d_n.block((k + k_max) * fiber, (k + k_max) * fiber, fiber, fiber) =
            static_cast<double>(k) * m.gamma.gamma(1);
    }
    return t;
}

boundary::FirstOrderOp1D continuum_operator(const DiscreteRealization& r) {
    boundary::FirstOrderOp1D op;
    op.j0 = Matrix(2, 2);
    op.j0 << 0, 1, -1, 0;
    op.theta_min = r.grid.x0;
    op.theta_max = r.grid.x1;
    if (r.model == "halftorus") {
        const double k = r.mode;
        op.potential = [k](double) {
            Matrix v(2, 2);
            v << k, 0, 0, -k;
            return v;
        };
    } else if (r.model != "example1d") {
        throw std::invalid_argument("continuum_operator: unknown model " + r.model);
    }
    return op;
}

double green_formula_residual(const DiscreteRealization& r, const boundary::SmoothSection& u,
                              const boundary::SmoothSection& v, int quad_points,
                              boundary::QuadRule rule) {
    return boundary::green_formula_residual(continuum_operator(r), u, v, quad_points, rule);
}

RealVector multiplication_diagonal(const DiscreteRealization& r,
                                   const std::function<double(double)>& f) {
    if (r.backend != Backend::FiniteDifference)
        throw std::invalid_argument("multiplication_diagonal: fd backend only");
    const int m = r.size();
    RealVector d(m);
    for (int p = 0; p < m; ++p) d(p) = f(r.position(p));
    return d;
}

RealMatrix multiplication_operator_1d(const DiscreteRealization& r, const boundary::TrigPoly& f) {
    if (!f.is_real())
        throw std::invalid_argument("multiplication_operator_1d: sampled function must be real");
    const RealVector d =
        multiplication_diagonal(r, [&](double th) { return f.eval(th).real(); });
    return RealMatrix(d.asDiagonal());
}

double trusted_window(const DiscreteRealization& r) {
    if (r.backend == Backend::Basis) return std::numeric_limits<double>::infinity();
    return kResolvedKH / r.grid.h;
}

double trusted_window(const HalfTorusModel& m) {
    return std::min(static_cast<double>(m.mode_cutoff), kResolvedKH / m.h);
}

namespace {

spectral::ModeSpectrum solve_block(const DiscreteRealization& r, bool want_vectors,
                                   double vectors_within) {
    spectral::ModeSpectrum out;
    out.mode = r.mode;
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
    if (r.backend == Backend::FiniteDifference) {
        solver.computeFromTridiagonal(r.tri_diag, r.tri_sub,
                                      want_vectors ? Eigen::ComputeEigenvectors
                                                   : Eigen::EigenvaluesOnly);
    } else {
        solver.compute(r.dense(), want_vectors ? Eigen::ComputeEigenvectors
                                               : Eigen::EigenvaluesOnly);
    }
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_spectrum: eigensolver failed");
    out.values = solver.eigenvalues();
    if (want_vectors) {
        std::vector<int> keep;
        for (int i = 0; i < out.values.size(); ++i)
            if (std::abs(out.values(i)) <= vectors_within) keep.push_back(i);
        out.vectors = RealMatrix(out.values.size(), static_cast<int>(keep.size()));
        out.vec_cols = keep;
        for (size_t i = 0; i < keep.size(); ++i)
            out.vectors.col(static_cast<int>(i)) = solver.eigenvectors().col(keep[i]);
    }
    return out;
}

}  // namespace

spectral::SpectralData solve_spectrum(const DiscreteRealization& r, bool want_vectors,
                                      double vectors_within) {
    spectral::SpectralData sd;
    sd.dim = 1;
    sd.block_rows = r.size();
    sd.trusted = trusted_window(r);
    sd.blocks.push_back(solve_block(r, want_vectors, vectors_within));
    sd.finalize();
    // Exact backends resolve everything they computed, but nothing beyond.
    if (!std::isfinite(sd.trusted)) sd.trusted = sd.max_abs();
    return sd;
}

spectral::SpectralData sweep_half_torus(const HalfTorusModel& m, bool want_vectors,
                                        double vectors_within) {
    spectral::SpectralData sd;
    sd.dim = 2;
    sd.block_rows = m.block_rows();
    sd.trusted = trusted_window(m);
    sd.blocks.resize(m.modes.size());
    parallel_for(static_cast<int>(m.modes.size()), [&](int i) {
        sd.blocks[static_cast<size_t>(i)] = solve_block(m.modes[static_cast<size_t>(i)],
                                                        want_vectors, vectors_within);
    });
    sd.finalize();
    return sd;
}

}  // namespace bslab::disc
