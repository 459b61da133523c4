#pragma once

#include <map>
#include <string>
#include <vector>

#include "bslab/boundary.hpp"
#include "bslab/clifford.hpp"
#include "bslab/spectral_data.hpp"
#include "bslab/types.hpp"

namespace bslab::disc {

enum class Backend { FiniteDifference, Basis };

struct Grid1D {
    int n_interior = 0;  // first-component interior node count
    double h = 0.0;      // spacing, h * (n_interior + 1) = interval length
    double x0 = 0.0;
    double x1 = 0.0;
};

/// Finite Hermitian matrix realizing a boundary-condition-restricted operator.
///
/// fd layout (staggered, interleaved by position): size m = 2N+1 with
///   p even: second component at midpoint x0 + (p/2 + 1/2) h   (v / psi2)
///   p odd : first component at node x0 + ((p+1)/2) h          (u / psi1)
/// The first component is the one killed at the boundary; its two boundary
/// unknowns are eliminated, which makes the difference block exactly
/// antisymmetric and the assembled matrix exactly symmetric. In this layout
/// the matrix is tridiagonal and is stored as (diag, sub).
///
/// basis layout: Galerkin in the parity-respecting trig basis; the matrix is
/// dense with exact integer entries. Rows 0..N-1 are first-component basis
/// functions (cos n, n odd; sin n, n even) ordered by frequency; rows N..2N
/// are second-component ones (const, then sin n odd / cos n even by
/// frequency).
struct DiscreteRealization {
    std::string model;  // "example1d" | "halftorus"
    Backend backend = Backend::FiniteDifference;
    std::string bc;     // "dirichlet1" | "chiral"
    Grid1D grid;
    int mode = 0;       // tangential mode (halftorus)

    RealVector tri_diag, tri_sub;  // fd
    RealMatrix dense_h;            // basis

    int size() const;
    RealMatrix dense() const;  // exactly symmetric by construction
    bool is_first_component(int p) const;
    double position(int p) const;  // fd only

    /// +1 on first-component rows, -1 on second-component rows (fd layout).
    RealVector component_sign() const;

    /// || S psi(boundary) || for an eigenvector in this representation.
    double boundary_trace_norm(Eigen::Ref<const RealVector> v) const;
};

/// Half-circle model: (0 d/dtheta; -d/dtheta 0) with psi1(+-pi/2) = 0.
/// Exact spectrum of the continuum realization: the integers, simple, kernel
/// spanned by (0, 1).
DiscreteRealization discretize_1d_example(int n, Backend backend);

/// Dirac operator on [0, L] x S^1 with the chiral boundary condition at both
/// ends, decomposed over tangential modes k. Each mode matrix is assembled in
/// the basis that diagonalizes the boundary projector, where the condition
/// becomes a first-component Dirichlet elimination and the matrix is real
/// symmetric tridiagonal (interleaved fd layout above).
struct HalfTorusModel {
    int n_radial = 0;
    int mode_cutoff = 0;
    double length = kPi;
    double h = 0.0;
    clifford::GammaSet gamma;          // d = 2
    clifford::ChiralData chiral_left;  // built from the inward normal +gamma_2
    clifford::ChiralData chiral_right; // built from the inward normal -gamma_2
    std::vector<DiscreteRealization> modes;  // k = -K..K in order

    int block_rows() const { return 2 * n_radial + 1; }
    const DiscreteRealization& mode(int k) const;
};

HalfTorusModel discretize_half_torus(int n_radial, int mode_cutoff, double length = kPi);

/// Operator on the truncated mode space (2K+1 blocks of block_rows each),
/// banded in the mode index: (X psi)_k = sum_p blocks[p] psi_{k-p}.
/// Compositions are formed at the symbol level (coefficient convolution), so
/// identities that hold for the underlying operators hold exactly here.
struct ModeCoupledOp {
    int mode_cutoff = 0;
    int block_rows = 0;
    std::map<int, Matrix> blocks;

    ModeCoupledOp compose(const ModeCoupledOp& rhs) const;
    ModeCoupledOp adjoint() const;
    ModeCoupledOp operator+(const ModeCoupledOp& rhs) const;
    ModeCoupledOp operator-(const ModeCoupledOp& rhs) const;
    ModeCoupledOp operator*(Complex scale) const;
    const Matrix* block(int p) const;
    Matrix dense() const;        // full (2K+1)*m matrix, mode-major
    double norm_bound() const;   // sum_p ||B_p||
    double norm_dense() const;   // exact operator norm of dense()
};

/// Commutator [H, f] with H the mode-diagonal model operator and f a scalar
/// tangential multiplication; equals p * f_p * component_sign per shift p.
ModeCoupledOp tangential_commutator(const HalfTorusModel& m, const boundary::TrigPoly& f);

/// Scalar multiplication by a tangential function (blocks f_p * Id).
ModeCoupledOp multiplication_tangential(const HalfTorusModel& m, const boundary::TrigPoly& f);

/// Mode-diagonal multiplication by g(x) * (first/second component swap),
/// discretized with nearest-neighbor averaging across the staggered grids.
/// Anticommutes with the model's conjugation symmetry; used as the
/// symmetry-broken control in tadpole experiments.
ModeCoupledOp control_multiplication(const HalfTorusModel& m,
                                     const std::function<double(double)>& g);

/// Boundary tangential operator, truncated to |k| <= K: block k equals
/// k * gamma_1 on the 2-dimensional fiber (original spinor basis).
struct TangentialOperator {
    Matrix d_n;  // block-diagonal, size 2(2K+1)
    int mode_cutoff = 0;
};
TangentialOperator tangential_operator(const HalfTorusModel& m);

/// The continuum operator a realization discretizes, in the representation
/// basis: J0 = (0 1; -1 0) with zero potential for the half-circle model,
/// plus the constant potential k diag(1, -1) for a torus mode (the rotated
/// basis that diagonalizes the boundary projector).
boundary::FirstOrderOp1D continuum_operator(const DiscreteRealization& r);

/// Green formula defect of the realization's continuum operator on analytic
/// test sections, by quadrature.
double green_formula_residual(const DiscreteRealization& r, const boundary::SmoothSection& u,
                              const boundary::SmoothSection& v, int quad_points,
                              boundary::QuadRule rule = boundary::QuadRule::Trapezoid);

/// Scalar multiplication sampled on the staggered 1D grid (diagonal entries
/// in the interleaved layout; both components sample the same function).
RealVector multiplication_diagonal(const DiscreteRealization& r,
                                   const std::function<double(double)>& f);

/// Multiplication by a trig polynomial on the 1D grid, as a dense matrix.
RealMatrix multiplication_operator_1d(const DiscreteRealization& r, const boundary::TrigPoly& f);

/// Eigen-decomposition of one realization. Vectors are stored for
/// eigenvalues with |lambda| <= vectors_within when want_vectors is set.
spectral::SpectralData solve_spectrum(const DiscreteRealization& r, bool want_vectors = false,
                                      double vectors_within =
                                          std::numeric_limits<double>::infinity());

/// Parallel sweep over all modes of the half-torus model; blocks are merged
/// in deterministic mode order regardless of thread count.
spectral::SpectralData sweep_half_torus(const HalfTorusModel& m, bool want_vectors = false,
                                        double vectors_within =
                                            std::numeric_limits<double>::infinity());

/// Largest |lambda| resolved reliably: kh <= 0.35 for fd grids (relative
/// eigenvalue error below 0.5%), capped by the mode cutoff for the torus.
double trusted_window(const DiscreteRealization& r);
double trusted_window(const HalfTorusModel& m);

}  // namespace bslab::disc
