#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bslab/discretize.hpp"
#include "bslab/spectral_data.hpp"
#include "bslab/types.hpp"

namespace bslab::spectral {

/// Positive cutoff profile Phi with moments Phi_k = 1/2 int_0^inf Phi(t)
/// t^{k/2-1} dt, evaluated by quadrature and cross-checked against the
/// closed form on construction.
struct CutoffFunction {
    std::string name;
    std::function<double(double)> phi;
    bool compact_support = false;  // integrate over [0,1] only

    double operator()(double t) const { return phi(t); }
    double moment(int k) const;              // quadrature
    double moment_closed_form(int k) const;  // exact reference

    static CutoffFunction gaussian();  // Phi(t) = exp(-t), Phi_k = Gamma(k/2)/2
    static CutoffFunction bump();      // Phi(t) = (1-t)^2 on [0,1]
    static CutoffFunction by_name(const std::string& name);
};

/// Truncated zeta sum: sum over 0 < |lambda_n| <= cutoff of |lambda_n|^{-s}.
/// The kernel is excluded; cutoff beyond the trusted window is refused.
double zeta_partial(const SpectralData& sd, double s, double cutoff);

/// Count of nonzero eigenvalues with |lambda| <= cutoff.
int counting_function(const SpectralData& sd, double cutoff);

enum class FitModel {
    CLog,         // c + r log(Lambda)
    LinLogConst,  // c1 Lambda + r log(Lambda) + c0
};

/// Default cumulative-sum model for weights ~ |lambda|^{-sigma} in dimension d.
FitModel default_fit_model(int dim, double sigma);

struct ResidueFit {
    FitModel model = FitModel::CLog;
    double r = 0.0;       // log-slope over the pooled window = residue estimate
    double spread = 0.0;  // max - min of per-window slopes
    std::vector<double> window_r;
    std::vector<std::pair<double, double>> windows;
    bool trusted = false;
    int sample_count = 0;
    double weight_scale = 0.0;  // magnitude of the summed terms, for tolerances
};

struct FitWindows {
    double lo = 0.0, hi = 0.0;  // pooled range; 0,0 -> [trusted/8, trusted/2]
    int count = 3;              // log-spaced subwindows
};

/// Residue extraction by log-cutoff fitting: the cumulative sums
/// F(Lambda) = sum_{0<|lambda|<=Lambda} w_n |lambda_n|^{-sigma} are sampled
/// at midpoints between consecutive distinct |lambda| and the model is
/// fitted per subwindow and over the pooled range. `weights` is aligned
/// with sd.order (kernel entries ignored). Throws on a degenerate design.
ResidueFit residue_fit(const SpectralData& sd, const std::vector<double>& weights, double sigma,
                       FitModel model, const FitWindows& win = {});

/// Heat trace kernel_dim + sum e^{-t lambda^2}. Throws when the tail beyond
/// the trusted window would contribute more than 1e-10 of the total.
double heat_trace(const SpectralData& sd, double t);

/// Least-squares coefficients of Tr e^{-tD^2} ~ sum_k a_k t^{(k-d)/2} over
/// the given t grid (n_terms basis functions starting at k = 0).
std::vector<double> fit_heat_coefficients(const SpectralData& sd, const std::vector<double>& t_grid,
                                          int n_terms = 3);

/// Direct spectral action sum Phi(lambda^2 / Lambda^2) over the whole
/// spectrum (kernel contributes Phi(0) per mode). Throws when the beyond-
/// trusted-window part of the sum exceeds 1% of the total.
double spectral_action(const SpectralData& sd, const CutoffFunction& phi, double lambda);

struct ActionSeries {
    double value = 0.0;                // Phi_k Lambda^k residues + Phi(0) zeta(0)
    std::map<int, double> residues;    // k -> fitted residue of |D|^{-k}
    std::map<int, double> spreads;     // k -> window spread of that fit
    double zeta0_excl = 0.0;           // counting-fit intercept, kernel-excluded zeta(0)
    double zeta0_with_kernel = 0.0;    // + kernel_dim, the value entering the series
    std::map<int, double> terms;       // k -> Phi_k Lambda^k r_k
    double tolerance = 0.0;            // propagated |Phi_k Lambda^k| * spread_k
};

/// Asymptotic series for the spectral action, assembled from residue fits
/// for k = d..1 plus the zeta(0) estimate.
ActionSeries action_series(const SpectralData& sd, const CutoffFunction& phi, double lambda);

/// zeta(0) estimated as the constant term of a power-law fit of the
/// counting function (estimate only; kernel-excluded convention).
double zeta_zero_counting_estimate(const SpectralData& sd);

/// Selfadjoint one-form A = 1/2 (sum_i a_i [H, b_i] + adjoint), stored
/// either as a dense matrix (1D grid) or as a mode-coupled operator
/// (half-torus). Built only from multiplication operators and commutators
/// with the realization.
struct OneForm {
    std::variant<RealMatrix, disc::ModeCoupledOp> op;
    std::string description;
    double norm_bound = 0.0;

    bool is_mode_coupled() const { return std::holds_alternative<disc::ModeCoupledOp>(op); }
};

/// 1D version; every a_i, b_i must pass algebra_membership_1d, otherwise the
/// violation (order index and boundary point) is reported in the exception.
OneForm build_one_form_1d(const std::vector<std::pair<boundary::TrigPoly, boundary::TrigPoly>>& pairs,
                          const disc::DiscreteRealization& r);

/// Half-torus version for tangential smooth functions (admissible: constant
/// in the normal direction).
OneForm build_one_form_half_torus(
    const std::vector<std::pair<boundary::TrigPoly, boundary::TrigPoly>>& pairs,
    const disc::HalfTorusModel& m);

/// Control operator for tadpole experiments: multiplication by g(x) times
/// the component swap, which breaks the conjugation symmetry.
OneForm control_one_form(const disc::HalfTorusModel& m, const std::function<double(double)>& g);

/// <psi, A psi> for a stored eigenvector.
double expectation(const OneForm& a, const SpectralData& sd, const SpectralData::Entry& e);

/// ||[[H, b], a]|| evaluated on the operator representation: exact (roundoff
/// only) for the mode-coupled half-torus operators, O(h) for sampled grids.
double first_order_residual(const OneForm&, const disc::HalfTorusModel& m,
                            const boundary::TrigPoly& a, const boundary::TrigPoly& b);
double first_order_residual_1d(const disc::DiscreteRealization& r, const boundary::TrigPoly& a,
                               const boundary::TrigPoly& b);

struct TadpoleResult {
    ResidueFit fit;
    int order = 0;       // d - k
    double tad = 0.0;    // -r for order 0, -(d-k) r otherwise
};

/// Tadpole of order d-k from eigenvector weights sign(lambda) <psi, A psi>
/// with exponent sigma = (d-k)+1. Requires eigenvectors in the trusted
/// window.
TadpoleResult tadpole(const SpectralData& sd, const OneForm& a, int k_order,
                      const FitWindows& win = {});

struct PairingReport {
    int pairs_checked = 0;
    double max_eigen_residual = 0.0;    // ||H_{-k} J'psi + lambda J'psi||
    double max_weight_mismatch = 0.0;   // |<J'psi, A J'psi> - <psi, A psi>|
    double max_partial_sum = 0.0;       // cumulative tadpole sum at |lambda| group boundaries
    double spectrum_asymmetry = 0.0;    // multiset {lambda} vs {-lambda}
};

/// Exact discrete conjugation pairing on the half-torus: J' maps a mode-k
/// eigenvector to a mode-(-k) eigenvector of the opposite eigenvalue with
/// equal weight, so tadpole partial sums cancel in pairs.
PairingReport tadpole_pairing_check(const disc::HalfTorusModel& m, const SpectralData& sd,
                                    const OneForm& a);

struct ConjugationCheck {
    double op_residual = 0.0;
    double boundary_residual = 0.0;
};

/// || J' D_k + D_{-k} J' || and || S J' - J' S || for the grid lift of J'
/// (component sign times complex conjugation).
ConjugationCheck conjugation_check(const disc::HalfTorusModel& m, int k);

/// Residual of U conj(H) - sign * H U for an antilinear grid symmetry
/// v -> U conj(v).
double antilinear_residual(const RealMatrix& u, const RealMatrix& h, int sign);

struct ZetaZeroCorrection {
    double correction = 0.0;            // sum_q ((-1)^q / q) residue_q
    std::map<int, ResidueFit> fits;     // q -> fit of the q-fold product weights
};

/// Correction zeta_{D+A}(0) - zeta_D(0) via the q-fold products (A D^{-1})^q
/// in the truncated eigenbasis (q = 1..d). Requires eigenvectors.
ZetaZeroCorrection zeta_zero_estimate(const SpectralData& sd, const OneForm& a,
                                      const FitWindows& win = {});

}  // namespace bslab::spectral
