#include "bslab/spectral.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bslab/util.hpp"

namespace bslab::spectral {

namespace {

/// Gauss-Legendre nodes/weights on [0, 1] (Newton iteration on P_n).
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 + t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

double gl_integrate(const std::function<double(double)>& f) {
    // Magic-static init keeps concurrent first calls safe.
    static const auto nodes = [] {
        std::pair<std::vector<double>, std::vector<double>> nw;
        gauss_legendre_01(64, nw.first, nw.second);
        return nw;
    }();
    double s = 0.0;
    for (size_t i = 0; i < nodes.first.size(); ++i) s += nodes.second[i] * f(nodes.first[i]);
    return s;
}

}  // namespace

double CutoffFunction::moment(int k) const {
    if (k < 1) throw std::invalid_argument("CutoffFunction::moment: k must be >= 1");
    // [0,1] piece with t = s^2 to absorb the t^{k/2-1} endpoint singularity.
    const double head = gl_integrate([&](double s) {
        double pw = 1.0;
        for (int p = 0; p < k - 1; ++p) pw *= s;
        return 2.0 * phi(s * s) * pw;
    });
    double tail = 0.0;
    if (!compact_support) {
        // [1, inf) with t = 1/u; the profile must vanish fast at infinity.
        tail = gl_integrate([&](double u) {
            if (u < 1e-12) return 0.0;
            const double val = phi(1.0 / u);
            if (val == 0.0) return 0.0;
            return val * std::pow(u, -k / 2.0 - 1.0);
        });
    }
    const double q = 0.5 * (head + tail);
    if (name == "gaussian" || name == "bump") {
        const double ref = moment_closed_form(k);
        if (std::abs(q - ref) > 1e-8 * std::abs(ref))
            throw std::logic_error("CutoffFunction::moment: quadrature disagrees with the "
                                   "closed form for " + name);
    }
    return q;
}

double CutoffFunction::moment_closed_form(int k) const {
    if (name == "gaussian") return 0.5 * std::tgamma(k / 2.0);
    if (name == "bump") return std::tgamma(k / 2.0) / std::tgamma(k / 2.0 + 3.0);
    throw std::logic_error("CutoffFunction: no closed form for " + name);
}

CutoffFunction CutoffFunction::gaussian() {
    CutoffFunction c;
    c.name = "gaussian";
    c.phi = [](double t) { return std::exp(-t); };
    return c;
}

CutoffFunction CutoffFunction::bump() {
    CutoffFunction c;
    c.name = "bump";
    c.phi = [](double t) { return t >= 1.0 ? 0.0 : (1.0 - t) * (1.0 - t); };
    c.compact_support = true;
    return c;
}

CutoffFunction CutoffFunction::by_name(const std::string& name) {
    if (name == "gaussian") return gaussian();
    if (name == "bump") return bump();
    throw std::invalid_argument("unknown cutoff function: " + name);
}

double zeta_partial(const SpectralData& sd, double s, double cutoff) {
    if (cutoff > sd.trusted * (1.0 + 1e-12)) {
        throw std::invalid_argument("zeta_partial: cutoff beyond the trusted window");
    }
    double sum = 0.0;
    for (const auto& e : sd.order) {
        if (e.abs > cutoff) break;
        if (sd.is_kernel(e)) continue;
        sum += std::pow(e.abs, -s);
    }
    return sum;
}

int counting_function(const SpectralData& sd, double cutoff) {
    int n = 0;
    for (const auto& e : sd.order) {
        if (e.abs > cutoff) break;
        if (!sd.is_kernel(e)) ++n;
    }
    return n;
}

FitModel default_fit_model(int dim, double sigma) {
    return (dim - sigma >= 1.0 - 1e-9) ? FitModel::LinLogConst : FitModel::CLog;
}

namespace {

struct CumulativeSums {
    std::vector<double> abs;   // nonkernel |lambda| ascending
    std::vector<double> cum;   // prefix sums of w |lambda|^{-sigma}

    double at(double lam) const {
        const auto it = std::upper_bound(abs.begin(), abs.end(), lam);
        const auto idx = static_cast<size_t>(it - abs.begin());
        return idx == 0 ? 0.0 : cum[idx - 1];
    }
};

CumulativeSums cumulative(const SpectralData& sd, const std::vector<double>& weights,
                          double sigma) {
    if (weights.size() != sd.order.size())
        throw std::invalid_argument("residue_fit: weights must align with the spectrum order");
    CumulativeSums c;
    c.abs.reserve(sd.order.size());
    c.cum.reserve(sd.order.size());
    double run = 0.0;
    for (size_t i = 0; i < sd.order.size(); ++i) {
        const auto& e = sd.order[i];
        if (sd.is_kernel(e)) continue;
        run += weights[i] * std::pow(e.abs, -sigma);
        c.abs.push_back(e.abs);
        c.cum.push_back(run);
    }
    return c;
}

/// Midpoints between consecutive distinct |lambda| inside [lo, hi]; the
/// cumulative step function is flat at these points, which averages away the
/// sawtooth against the smooth fit model.
std::vector<double> sample_points(const CumulativeSums& c, double lo, double hi) {
    std::vector<double> mids;
    double prev = -1.0;
    for (size_t i = 0; i < c.abs.size(); ++i) {
        const double a = c.abs[i];
        if (prev >= 0.0 && a - prev > 1e-9 * (1.0 + a)) {
            const double mid = 0.5 * (a + prev);
            if (mid >= lo && mid <= hi) mids.push_back(mid);
        }
        prev = a;
    }
    return mids;
}

double fit_log_slope(const CumulativeSums& c, const std::vector<double>& mids, FitModel model) {
    const int params = model == FitModel::CLog ? 2 : 3;
    if (static_cast<int>(mids.size()) < params + 1) {
        throw std::runtime_error("residue_fit: degenerate fit (too few distinct samples in window)");
    }
    RealMatrix design(mids.size(), params);
    RealVector rhs(mids.size());
    for (size_t i = 0; i < mids.size(); ++i) {
        const double lam = mids[i];
        if (model == FitModel::CLog) {
            design(static_cast<Eigen::Index>(i), 0) = 1.0;
            design(static_cast<Eigen::Index>(i), 1) = std::log(lam);
        } else {
            design(static_cast<Eigen::Index>(i), 0) = lam;
            design(static_cast<Eigen::Index>(i), 1) = std::log(lam);
            design(static_cast<Eigen::Index>(i), 2) = 1.0;
        }
        rhs(static_cast<Eigen::Index>(i)) = c.at(lam);
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(design);
    if (qr.rank() < params) throw std::runtime_error("residue_fit: degenerate fit (collinear design)");
    const RealVector coef = qr.solve(rhs);
    return coef(1);  // the log coefficient sits at index 1 in both models
}

void resolve_windows(const SpectralData& sd, const FitWindows& win, double& lo, double& hi,
                     int& count) {
    lo = win.lo;
    hi = win.hi;
    count = std::max(win.count, 3);
    if (lo <= 0.0 || hi <= 0.0) {
        lo = sd.trusted / 8.0;
        hi = sd.trusted / 2.0;
    }
    if (hi > sd.trusted * (1.0 + 1e-12))
        throw std::invalid_argument("residue_fit: window beyond the trusted region");
    if (!(lo < hi)) throw std::invalid_argument("residue_fit: empty window");
}

}  // namespace

ResidueFit residue_fit(const SpectralData& sd, const std::vector<double>& weights, double sigma,
                       FitModel model, const FitWindows& win) {
    double lo, hi;
    int count;
    resolve_windows(sd, win, lo, hi, count);
    const CumulativeSums c = cumulative(sd, weights, sigma);

    ResidueFit out;
    out.model = model;
    const double ratio = hi / lo;
    for (int i = 0; i < count; ++i) {
        const double wlo = lo * std::pow(ratio, static_cast<double>(i) / count);
        const double whi = lo * std::pow(ratio, static_cast<double>(i + 1) / count);
        const auto mids = sample_points(c, wlo, whi);
        out.window_r.push_back(fit_log_slope(c, mids, model));
        out.windows.emplace_back(wlo, whi);
    }
    const auto pooled = sample_points(c, lo, hi);
    out.r = fit_log_slope(c, pooled, model);
    out.sample_count = static_cast<int>(pooled.size());
    const auto [mn, mx] = std::minmax_element(out.window_r.begin(), out.window_r.end());
    out.spread = *mx - *mn;

    // Magnitude of the summed terms over the fit range, used as the absolute
    // floor when deciding whether a near-zero slope is stable.
    double scale = 0.0;
    for (size_t i = 0; i < sd.order.size(); ++i) {
        const auto& e = sd.order[i];
        if (sd.is_kernel(e) || e.abs > hi) continue;
        scale += std::abs(weights[i]) * std::pow(e.abs, -sigma);
    }
    out.weight_scale = scale;
    out.trusted = out.spread <= std::max(0.2 * std::abs(out.r), 1e-8 * std::max(scale, 1.0));
    return out;
}

double heat_trace(const SpectralData& sd, double t) {
    if (!(t > 0)) throw std::invalid_argument("heat_trace: t must be positive");
    double sum = 0.0, tail = 0.0;
    for (const auto& e : sd.order) {
        if (sd.is_kernel(e)) continue;
        const double term = std::exp(-t * e.abs * e.abs);
        sum += term;
        if (e.abs > sd.trusted) tail += term;
    }
    const double total = sum + sd.kernel_dim;
    if (tail > 1e-10 * std::max(1.0, total)) {
        throw std::invalid_argument("heat_trace: t outside the trusted window "
                                    "(unresolved modes would contribute)");
    }
    return total;
}

std::vector<double> fit_heat_coefficients(const SpectralData& sd, const std::vector<double>& t_grid,
                                          int n_terms) {
    if (static_cast<int>(t_grid.size()) < n_terms + 1)
        throw std::invalid_argument("fit_heat_coefficients: need more t samples than terms");
    RealMatrix design(t_grid.size(), n_terms);
    RealVector rhs(t_grid.size());
    for (size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        rhs(static_cast<Eigen::Index>(i)) = heat_trace(sd, t);
        for (int k = 0; k < n_terms; ++k)
            design(static_cast<Eigen::Index>(i), k) = std::pow(t, 0.5 * (k - sd.dim));
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(design);
    const RealVector coef = qr.solve(rhs);
    return {coef.data(), coef.data() + coef.size()};
}

double spectral_action(const SpectralData& sd, const CutoffFunction& phi, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("spectral_action: cutoff must be positive");
    double sum = sd.kernel_dim * phi(0.0), beyond = 0.0;
    for (const auto& e : sd.order) {
        if (sd.is_kernel(e)) continue;
        const double x = e.abs / lambda;
        const double term = phi(x * x);
        sum += term;
        if (e.abs > sd.trusted) beyond += term;
    }
    if (beyond > 0.01 * std::max(sum, 1e-300)) {
        throw std::invalid_argument("spectral_action: cutoff out of range, the unresolved part of "
                                    "the spectrum is not negligible");
    }
    return sum;
}

double zeta_zero_counting_estimate(const SpectralData& sd) {
    const double lo = sd.trusted / 8.0, hi = sd.trusted / 2.0;
    std::vector<double> weights(sd.order.size(), 1.0);
    const CumulativeSums c = cumulative(sd, weights, 0.0);  // counting function
    const auto mids = sample_points(c, lo, hi);
    const int params = sd.dim + 1;
    if (static_cast<int>(mids.size()) < params + 1)
        throw std::runtime_error("zeta_zero_counting_estimate: too few samples");
    RealMatrix design(mids.size(), params);
    RealVector rhs(mids.size());
    for (size_t i = 0; i < mids.size(); ++i) {
        for (int k = sd.dim; k >= 1; --k)
            design(static_cast<Eigen::Index>(i), sd.dim - k) = std::pow(mids[i], k);
        design(static_cast<Eigen::Index>(i), sd.dim) = 1.0;
        rhs(static_cast<Eigen::Index>(i)) = c.at(mids[i]);
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(design);
    const RealVector coef = qr.solve(rhs);
    return coef(sd.dim);  // the constant term
}

ActionSeries action_series(const SpectralData& sd, const CutoffFunction& phi, double lambda) {
    ActionSeries out;
    std::vector<double> ones(sd.order.size(), 1.0);
    for (int k = sd.dim; k >= 1; --k) {
        const ResidueFit fit = residue_fit(sd, ones, static_cast<double>(k),
                                           default_fit_model(sd.dim, static_cast<double>(k)));
        out.residues[k] = fit.r;
        out.spreads[k] = fit.spread;
        out.terms[k] = phi.moment(k) * std::pow(lambda, k) * fit.r;
        out.value += out.terms[k];
        out.tolerance += std::abs(phi.moment(k) * std::pow(lambda, k)) * fit.spread;
    }
    out.zeta0_excl = zeta_zero_counting_estimate(sd);
    // The kernel convention |D|^{-s} := (|D| + P_0)^{-s} adds one unit per
    // kernel mode to the zeta function entering the series.
    out.zeta0_with_kernel = out.zeta0_excl + sd.kernel_dim;
    out.value += phi(0.0) * out.zeta0_with_kernel;
    return out;
}

OneForm build_one_form_1d(
    const std::vector<std::pair<boundary::TrigPoly, boundary::TrigPoly>>& pairs,
    const disc::DiscreteRealization& r) {
    for (const auto& [a, b] : pairs) {
        for (const boundary::TrigPoly* f : {&a, &b}) {
            if (!f->is_real())
                throw std::invalid_argument("build_one_form_1d: grid sampling supports real "
                                            "factors only");
            const auto res = boundary::algebra_membership_1d(*f);
            if (!res.member) {
                const auto [k, th] = *res.first_violation;
                throw std::invalid_argument(
                    "build_one_form_1d: factor outside the admissible algebra, odd derivative of "
                    "order " + std::to_string(2 * k + 1) + " nonzero at theta = " +
                    std::to_string(th));
            }
        }
    }
    const RealMatrix h = r.dense();
    const int m = r.size();
    RealMatrix x = RealMatrix::Zero(m, m);
    for (const auto& [a, b] : pairs) {
        const RealVector da = multiplication_diagonal(r, [&](double th) { return a.eval(th).real(); });
        const RealVector db = multiplication_diagonal(r, [&](double th) { return b.eval(th).real(); });
        const RealMatrix comm = h * db.asDiagonal() - db.asDiagonal() * h;
        x += da.asDiagonal() * comm;
    }
    OneForm out;
    RealMatrix sym = 0.5 * (x + x.transpose());
    out.norm_bound = sym.cwiseAbs().rowwise().sum().maxCoeff();
    out.op = std::move(sym);
    out.description = "one-form (1d grid)";
    return out;
}

OneForm build_one_form_half_torus(
    const std::vector<std::pair<boundary::TrigPoly, boundary::TrigPoly>>& pairs,
    const disc::HalfTorusModel& m) {
    disc::ModeCoupledOp x;
    x.mode_cutoff = m.mode_cutoff;
    x.block_rows = m.block_rows();
    for (const auto& [a, b] : pairs) {
        const auto prod = multiplication_tangential(m, a).compose(tangential_commutator(m, b));
        x = x + prod;
    }
    disc::ModeCoupledOp sym = (x + x.adjoint()) * Complex(0.5, 0.0);
    OneForm out;
    out.norm_bound = sym.norm_bound();
    out.op = std::move(sym);
    out.description = "one-form (half-torus, tangential)";
    return out;
}

OneForm control_one_form(const disc::HalfTorusModel& m, const std::function<double(double)>& g) {
    disc::ModeCoupledOp c = disc::control_multiplication(m, g);
    OneForm out;
    out.norm_bound = c.norm_bound();
    out.op = std::move(c);
    out.description = "control (component-swap multiplication)";
    return out;
}

double expectation(const OneForm& a, const SpectralData& sd, const SpectralData::Entry& e) {
    const auto psi = sd.vector(e);
    if (const auto* dense = std::get_if<RealMatrix>(&a.op)) {
        return psi.dot(*dense * psi);
    }
    const auto& mc = std::get<disc::ModeCoupledOp>(a.op);
    const Matrix* b0 = mc.block(0);
    if (b0 == nullptr) return 0.0;
    const Vector psic = psi.cast<Complex>();
    return (psic.adjoint() * (*b0) * psic)(0, 0).real();
}

double first_order_residual(const OneForm&, const disc::HalfTorusModel& m,
                            const boundary::TrigPoly& a, const boundary::TrigPoly& b) {
    const auto db = tangential_commutator(m, b);
    const auto ma = multiplication_tangential(m, a);
    const auto comm = db.compose(ma) - ma.compose(db);
    double res = 0.0;
    for (const auto& [p, blk] : comm.blocks) res += op_norm(blk);
    return res;
}

double first_order_residual_1d(const disc::DiscreteRealization& r, const boundary::TrigPoly& a,
                               const boundary::TrigPoly& b) {
    const RealMatrix h = r.dense();
    const RealVector da = multiplication_diagonal(r, [&](double th) { return a.eval(th).real(); });
    const RealVector db = multiplication_diagonal(r, [&](double th) { return b.eval(th).real(); });
    const RealMatrix comm = h * db.asDiagonal() - db.asDiagonal() * h;
    return op_norm(RealMatrix(comm * da.asDiagonal() - da.asDiagonal() * comm));
}

TadpoleResult tadpole(const SpectralData& sd, const OneForm& a, int k_order,
                      const FitWindows& win) {
    const int order = sd.dim - k_order;
    if (order < 0) throw std::invalid_argument("tadpole: order index beyond dimension");
    const double sigma = order + 1.0;

    double lo, hi;
    int count;
    resolve_windows(sd, win, lo, hi, count);

    std::vector<double> weights(sd.order.size(), 0.0);
    for (size_t i = 0; i < sd.order.size(); ++i) {
        const auto& e = sd.order[i];
        if (sd.is_kernel(e) || e.abs > hi) continue;
        if (!sd.has_vector(e))
            throw std::runtime_error("tadpole: eigenvectors missing inside the fit window");
        weights[i] = expectation(a, sd, e) * (e.value >= 0 ? 1.0 : -1.0);
    }
    const FitModel model = (sd.dim - order - 1 >= 1) ? FitModel::LinLogConst : FitModel::CLog;
    TadpoleResult out;
    FitWindows w2 = win;
    w2.lo = lo;
    w2.hi = hi;
    out.fit = residue_fit(sd, weights, sigma, model, w2);
    out.order = order;
    out.tad = order == 0 ? -out.fit.r : -static_cast<double>(order) * out.fit.r;
    return out;
}

namespace {

RealVector apply_tridiagonal(const disc::DiscreteRealization& r, Eigen::Ref<const RealVector> v) {
    const int m = r.size();
    RealVector out(m);
    for (int p = 0; p < m; ++p) {
        double s = r.tri_diag(p) * v(p);
        if (p > 0) s += r.tri_sub(p - 1) * v(p - 1);
        if (p + 1 < m) s += r.tri_sub(p) * v(p + 1);
        out(p) = s;
    }
    return out;
}

double one_form_expect_vec(const OneForm& a, Eigen::Ref<const RealVector> psi) {
    if (const auto* dense = std::get_if<RealMatrix>(&a.op)) return psi.dot(*dense * psi);
    const auto& mc = std::get<disc::ModeCoupledOp>(a.op);
    const Matrix* b0 = mc.block(0);
    if (b0 == nullptr) return 0.0;
    const Vector psic = psi.cast<Complex>();
    return (psic.adjoint() * (*b0) * psic)(0, 0).real();
}

}  // namespace

PairingReport tadpole_pairing_check(const disc::HalfTorusModel& m, const SpectralData& sd,
                                    const OneForm& a) {
    PairingReport rep;
    const RealVector sign = m.modes.front().component_sign();

    // Global spectral symmetry of the sorted multiset.
    {
        std::vector<double> vals;
        vals.reserve(sd.order.size());
        for (const auto& e : sd.order) vals.push_back(e.value);
        std::sort(vals.begin(), vals.end());
        const size_t n = vals.size();
        for (size_t i = 0; i < n / 2; ++i)
            rep.spectrum_asymmetry = std::max(rep.spectrum_asymmetry,
                                              std::abs(vals[i] + vals[n - 1 - i]));
    }

    // Pair each trusted eigenvector with its conjugation image in mode -k.
    for (const auto& e : sd.order) {
        if (sd.is_kernel(e) || e.abs > sd.trusted || !sd.has_vector(e)) continue;
        if (e.value < 0) continue;  // one member per pair
        const int k = sd.blocks[e.block].mode;
        const auto psi = sd.vector(e);
        const RealVector phi = sign.cwiseProduct(psi);
        const auto& partner_block = m.mode(-k);
        const RealVector resid = apply_tridiagonal(partner_block, phi) + e.value * phi;
        rep.max_eigen_residual = std::max(rep.max_eigen_residual, resid.norm());
        const double w_psi = one_form_expect_vec(a, psi);
        const double w_phi = one_form_expect_vec(a, phi);
        rep.max_weight_mismatch = std::max(rep.max_weight_mismatch, std::abs(w_phi - w_psi));
        ++rep.pairs_checked;
    }

    // Cumulative tadpole sums at |lambda| group boundaries: with exact
    // pairing these stay at accumulated roundoff for every cutoff.
    double run = 0.0, prev = -1.0;
    for (const auto& e : sd.order) {
        if (sd.is_kernel(e) || e.abs > sd.trusted || !sd.has_vector(e)) continue;
        if (prev >= 0.0 && e.abs - prev > 1e-9 * (1.0 + e.abs))
            rep.max_partial_sum = std::max(rep.max_partial_sum, std::abs(run));
        run += one_form_expect_vec(a, sd.vector(e)) * (e.value >= 0 ? 1.0 : -1.0) / e.abs;
        prev = e.abs;
    }
    rep.max_partial_sum = std::max(rep.max_partial_sum, std::abs(run));
    return rep;
}

ConjugationCheck conjugation_check(const disc::HalfTorusModel& m, int k) {
    ConjugationCheck out;
    const RealMatrix dk = m.mode(k).dense();
    const RealMatrix dmk = m.mode(-k).dense();
    const RealVector sign = m.modes.front().component_sign();
    // J' lifts to (component sign) x conjugation; matrices are real, so the
    // anticommutation residual is || S3 D_k + D_{-k} S3 ||.
    const RealMatrix resid = sign.asDiagonal() * dk + dmk * sign.asDiagonal();
    out.op_residual = resid.norm();

    const auto jp = clifford::conjugation_selector(m.gamma);
    for (const auto* cd : {&m.chiral_left, &m.chiral_right}) {
        const Matrix br = cd->s * jp.u - jp.u * cd->s.conjugate();
        out.boundary_residual = std::max(out.boundary_residual, br.norm());
    }
    return out;
}

double antilinear_residual(const RealMatrix& u, const RealMatrix& h, int sign) {
    return (u * h - static_cast<double>(sign) * h * u).norm();
}

ZetaZeroCorrection zeta_zero_estimate(const SpectralData& sd, const OneForm& a,
                                      const FitWindows& win) {
    // Entries of the truncated eigenbasis: trusted, nonkernel, with vectors.
    std::vector<size_t> sel;
    for (size_t i = 0; i < sd.order.size(); ++i) {
        const auto& e = sd.order[i];
        if (sd.is_kernel(e) || e.abs > sd.trusted) continue;
        if (!sd.has_vector(e)) throw std::runtime_error("zeta_zero_estimate: eigenvectors required");
        sel.push_back(i);
    }
    const int n = static_cast<int>(sel.size());

    Matrix a_eig = Matrix::Zero(n, n);
    const auto* dense = std::get_if<RealMatrix>(&a.op);
    const auto* mc = std::get_if<disc::ModeCoupledOp>(&a.op);
    for (int i = 0; i < n; ++i) {
        const auto& ei = sd.order[sel[static_cast<size_t>(i)]];
        const auto psi_i = sd.vector(ei);
        for (int j = 0; j < n; ++j) {
            const auto& ej = sd.order[sel[static_cast<size_t>(j)]];
            const auto psi_j = sd.vector(ej);
            if (dense) {
                a_eig(i, j) = psi_i.dot((*dense) * psi_j);
            } else {
                const int shift = sd.blocks[ei.block].mode - sd.blocks[ej.block].mode;
                const Matrix* blk = mc->block(shift);
                if (blk == nullptr) continue;
                a_eig(i, j) = (psi_i.cast<Complex>().adjoint() * (*blk) * psi_j.cast<Complex>())(0, 0);
            }
        }
    }
    Vector inv_lam(n);
    for (int j = 0; j < n; ++j) inv_lam(j) = 1.0 / sd.order[sel[static_cast<size_t>(j)]].value;
    Matrix m1 = a_eig * inv_lam.asDiagonal();

    ZetaZeroCorrection out;
    Matrix mq = Matrix::Identity(n, n);
    for (int q = 1; q <= sd.dim; ++q) {
        mq = mq * m1;
        std::vector<double> weights(sd.order.size(), 0.0);
        for (int i = 0; i < n; ++i) weights[sel[static_cast<size_t>(i)]] = mq(i, i).real();
        const ResidueFit fit =
            residue_fit(sd, weights, 0.0, default_fit_model(sd.dim, static_cast<double>(q)), win);
        out.fits[q] = fit;
        out.correction += ((q % 2 == 1) ? -1.0 : 1.0) / q * fit.r;
    }
    return out;
}

}  // namespace bslab::spectral
