#include "bslab/acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "bslab/boundary.hpp"
#include "bslab/clifford.hpp"
#include "bslab/discretize.hpp"
#include "bslab/io.hpp"
#include "bslab/regularity.hpp"
#include "bslab/spectral.hpp"
#include "bslab/util.hpp"

namespace bslab::acceptance {

namespace {

using Clock = std::chrono::steady_clock;
using boundary::TrigPoly;
using spectral::SpectralData;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

/// Spectra shared between criteria; computed lazily so the cost lands in the
/// first criterion that needs the data.
struct Shared {
    Options opt;
    std::map<int, SpectralData> sd1d;
    std::optional<SpectralData> sd1d_basis;
    std::optional<disc::HalfTorusModel> torus;
    std::optional<SpectralData> sd_torus;

    const SpectralData& one_d(int n) {
        auto it = sd1d.find(n);
        if (it == sd1d.end()) {
            const auto r = disc::discretize_1d_example(n, disc::Backend::FiniteDifference);
            it = sd1d.emplace(n, disc::solve_spectrum(r, /*want_vectors=*/n == opt.grid_1d, 30.0))
                     .first;
        }
        return it->second;
    }
    const SpectralData& one_d_basis() {
        if (!sd1d_basis) {
            const auto r = disc::discretize_1d_example(opt.grid_1d, disc::Backend::Basis);
            sd1d_basis = disc::solve_spectrum(r, false);
        }
        return *sd1d_basis;
    }
    const disc::HalfTorusModel& torus_model() {
        if (!torus) torus = disc::discretize_half_torus(opt.torus_grid, opt.torus_modes);
        return *torus;
    }
    const SpectralData& torus_spectrum() {
        if (!sd_torus) {
            const auto& m = torus_model();
            sd_torus = disc::sweep_half_torus(m, /*want_vectors=*/true, disc::trusted_window(m));
        }
        return *sd_torus;
    }
};

struct Check {
    bool ok = true;
    std::ostringstream details;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            details << "FAILED: " << what << "; ";
        }
    }
    void note(const std::string& what) { details << what << "; "; }
};

CriterionResult criterion_1(Shared&) {
    Check c;
    double worst = 0.0;
    for (int d : {2, 4, 6}) {
        const auto g = clifford::build_gamma(d);
        const auto chi = clifford::build_chirality(g);
        const auto j = clifford::build_conjugation(g);
        const auto jp = clifford::conjugation_selector(g);
        worst = std::max(worst, clifford::relation_residual(g));
        worst = std::max(worst, clifford::chirality_residual(g, chi));
        worst = std::max(worst, clifford::conjugation_residual(g, j));
        // J' S = S J' (antilinear commutation: S U' = U' conj(S)).
        worst = std::max(worst, op_norm(Matrix(chi.s * jp.u - jp.u * chi.s.conjugate())));
    }
    c.require(worst < 1e-12, "relation residual " + fmt(worst) + " >= 1e-12");
    c.note("max residual " + fmt(worst));
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

CriterionResult criterion_2(Shared&) {
    Check c;
    for (int d : {2, 4, 6}) {
        const auto g = clifford::build_gamma(d);
        const auto chi = clifford::build_chirality(g);
        const auto a = boundary::green_matrix_dirac(g, +1);
        const int n = g.rep_size();
        const auto chiral = boundary::check_selfadjoint(a, {chi.s});
        c.require(chiral.ok, "chiral S rejected at d=" + std::to_string(d));
        const auto zero = boundary::check_selfadjoint(a, {Matrix::Zero(n, n)});
        c.require(!zero.ok, "S=0 accepted at d=" + std::to_string(d));
        const auto full = boundary::check_selfadjoint(a, {Matrix::Identity(n, n)});
        c.require(!full.ok, "S=Id accepted at d=" + std::to_string(d));
    }
    const auto op = boundary::example_1d();
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    std::vector<std::pair<boundary::GreenMatrix, boundary::TraceCondition>> comps;
    for (auto side : {boundary::Side::Left, boundary::Side::Right}) {
        const auto gm = boundary::green_matrix(op, side);
        // The sign function on the two components: -J0 at the left end,
        // +J0 at the right end.
        const double want = side == boundary::Side::Left ? -1.0 : 1.0;
        c.require((gm.a - want * op.j0).norm() < 1e-15, "1d Green matrix sign");
        comps.push_back({gm, {s}});
    }
    const auto v = boundary::check_selfadjoint(comps);
    c.require(v.ok, "1d example S=diag(1,0) rejected, r1=" + fmt(v.r1) + " r2=" + fmt(v.r2));
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

CriterionResult criterion_3(Shared& sh) {
    Check c;
    const auto& sd = sh.one_d(sh.opt.grid_1d);
    const auto& sd_half = sh.one_d(sh.opt.grid_1d / 2);
    const auto& sd_basis = sh.one_d_basis();
    const double h = kPi / (sh.opt.grid_1d + 1);

    c.require(sd.kernel_dim == 1, "kernel dimension " + std::to_string(sd.kernel_dim));
    // Kernel vector: vanishing first component, constant second component.
    {
        const auto& e = sd.order.front();
        const auto v = sd.vector(e);
        double first_norm = 0.0, second_sum = 0.0;
        int n_second = 0;
        const auto r = disc::discretize_1d_example(sh.opt.grid_1d, disc::Backend::FiniteDifference);
        for (int p = 0; p < r.size(); ++p) {
            if (r.is_first_component(p)) {
                first_norm += v(p) * v(p);
            } else {
                second_sum += v(p);
                ++n_second;
            }
        }
        first_norm = std::sqrt(first_norm);
        const double mean = second_sum / n_second;
        double dev_sq = 0.0;  // two-pass: the one-pass variance cancels catastrophically here
        for (int p = 0; p < r.size(); ++p)
            if (!r.is_first_component(p)) dev_sq += (v(p) - mean) * (v(p) - mean);
        // The eigenvector is normalized, so both checks are against 1e-8 ||psi||.
        c.require(first_norm < 1e-8, "kernel first component " + fmt(first_norm));
        c.require(std::sqrt(dev_sq) < 1e-8,
                  "kernel second component not constant (dev " + fmt(std::sqrt(dev_sq)) + ")");
    }

    auto nonzero_abs = [](const SpectralData& s) {
        std::vector<double> v;
        for (const auto& e : s.order)
            if (!s.is_kernel(e)) v.push_back(e.abs);
        return v;
    };
    const auto a512 = nonzero_abs(sd), a256 = nonzero_abs(sd_half), ab = nonzero_abs(sd_basis);
    double worst_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double n = (i / 2) + 1;
        const double err = std::abs(a512[static_cast<size_t>(i)] - n);
        const double bound = 5.0 * h * h * n * n;
        worst_ratio = std::max(worst_ratio, err / bound);
        c.require(err <= bound, "eigenvalue " + std::to_string(i) + " error " + fmt(err) +
                                    " > 5 h^2 n^2 = " + fmt(bound));
        // Backend agreement within combined Richardson estimates.
        const double est_fd = std::abs(a512[static_cast<size_t>(i)] - a256[static_cast<size_t>(i)]) / 3.0;
        const double est_basis = std::abs(ab[static_cast<size_t>(i)] - n);
        const double gap = std::abs(a512[static_cast<size_t>(i)] - ab[static_cast<size_t>(i)]);
        c.require(gap <= 2.0 * (est_fd + est_basis) + 1e-10, "backend disagreement at " +
                                                                 std::to_string(i));
    }
    c.note("max error/bound " + fmt(worst_ratio));
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

CriterionResult criterion_4(Shared& sh) {
    Check c;
    const auto& sd = sh.one_d(sh.opt.grid_1d);
    std::vector<double> ones(sd.order.size(), 1.0);
    const auto fit = spectral::residue_fit(sd, ones, 1.0, spectral::FitModel::CLog);
    c.require(std::abs(fit.r - 2.0) <= 0.1, "zeta residue " + fmt(fit.r));
    c.require(fit.spread < 0.1 * std::abs(fit.r), "window spread " + fmt(fit.spread));
    c.note("r = " + fmt(fit.r) + ", spread " + fmt(fit.spread));

    std::vector<double> tgrid;
    for (int i = 0; i < 12; ++i)
        tgrid.push_back(0.01 * std::pow(20.0, i / 11.0));  // log-spaced in [0.01, 0.2]
    const auto coef = spectral::fit_heat_coefficients(sd, tgrid, 3);
    const double a0 = coef[0];
    c.require(std::abs(a0 - std::sqrt(kPi)) <= 0.01 * std::sqrt(kPi),
              "heat a0 " + fmt(a0) + " vs sqrt(pi)");
    c.note("a0 = " + fmt(a0));
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

CriterionResult criterion_5(Shared& sh) {
    Check c;
    const auto& sd = sh.one_d(sh.opt.grid_1d);
    const auto phi = spectral::CutoffFunction::gaussian();
    const double phi1 = phi.moment(1);
    const double zeta0 = spectral::zeta_zero_counting_estimate(sd) + sd.kernel_dim;
    double prev_err = 1e30;
    for (double lambda : {5.0, 10.0, 20.0}) {
        const double direct = spectral::spectral_action(sd, phi, lambda);
        const double series = phi1 * lambda * 2.0 + phi(0.0) * zeta0;
        const double err = std::abs(direct - series) / std::abs(direct);
        c.note("L=" + fmt(lambda) + " err " + fmt(err));
        if (lambda == 20.0) c.require(err <= 0.05, "action mismatch " + fmt(err) + " at L=20");
        c.require(err <= prev_err + 1e-3, "error not improving at L=" + fmt(lambda));
        prev_err = err;
    }
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

CriterionResult criterion_6(Shared& sh) {
    Check c;
    const auto& m = sh.torus_model();
    const auto& sd = sh.torus_spectrum();

    std::vector<std::pair<TrigPoly, TrigPoly>> pairs = {
        {TrigPoly::wave(-1), TrigPoly::wave(1)},
        {TrigPoly::cos_wave(1), TrigPoly::sin_wave(1)},
    };
    const auto a = spectral::build_one_form_half_torus(pairs, m);

    const auto rep = spectral::tadpole_pairing_check(m, sd, a);
    c.require(rep.spectrum_asymmetry <= 1e-10, "spectrum asymmetry " + fmt(rep.spectrum_asymmetry));
    c.require(rep.max_weight_mismatch <= 1e-10, "pair weight mismatch " + fmt(rep.max_weight_mismatch));
    c.note("pairs " + std::to_string(rep.pairs_checked) + ", weight mismatch " +
           fmt(rep.max_weight_mismatch) + ", partial sum " + fmt(rep.max_partial_sum));

    std::vector<double> ones(sd.order.size(), 1.0);
    const auto base = spectral::residue_fit(sd, ones, 2.0, spectral::FitModel::CLog);
    const double tol = 1e-6 * std::abs(base.r);
    const auto tad = spectral::tadpole(sd, a, /*k_order=*/sd.dim);
    c.require(std::abs(tad.fit.r) <= tol,
              "tadpole " + fmt(tad.fit.r) + " above 1e-6 baseline " + fmt(base.r));
    c.note("baseline r0 " + fmt(base.r) + ", tadpole r " + fmt(tad.fit.r));

    const auto ctrl = spectral::control_one_form(m, [](double x) { return x; });
    const auto tc = spectral::tadpole(sd, ctrl, /*k_order=*/sd.dim);
    c.require(std::abs(tc.fit.r) >= 10.0 * tol, "control tadpole too small: " + fmt(tc.fit.r));
    c.note("control r " + fmt(tc.fit.r));

    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

CriterionResult criterion_7(Shared& sh) {
    Check c;
    const auto& m = sh.torus_model();
    double worst_op = 0.0, worst_bc = 0.0;
    for (int k = 0; k <= m.mode_cutoff; ++k) {
        const auto chk = spectral::conjugation_check(m, k);
        worst_op = std::max(worst_op, chk.op_residual);
        worst_bc = std::max(worst_bc, chk.boundary_residual);
    }
    c.require(worst_op < 1e-12, "J' D_k + D_{-k} J' residual " + fmt(worst_op));
    c.require(worst_bc < 1e-12, "S J' - J' S residual " + fmt(worst_bc));
    c.note("op " + fmt(worst_op) + ", bc " + fmt(worst_bc));
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

TrigPoly random_member(std::mt19937_64& rng) {
    // Members are spanned by 1, cos(2j theta), sin((2j+1) theta).
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigPoly p = TrigPoly::constant(u(rng));
    p = p + TrigPoly::cos_wave(2) * TrigPoly::constant(u(rng));
    p = p + TrigPoly::cos_wave(4) * TrigPoly::constant(u(rng));
    p = p + TrigPoly::sin_wave(1) * TrigPoly::constant(u(rng));
    p = p + TrigPoly::sin_wave(3) * TrigPoly::constant(u(rng));
    p = p + TrigPoly::sin_wave(5) * TrigPoly::constant(u(rng));
    return p;
}

CriterionResult criterion_8(Shared&) {
    Check c;
    c.require(boundary::algebra_membership_1d(TrigPoly::sin_wave(1)).member, "sin not a member");
    const auto cosr = boundary::algebra_membership_1d(TrigPoly::cos_wave(1));
    c.require(!cosr.member, "cos accepted");
    if (cosr.first_violation) {
        c.require(cosr.first_violation->first == 0, "cos violation order not k=0");
    }
    c.require(boundary::algebra_membership_1d(TrigPoly::constant(2.5)).member, "constant rejected");

    std::mt19937_64 rng(20240817);
    for (int i = 0; i < 20; ++i) {
        const TrigPoly p = random_member(rng), q = random_member(rng);
        c.require(boundary::algebra_membership_1d(p).member, "random member rejected");
        c.require(boundary::algebra_membership_1d(p * q).member,
                  "product of members rejected (trial " + std::to_string(i) + ")");
    }
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

CriterionResult criterion_9(Shared&) {
    Check c;
    const std::vector<int> levels = {64, 128, 256, 512};
    const auto rs = regularity::regularity_trend("sin", [](double t) { return std::sin(t); },
                                                 levels, 1);
    const auto rc = regularity::regularity_trend("cos", [](double t) { return std::cos(t); },
                                                 levels, 1);
    c.require(rs.growth_exponent[1] < 0.1, "sin exponent " + fmt(rs.growth_exponent[1]));
    c.require(rc.growth_exponent[1] > 0.4, "cos exponent " + fmt(rc.growth_exponent[1]));
    c.note("sin k=1 exponent " + fmt(rs.growth_exponent[1]) + ", cos " +
           fmt(rc.growth_exponent[1]));

    // Exact finite-dimensional product identity:
    // delta1(ab) = delta1(a) B b B^{-1} + a delta1(b), B = (1+H^2)^{1/2}.
    const auto r = disc::discretize_1d_example(128, disc::Backend::FiniteDifference);
    const RealMatrix h = r.dense();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    RealVector lam = es.eigenvalues();
    RealVector shalf(lam.size()), sinv(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        shalf(i) = std::sqrt(1.0 + lam(i) * lam(i));
        sinv(i) = 1.0 / shalf(i);
    }
    const RealMatrix b_half = es.eigenvectors() * shalf.asDiagonal() * es.eigenvectors().transpose();
    const RealMatrix b_inv = es.eigenvectors() * sinv.asDiagonal() * es.eigenvectors().transpose();
    const RealMatrix h2 = h * h;
    const auto delta1 = [&](const RealMatrix& t) { return RealMatrix((h2 * t - t * h2) * b_inv); };
    const RealMatrix da = RealMatrix(
        disc::multiplication_diagonal(r, [](double t) { return std::sin(t); }).asDiagonal());
    const RealMatrix db = RealMatrix(
        disc::multiplication_diagonal(r, [](double t) { return std::cos(t) + 2.0; }).asDiagonal());
    const RealMatrix lhs = delta1(RealMatrix(da * db));
    const RealMatrix rhs = delta1(da) * b_half * db * b_inv + da * delta1(db);
    const double rel = (lhs - rhs).norm() / std::max(1.0, lhs.norm());
    c.require(rel <= 1e-10, "delta1 product identity residual " + fmt(rel));
    c.note("identity residual " + fmt(rel));
    CriterionResult out;
    out.pass = c.ok;
    out.details = c.details.str();
    return out;
}

CriterionResult criterion_10(Shared& sh) {
    Check c;
    const auto& sd = sh.torus_spectrum();
    std::vector<double> abs;
    for (const auto& e : sd.order)
        if (!sd.is_kernel(e)) abs.push_back(e.abs);
    const double lo = sd.trusted / 4.0, hi = sd.trusted;
    std::vector<double> xs, ys;
    double prev = -1.0;
    size_t count = 0;
    for (const double a : abs) {
        ++count;
        if (prev >= 0.0 && a - prev > 1e-9 * (1.0 + a)) {
            const double mid = 0.5 * (a + prev);
            if (mid >= lo && mid <= hi) {
                xs.push_back(std::log(mid));
                ys.push_back(std::log(static_cast<double>(count - 1)));
            }
        }
        prev = a;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.require(std::abs(slope - 2.0) <= 0.2, "counting slope " + fmt(slope));
    c.note("slope " + fmt(slope) + " over [" + fmt(lo) + ", " + fmt(hi) + "]");
    CriterionResult r;
    r.pass = c.ok;
    r.details = c.details.str();
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& opt) {
    struct Item {
        int id;
        const char* name;
        double budget;
        bool needs_1d;
        bool needs_torus;
        CriterionResult (*fn)(Shared&);
    };
    const Item items[] = {
        {1, "clifford relations", 1.0, false, false, criterion_1},
        {2, "selfadjointness criterion", 1.0, false, false, criterion_2},
        {3, "1d spectrum oracle", 10.0, true, false, criterion_3},
        {4, "zeta residue and heat coefficient", 10.0, true, false, criterion_4},
        {5, "spectral action consistency", 10.0, true, false, criterion_5},
        {6, "no-tadpole", 300.0, false, true, criterion_6},
        {7, "conjugation symmetry", 30.0, false, true, criterion_7},
        {8, "algebra membership", 1.0, true, false, criterion_8},
        {9, "regularity probe", 120.0, true, false, criterion_9},
        {10, "weyl dimension check", 60.0, false, true, criterion_10},
    };
    Shared sh;
    sh.opt = opt;
    std::vector<CriterionResult> out;
    for (const auto& item : items) {
        if (opt.model_filter == "example1d" && item.needs_torus) continue;
        if (opt.model_filter == "halftorus" && item.needs_1d) continue;
        const auto t0 = Clock::now();
        CriterionResult r;
        try {
            r = item.fn(sh);
        } catch (const std::exception& ex) {
            r.pass = false;
            r.details = std::string("exception: ") + ex.what();
        }
        r.id = item.id;
        r.name = item.name;
        r.seconds = seconds_since(t0);
        r.budget = item.budget;
        r.time_ok = r.seconds < item.budget;
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream ss;
    ss << (r.ok() ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " (";
    ss.precision(3);
    ss << r.seconds << "s of " << r.budget << "s)";
    if (!r.details.empty()) ss << ": " << r.details;
    if (!r.time_ok) ss << " [over budget]";
    return ss.str();
}

}  // namespace bslab::acceptance
