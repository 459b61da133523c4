// bslab: spectra of first-order operators on an interval and a half-torus
// with local chiral-type boundary conditions, plus the zeta/heat/action
// post-processing and symmetry experiments on top of them.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "bslab/acceptance.hpp"
#include "bslab/boundary.hpp"
#include "bslab/clifford.hpp"
#include "bslab/discretize.hpp"
#include "bslab/io.hpp"
#include "bslab/regularity.hpp"
#include "bslab/spectral.hpp"
#include "bslab/util.hpp"

namespace {

using bslab::Complex;
using bslab::Matrix;
using bslab::io::json;
using bslab::io::RunConfig;
namespace boundary = bslab::boundary;
namespace clifford = bslab::clifford;
namespace disc = bslab::disc;
namespace spectral = bslab::spectral;

int g_exit_code = 0;

void emit(const std::string& command, const RunConfig& cfg, json results) {
    const json doc = bslab::io::result_document(command, cfg, std::move(results));
    if (cfg.out.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        bslab::io::write_text(cfg.out, doc.dump(2) + "\n");
    }
}

void apply_threads(const RunConfig& cfg) {
    if (cfg.threads > 0) setenv("BSLAB_THREADS", std::to_string(cfg.threads).c_str(), 1);
}

/// Function specs for multiplication operators: "sin", "cos", "sin:3",
/// "exp:+1" (e^{i phi}), "exp:-2", "one", "const:0.5".
boundary::TrigPoly parse_fn(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "one") return boundary::TrigPoly::constant(1.0);
    if (head == "const") return boundary::TrigPoly::constant(arg.empty() ? 1.0 : std::stod(arg));
    const int n = arg.empty() ? 1 : std::stoi(arg);
    if (head == "sin") return boundary::TrigPoly::sin_wave(n);
    if (head == "cos") return boundary::TrigPoly::cos_wave(n);
    if (head == "exp") return boundary::TrigPoly::wave(n);
    throw CLI::ValidationError("--a/--b", "unknown function spec: " + spec);
}

json int_keyed(const std::map<int, double>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = v;
    return j;
}

json fit_to_json(const spectral::ResidueFit& fit) {
    json j;
    j["r"] = fit.r;
    j["spread"] = fit.spread;
    j["windows"] = json::array();
    for (size_t i = 0; i < fit.windows.size(); ++i) {
        j["windows"].push_back({{"lo", fit.windows[i].first},
                                {"hi", fit.windows[i].second},
                                {"r", fit.window_r[i]}});
    }
    j["trusted"] = fit.trusted;
    j["samples"] = fit.sample_count;
    return j;
}

void escalate_untrusted(const RunConfig& cfg, const spectral::ResidueFit& fit) {
    if (!fit.trusted) {
        std::cerr << "warning: fit flagged untrusted (spread " << fit.spread << ")\n";
        if (cfg.strict) g_exit_code = 3;
    }
}

struct SpectrumInput {
    bslab::spectral::SpectralData sd;
    std::map<std::string, std::string> metadata;
};

SpectrumInput load_spectrum(const std::string& path, const std::string& vectors_path) {
    auto file = bslab::io::read_spectrum_csv(path);
    SpectrumInput in;
    in.sd = std::move(file.sd);
    in.metadata = std::move(file.metadata);
    if (!vectors_path.empty()) bslab::io::read_vector_archive(vectors_path, in.sd);
    return in;
}

disc::HalfTorusModel model_from_metadata(const std::map<std::string, std::string>& meta) {
    const int n = std::stoi(meta.at("N"));
    const int k = std::stoi(meta.at("K"));
    const double length = std::stod(meta.at("L"));
    return disc::discretize_half_torus(n, k, length);
}

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--out", cfg.out, "write the JSON result document here (default: stdout)");
    cmd->add_option("--seed", cfg.seed, "seed for randomized checks");
    cmd->add_flag("--strict", cfg.strict, "treat untrusted fits as failures (exit 3)");
    cmd->add_option("--threads", cfg.threads, "worker threads (default: BSLAB_THREADS or hardware)");
    cmd->add_option("--config", config_path, "JSON config (or result document) to resolve defaults");
    cmd->add_option("--tol", cfg.tol, "criterion residual tolerance");
    cmd->add_option("--window-lo", cfg.window_lo, "fit window lower edge (0: trusted/8)");
    cmd->add_option("--window-hi", cfg.window_hi, "fit window upper edge (0: trusted/2)");
    cmd->add_option("--windows", cfg.windows, "number of fit subwindows");
}

bool flag_given(const CLI::App* cmd, const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

void merge_config_file(const CLI::App* cmd, RunConfig& cfg, const std::string& config_path) {
    if (config_path.empty()) return;
    const RunConfig loaded = RunConfig::from_json(json::parse(bslab::io::read_text(config_path)));
    // Explicit command-line flags win over the config file.
    RunConfig merged = loaded;
    if (flag_given(cmd, "--out")) merged.out = cfg.out;
    if (flag_given(cmd, "--seed")) merged.seed = cfg.seed;
    if (flag_given(cmd, "--strict")) merged.strict = cfg.strict;
    if (flag_given(cmd, "--threads")) merged.threads = cfg.threads;
    if (flag_given(cmd, "--tol")) merged.tol = cfg.tol;
    if (flag_given(cmd, "--window-lo")) merged.window_lo = cfg.window_lo;
    if (flag_given(cmd, "--window-hi")) merged.window_hi = cfg.window_hi;
    if (flag_given(cmd, "--windows")) merged.windows = cfg.windows;
    if (flag_given(cmd, "--model")) merged.model = cfg.model;
    if (flag_given(cmd, "--grid")) merged.grid = cfg.grid;
    if (flag_given(cmd, "--modes")) merged.modes = cfg.modes;
    if (flag_given(cmd, "--backend")) merged.backend = cfg.backend;
    if (flag_given(cmd, "--vectors-out")) merged.vectors_out = cfg.vectors_out;
    cfg = merged;
}

/// grid = 0 means "model default": 512 on the interval, 256 on the torus.
int resolve_grid(const RunConfig& cfg) {
    if (cfg.grid > 0) return cfg.grid;
    return cfg.model == "halftorus" ? 256 : 512;
}

spectral::FitWindows windows_from(const RunConfig& cfg) {
    spectral::FitWindows w;
    w.lo = cfg.window_lo;
    w.hi = cfg.window_hi;
    w.count = cfg.windows;
    return w;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical lab for boundary-condition spectral problems"};
    app.require_subcommand(1);

    // ---- clifford ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("clifford", "gamma matrices, chirality and conjugation");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto dim = std::make_shared<int>(2);
        auto check = std::make_shared<bool>(false);
        cmd->add_option("--dim", *dim, "even dimension in [2, 8]")->required();
        cmd->add_flag("--check", *check, "print relation residuals");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            const auto g = clifford::build_gamma(*dim);
            const auto chi = clifford::build_chirality(g);
            const auto j = clifford::build_conjugation(g);
            json res;
            res["dim"] = *dim;
            res["rep_size"] = g.rep_size();
            res["epsilon_prime"] = j.epsilon_prime;
            if (*check) {
                res["residuals"] = {{"gamma", clifford::relation_residual(g)},
                                    {"chirality", clifford::chirality_residual(g, chi)},
                                    {"conjugation", clifford::conjugation_residual(g, j)}};
            }
            emit("clifford", *cfg, res);
        });
    }

    // ---- check-bc ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("check-bc", "selfadjointness criterion for a boundary condition");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto op_name = std::make_shared<std::string>("dirac");
        auto s_name = std::make_shared<std::string>("chiral");
        auto dim = std::make_shared<int>(2);
        auto json_path = std::make_shared<std::string>();
        cmd->add_option("--operator", *op_name, "dirac | example1d");
        cmd->add_option("--S", *s_name, "chiral | dirichlet1 | zero | identity");
        cmd->add_option("--dim", *dim, "dimension for the dirac operator");
        cmd->add_option("--json", *json_path, "custom {operator:{j0|gammas}, S} description");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            std::vector<std::pair<boundary::GreenMatrix, boundary::TraceCondition>> comps;
            json res;
            auto make_s = [&](int n, const Matrix& chiral_s) -> Matrix {
                if (*s_name == "chiral") return chiral_s;
                if (*s_name == "dirichlet1") {
                    Matrix s = Matrix::Zero(n, n);
                    for (int i = 0; i < n / 2; ++i) s(i, i) = 1.0;
                    return s;
                }
                if (*s_name == "zero") return Matrix::Zero(n, n);
                if (*s_name == "identity") return Matrix::Identity(n, n);
                throw CLI::ValidationError("--S", "unknown trace condition: " + *s_name);
            };
            if (!json_path->empty()) {
                const json desc = json::parse(bslab::io::read_text(*json_path));
                auto to_matrix = [](const json& rows) {
                    const int n = static_cast<int>(rows.size());
                    Matrix m(n, n);
                    for (int i = 0; i < n; ++i)
                        for (int k = 0; k < n; ++k) {
                            const auto& cell = rows.at(i).at(k);
                            if (cell.is_array())
                                m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
                            else
                                m(i, k) = cell.get<double>();
                        }
                    return m;
                };
                boundary::FirstOrderOp1D op;
                op.j0 = to_matrix(desc.at("operator").at("j0"));
                const Matrix s = to_matrix(desc.at("S"));
                for (auto side : {boundary::Side::Left, boundary::Side::Right})
                    comps.push_back({boundary::green_matrix(op, side), {s}});
            } else if (*op_name == "dirac") {
                const auto g = clifford::build_gamma(*dim);
                const auto chi = clifford::build_chirality(g);
                const Matrix s = make_s(g.rep_size(), chi.s);
                for (int sign : {+1, -1})
                    comps.push_back({boundary::green_matrix_dirac(g, sign), {s}});
            } else if (*op_name == "example1d") {
                const auto op = boundary::example_1d();
                const Matrix s = make_s(2, Matrix());
                for (auto side : {boundary::Side::Left, boundary::Side::Right})
                    comps.push_back({boundary::green_matrix(op, side), {s}});
            } else {
                throw CLI::ValidationError("--operator", "unknown operator: " + *op_name);
            }
            json residuals = json::array();
            bool all_ok = true;
            for (const auto& [a, t] : comps) {
                const auto v = boundary::check_selfadjoint(a, t, cfg->tol);
                residuals.push_back({{"inward_sign", a.inward_sign}, {"r1", v.r1}, {"r2", v.r2}});
                all_ok = all_ok && v.ok;
            }
            res["verdict"] = all_ok;
            res["residuals"] = residuals;
            emit("check-bc", *cfg, res);
        });
    }

    // ---- spectrum ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("spectrum", "eigenvalues of a discretized realization");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto csv = std::make_shared<std::string>();
        cmd->add_option("--model", cfg->model, "example1d | halftorus");
        cmd->add_option("--grid", cfg->grid, "interior grid size N");
        cmd->add_option("--modes", cfg->modes, "tangential mode cutoff K (halftorus)");
        cmd->add_option("--backend", cfg->backend, "fd | basis");
        cmd->add_option("--csv", *csv, "spectrum CSV path (alias for --out here)");
        cmd->add_option("--vectors-out", cfg->vectors_out, "eigenvector archive path");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            cfg->grid = resolve_grid(*cfg);
            // For this subcommand --out names the CSV artifact; the JSON
            // document goes to stdout.
            if (!csv->empty()) cfg->out = *csv;
            if (cfg->out.empty())
                throw CLI::ValidationError("--out", "spectrum needs an output CSV path");
            *csv = cfg->out;
            const bool want_vectors = !cfg->vectors_out.empty();
            spectral::SpectralData sd;
            std::map<std::string, std::string> meta;
            meta["model"] = cfg->model;
            meta["backend"] = cfg->backend;
            meta["N"] = std::to_string(cfg->grid);
            if (cfg->model == "example1d") {
                const auto backend = cfg->backend == "basis" ? disc::Backend::Basis
                                                             : disc::Backend::FiniteDifference;
                const auto r = disc::discretize_1d_example(cfg->grid, backend);
                sd = disc::solve_spectrum(r, want_vectors, disc::trusted_window(r));
                meta["K"] = "0";
                meta["L"] = bslab::io::format_double(bslab::kPi);
            } else if (cfg->model == "halftorus") {
                if (cfg->backend != "fd")
                    throw CLI::ValidationError("--backend", "halftorus supports the fd backend only");
                const auto m = disc::discretize_half_torus(cfg->grid, cfg->modes, cfg->length);
                sd = disc::sweep_half_torus(m, want_vectors, disc::trusted_window(m));
                meta["K"] = std::to_string(cfg->modes);
                meta["L"] = bslab::io::format_double(cfg->length);
            } else {
                throw CLI::ValidationError("--model", "unknown model: " + cfg->model);
            }
            bslab::io::write_spectrum_csv(*csv, sd, meta);
            if (want_vectors) bslab::io::write_vector_archive(cfg->vectors_out, sd);
            json res;
            res["csv"] = *csv;
            res["count"] = sd.total_count();
            res["kernel_dim"] = sd.kernel_dim;
            res["trusted"] = sd.trusted;
            RunConfig report_cfg = *cfg;
            report_cfg.out.clear();  // the JSON document itself goes to stdout
            emit("spectrum", report_cfg, res);
        });
    }

    // ---- zeta ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("zeta", "truncated zeta sums and residue fit");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto spectrum_path = std::make_shared<std::string>();
        auto s = std::make_shared<double>(1.0);
        auto lambda = std::make_shared<double>(0.0);
        cmd->add_option("--spectrum", *spectrum_path, "spectrum CSV")->required();
        cmd->add_option("--s", *s, "zeta exponent")->required();
        cmd->add_option("--lambda", *lambda, "partial-sum cutoff (default: trusted window)");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            const auto in = load_spectrum(*spectrum_path, "");
            const double cutoff = *lambda > 0 ? *lambda : in.sd.trusted;
            json res;
            res["s"] = *s;
            res["lambda"] = cutoff;
            res["partial"] = spectral::zeta_partial(in.sd, *s, cutoff);
            std::vector<double> ones(in.sd.order.size(), 1.0);
            const auto fit = spectral::residue_fit(in.sd, ones, *s,
                                                   spectral::default_fit_model(in.sd.dim, *s),
                                                   windows_from(*cfg));
            res["fit"] = fit_to_json(fit);
            escalate_untrusted(*cfg, fit);
            emit("zeta", *cfg, res);
        });
    }

    // ---- heat ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("heat", "heat trace and expansion coefficients");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto spectrum_path = std::make_shared<std::string>();
        auto tmin = std::make_shared<double>(0.01);
        auto tmax = std::make_shared<double>(0.2);
        auto tcount = std::make_shared<int>(12);
        cmd->add_option("--spectrum", *spectrum_path, "spectrum CSV")->required();
        cmd->add_option("--tmin", *tmin, "smallest t")->required();
        cmd->add_option("--tmax", *tmax, "largest t")->required();
        cmd->add_option("--tcount", *tcount, "log-spaced sample count")
            ->check(CLI::Range(2, 1000000));
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            const auto in = load_spectrum(*spectrum_path, "");
            std::vector<double> grid;
            for (int i = 0; i < *tcount; ++i)
                grid.push_back(*tmin * std::pow(*tmax / *tmin,
                                                i / static_cast<double>(*tcount - 1)));
            json values = json::array();
            for (const double t : grid)
                values.push_back({{"t", t}, {"trace", spectral::heat_trace(in.sd, t)}});
            const auto coef = spectral::fit_heat_coefficients(in.sd, grid, 3);
            json res;
            res["values"] = values;
            res["coefficients"] = coef;
            emit("heat", *cfg, res);
        });
    }

    // ---- action --------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("action", "spectral action and its asymptotic series");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto spectrum_path = std::make_shared<std::string>();
        auto lambda = std::make_shared<double>(10.0);
        auto phi_name = std::make_shared<std::string>("gaussian");
        cmd->add_option("--spectrum", *spectrum_path, "spectrum CSV")->required();
        cmd->add_option("--lambda", *lambda, "cutoff scale")->required();
        cmd->add_option("--phi", *phi_name, "gaussian | bump");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            const auto in = load_spectrum(*spectrum_path, "");
            const auto phi = spectral::CutoffFunction::by_name(*phi_name);
            const double direct = spectral::spectral_action(in.sd, phi, *lambda);
            const auto series = spectral::action_series(in.sd, phi, *lambda);
            json res;
            res["lambda"] = *lambda;
            res["phi"] = *phi_name;
            res["direct"] = direct;
            res["series"] = series.value;
            res["relative_gap"] = std::abs(direct - series.value) / std::abs(direct);
            res["residues"] = int_keyed(series.residues);
            res["residue_spreads"] = int_keyed(series.spreads);
            res["propagated_tolerance"] = series.tolerance;
            res["zeta0_estimate"] = {{"kernel_excluded", series.zeta0_excl},
                                     {"with_kernel", series.zeta0_with_kernel},
                                     {"estimate_only", true}};
            emit("action", *cfg, res);
        });
    }

    // ---- tadpole -------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("tadpole", "one-form tadpole residue from eigenvector weights");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto spectrum_path = std::make_shared<std::string>();
        auto vectors_path = std::make_shared<std::string>();
        auto a_spec = std::make_shared<std::string>("exp:-1");
        auto b_spec = std::make_shared<std::string>("exp:1");
        auto order = std::make_shared<int>(-1);
        auto control = std::make_shared<bool>(false);
        cmd->add_option("--spectrum", *spectrum_path, "spectrum CSV")->required();
        cmd->add_option("--vectors", *vectors_path, "eigenvector archive")->required();
        cmd->add_option("--a", *a_spec, "left factor of the one-form");
        cmd->add_option("--b", *b_spec, "right factor of the one-form");
        cmd->add_option("--order", *order, "order index k in Tad(d-k); default k = d");
        cmd->add_flag("--control", *control, "use the symmetry-broken control operator instead");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            auto in = load_spectrum(*spectrum_path, *vectors_path);
            const std::string model = in.metadata.at("model");
            spectral::OneForm a;
            if (model == "halftorus") {
                const auto m = model_from_metadata(in.metadata);
                if (*control) {
                    a = spectral::control_one_form(m, [](double x) { return x; });
                } else {
                    a = spectral::build_one_form_half_torus({{parse_fn(*a_spec), parse_fn(*b_spec)}},
                                                            m);
                }
            } else {
                const auto r = disc::discretize_1d_example(
                    std::stoi(in.metadata.at("N")),
                    in.metadata.at("backend") == "basis" ? disc::Backend::Basis
                                                         : disc::Backend::FiniteDifference);
                a = spectral::build_one_form_1d({{parse_fn(*a_spec), parse_fn(*b_spec)}}, r);
            }
            const int k_order = *order < 0 ? in.sd.dim : *order;
            const auto tad = spectral::tadpole(in.sd, a, k_order, windows_from(*cfg));
            std::vector<double> ones(in.sd.order.size(), 1.0);
            const auto base = spectral::residue_fit(
                in.sd, ones, static_cast<double>(in.sd.dim),
                spectral::default_fit_model(in.sd.dim, in.sd.dim), windows_from(*cfg));
            json res;
            res["operator"] = a.description;
            res["order"] = tad.order;
            res["fit"] = fit_to_json(tad.fit);
            res["tad"] = tad.tad;
            res["baseline_residue"] = base.r;
            escalate_untrusted(*cfg, tad.fit);
            emit("tadpole", *cfg, res);
        });
    }

    // ---- regularity ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("regularity", "iterated commutator-norm probe");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto fn = std::make_shared<std::string>("sin");
        auto levels_str = std::make_shared<std::string>("64,128,256,512");
        auto kmax = std::make_shared<int>(2);
        cmd->add_option("--model", cfg->model, "example1d");
        cmd->add_option("--fn", *fn, "sin | cos | const");
        cmd->add_option("--levels", *levels_str, "comma-separated grid sizes");
        cmd->add_option("--kmax", *kmax, "highest iterated commutator order");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            if (cfg->model != "example1d")
                throw CLI::ValidationError("--model", "regularity probe supports example1d only");
            std::vector<int> levels;
            std::stringstream ss(*levels_str);
            std::string tok;
            while (std::getline(ss, tok, ',')) levels.push_back(std::stoi(tok));
            std::function<double(double)> f;
            if (*fn == "sin") f = [](double t) { return std::sin(t); };
            else if (*fn == "cos") f = [](double t) { return std::cos(t); };
            else if (*fn == "const") f = [](double) { return 1.0; };
            else {
                // Custom probes through the trig-polynomial grammar
                // (sin:n, cos:n, const:c).
                const auto p = parse_fn(*fn);
                if (!p.is_real())
                    throw CLI::ValidationError("--fn", "probe function must be real: " + *fn);
                f = [p](double t) { return p.eval(t).real(); };
            }
            const auto rep = bslab::regularity::regularity_trend(*fn, f, levels, *kmax);
            json res;
            res["function"] = rep.function_id;
            res["levels"] = rep.levels;
            res["norms"] = rep.norms;
            res["growth_exponent"] = rep.growth_exponent;
            json cls = json::array();
            for (const auto t : rep.classification) cls.push_back(bslab::regularity::trend_name(t));
            res["classification"] = cls;
            res["thresholds"] = {{"bounded", rep.bounded_threshold},
                                 {"growing", rep.growing_threshold}};
            emit("regularity", *cfg, res);
        });
    }

    // ---- verify-all ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("verify-all", "run the full verification suite");
        auto cfg = std::make_shared<RunConfig>();
        auto config_path = std::make_shared<std::string>();
        auto model_filter = std::make_shared<std::string>();
        auto torus_grid = std::make_shared<int>(256);
        cmd->add_option("--model", *model_filter, "restrict to example1d or halftorus criteria");
        cmd->add_option("--grid", cfg->grid, "1d grid size");
        cmd->add_option("--torus-grid", *torus_grid, "halftorus radial grid size");
        cmd->add_option("--modes", cfg->modes, "halftorus mode cutoff");
        add_common(cmd, *cfg, *config_path);
        cmd->callback([=]() {
            merge_config_file(cmd, *cfg, *config_path);
            apply_threads(*cfg);
            bslab::acceptance::Options opt;
            opt.model_filter = *model_filter;
            opt.grid_1d = cfg->grid > 0 ? cfg->grid : 512;
            opt.torus_grid = *torus_grid;
            opt.torus_modes = cfg->modes;
            const auto results = bslab::acceptance::run_acceptance(opt);
            bool all_ok = true;
            json items = json::array();
            for (const auto& r : results) {
                std::cout << bslab::acceptance::format_result(r) << "\n";
                all_ok = all_ok && r.ok();
                items.push_back({{"id", r.id},
                                 {"name", r.name},
                                 {"pass", r.pass},
                                 {"seconds", r.seconds},
                                 {"budget", r.budget},
                                 {"details", r.details}});
            }
            if (!cfg->out.empty()) {
                json res;
                res["criteria"] = items;
                res["all_pass"] = all_ok;
                emit("verify-all", *cfg, res);
            }
            if (!all_ok) g_exit_code = 1;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return g_exit_code;
}
