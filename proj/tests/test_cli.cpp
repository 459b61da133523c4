#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "bslab/io.hpp"
#include "bslab/discretize.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    // stdout only: warnings (untrusted-fit notices etc.) go to stderr and
    // must not pollute the JSON documents under test.
    const std::string cmd = std::string(BSLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe) != nullptr) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "bslab_cli_test";
    fs::create_directories(dir);
    return dir;
}

json strip_meta(json doc) {
    doc.erase("meta");
    return doc;
}

/// Remove the path-valued fields too: the round-trip invariant concerns the
/// scientific payload, not where it was written.
json strip_volatile(json doc) {
    doc = strip_meta(std::move(doc));
    if (doc.contains("config")) {
        doc["config"].erase("out");
        doc["config"].erase("vectors_out");
    }
    if (doc.contains("results") && doc["results"].contains("csv")) doc["results"].erase("csv");
    return doc;
}

}  // namespace

TEST_CASE("clifford --check reports tiny residuals") {
    const auto res = run_cli("clifford --dim 4 --check");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.output);
    CHECK(doc.at("command") == "clifford");
    CHECK(doc.at("results").at("rep_size") == 4);
    CHECK(doc.at("results").at("residuals").at("gamma").get<double>() < 1e-12);
    CHECK(doc.at("results").at("residuals").at("chirality").get<double>() < 1e-12);
    CHECK(doc.at("results").at("residuals").at("conjugation").get<double>() < 1e-12);
}

TEST_CASE("clifford rejects odd dimensions") {
    const auto res = run_cli("clifford --dim 3");
    CHECK(res.exit_code != 0);
}

TEST_CASE("unknown flags are rejected") {
    const auto res = run_cli("clifford --dim 2 --no-such-flag");
    CHECK(res.exit_code != 0);
}

TEST_CASE("check-bc verdicts") {
    const auto chiral = run_cli("check-bc --operator dirac --dim 2 --S chiral");
    REQUIRE(chiral.exit_code == 0);
    CHECK(json::parse(chiral.output).at("results").at("verdict") == true);

    const auto zero = run_cli("check-bc --operator dirac --dim 2 --S zero");
    REQUIRE(zero.exit_code == 0);
    CHECK(json::parse(zero.output).at("results").at("verdict") == false);

    const auto ex1d = run_cli("check-bc --operator example1d --S dirichlet1");
    REQUIRE(ex1d.exit_code == 0);
    CHECK(json::parse(ex1d.output).at("results").at("verdict") == true);
}

TEST_CASE("check-bc accepts a custom JSON system") {
    const auto dir = temp_dir();
    const auto desc = dir / "system.json";
    // The half-circle operator with the first-component Dirichlet condition.
    std::ofstream(desc) << R"({"operator": {"j0": [[0, 1], [-1, 0]]},
                              "S": [[1, 0], [0, 0]]})";
    const auto res = run_cli("check-bc --json " + desc.string());
    REQUIRE(res.exit_code == 0);
    CHECK(json::parse(res.output).at("results").at("verdict") == true);
}

TEST_CASE("spectrum produces a CSV whose first eigenvalue is 1") {
    const auto dir = temp_dir();
    const auto csv = (dir / "s256.csv").string();
    const auto res = run_cli("spectrum --model example1d --grid 256 --csv " + csv);
    REQUIRE(res.exit_code == 0);
    const auto file = bslab::io::read_spectrum_csv(csv);
    REQUIRE(file.sd.total_count() == 513);
    CHECK(file.sd.kernel_dim == 1);
    // First nonzero |eigenvalue| is 1 within 1e-3.
    double first = 0.0;
    for (const auto& e : file.sd.order) {
        if (!file.sd.is_kernel(e)) {
            first = e.abs;
            break;
        }
    }
    CHECK(std::abs(first - 1.0) < 1e-3);
}

TEST_CASE("basis backend flows through the file pipeline") {
    const auto dir = temp_dir();
    const auto csv = (dir / "basis64.csv").string();
    REQUIRE(run_cli("spectrum --model example1d --grid 64 --backend basis --csv " + csv)
                .exit_code == 0);
    const auto file = bslab::io::read_spectrum_csv(csv);
    CHECK(file.sd.trusted == doctest::Approx(64.0).epsilon(1e-9));
    const auto zeta = run_cli("zeta --spectrum " + csv + " --s 1");
    REQUIRE(zeta.exit_code == 0);
    const double r = json::parse(zeta.output).at("results").at("fit").at("r").get<double>();
    CHECK(std::abs(r - 2.0) < 0.1);
}

TEST_CASE("spectrum round-trips byte-identically under the emitted config") {
    const auto dir = temp_dir();
    const auto csv1 = (dir / "r1.csv").string(), csv2 = (dir / "r2.csv").string();
    const auto doc1 = (dir / "doc1.json").string();
    auto r1 = run_cli("spectrum --model example1d --grid 64 --out " + csv1);
    REQUIRE(r1.exit_code == 0);
    bslab::io::write_text(doc1, r1.output);  // the emitted resolved config
    auto r2 = run_cli("spectrum --config " + doc1 + " --out " + csv2);
    REQUIRE(r2.exit_code == 0);
    // The CSV artifact reproduces byte for byte; the result documents agree
    // outside the meta block and the output paths.
    CHECK(bslab::io::read_text(csv1) == bslab::io::read_text(csv2));
    const json d1 = json::parse(r1.output);
    const json d2 = json::parse(r2.output);
    CHECK(strip_volatile(d1).dump() == strip_volatile(d2).dump());
}

TEST_CASE("zeta / heat / action pipeline on a stored spectrum") {
    const auto dir = temp_dir();
    const auto csv = (dir / "s512.csv").string();
    REQUIRE(run_cli("spectrum --model example1d --grid 512 --csv " + csv).exit_code == 0);

    const auto zeta = run_cli("zeta --spectrum " + csv + " --s 1");
    REQUIRE(zeta.exit_code == 0);
    const json zj = json::parse(zeta.output);
    CHECK(std::abs(zj.at("results").at("fit").at("r").get<double>() - 2.0) < 0.1);
    CHECK(zj.at("results").at("fit").at("trusted") == true);

    const auto heat = run_cli("heat --spectrum " + csv + " --tmin 0.01 --tmax 0.2");
    REQUIRE(heat.exit_code == 0);
    const json hj = json::parse(heat.output);
    const double a0 = hj.at("results").at("coefficients").at(0).get<double>();
    CHECK(std::abs(a0 - std::sqrt(bslab::kPi)) < 0.02);

    const auto action = run_cli("action --spectrum " + csv + " --lambda 20 --phi gaussian");
    REQUIRE(action.exit_code == 0);
    const json aj = json::parse(action.output);
    CHECK(aj.at("results").at("relative_gap").get<double>() < 0.07);

    // --config on a subcommand that lacks the model/grid flags.
    const auto zdoc = (dir / "zeta.json").string();
    bslab::io::write_text(zdoc, zeta.output);
    const auto zeta2 = run_cli("zeta --config " + zdoc + " --spectrum " + csv + " --s 1");
    REQUIRE(zeta2.exit_code == 0);
    CHECK(json::parse(zeta2.output).at("results").at("fit").at("r") ==
          zj.at("results").at("fit").at("r"));
}

TEST_CASE("tadpole pipeline through spectrum and vector files") {
    const auto dir = temp_dir();
    const auto csv = (dir / "torus.csv").string();
    const auto vec = (dir / "torus.bin").string();
    REQUIRE(run_cli("spectrum --model halftorus --grid 64 --modes 16 --csv " + csv +
                    " --vectors-out " + vec)
                .exit_code == 0);

    const std::string windows = " --window-lo 2.4 --window-hi 7.2";
    const auto tad = run_cli("tadpole --spectrum " + csv + " --vectors " + vec +
                             " --a exp:-1 --b exp:1" + windows);
    REQUIRE(tad.exit_code == 0);
    const json tj = json::parse(tad.output);
    const double r = tj.at("results").at("fit").at("r").get<double>();
    const double base = tj.at("results").at("baseline_residue").get<double>();
    CHECK(std::abs(r) < 1e-6 * std::abs(base));

    const auto ctrl = run_cli("tadpole --spectrum " + csv + " --vectors " + vec + " --control" +
                              windows);
    REQUIRE(ctrl.exit_code == 0);
    const double rc = json::parse(ctrl.output).at("results").at("fit").at("r").get<double>();
    CHECK(std::abs(rc) > 1e-5 * std::abs(base));
}

TEST_CASE("regularity subcommand emits the report") {
    const auto res = run_cli("regularity --model example1d --fn sin --levels 64,128,256 --kmax 1");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.output);
    CHECK(doc.at("results").at("classification").at(1) == "bounded");
    const auto cos_res =
        run_cli("regularity --model example1d --fn cos --levels 64,128,256 --kmax 1");
    REQUIRE(cos_res.exit_code == 0);
    CHECK(json::parse(cos_res.output).at("results").at("classification").at(1) == "growing");
}

TEST_CASE("vector archive round-trip") {
    const auto m = bslab::disc::discretize_half_torus(24, 6);
    auto sd = bslab::disc::sweep_half_torus(m, true, 4.0);
    const auto dir = temp_dir();
    const auto csv = (dir / "rt.csv").string();
    const auto bin = (dir / "rt.bin").string();
    bslab::io::write_spectrum_csv(csv, sd, {{"model", "halftorus"},
                                            {"backend", "fd"},
                                            {"N", "24"},
                                            {"K", "6"},
                                            {"L", bslab::io::format_double(bslab::kPi)}});
    bslab::io::write_vector_archive(bin, sd);

    auto file = bslab::io::read_spectrum_csv(csv);
    bslab::io::read_vector_archive(bin, file.sd);
    REQUIRE(file.sd.total_count() == sd.total_count());
    CHECK(file.sd.trusted == sd.trusted);
    int vectors_checked = 0;
    for (size_t i = 0; i < sd.order.size(); ++i) {
        const auto& e1 = sd.order[i];
        const auto& e2 = file.sd.order[i];
        CHECK(e1.value == e2.value);
        if (sd.has_vector(e1)) {
            REQUIRE(file.sd.has_vector(e2));
            CHECK((sd.vector(e1) - file.sd.vector(e2)).cwiseAbs().maxCoeff() == 0.0);
            ++vectors_checked;
        }
    }
    CHECK(vectors_checked > 10);
}

TEST_CASE("strict mode escalates untrusted fits") {
    const auto dir = temp_dir();
    const auto csv = (dir / "strict.csv").string();
    const auto vec = (dir / "strict.bin").string();
    REQUIRE(run_cli("spectrum --model halftorus --grid 64 --modes 16 --out " + csv +
                    " --vectors-out " + vec)
                .exit_code == 0);
    // The control operator's fit is window-unstable by construction, so the
    // untrusted flag fires; --strict turns the warning into exit code 3.
    const std::string args = "tadpole --spectrum " + csv + " --vectors " + vec +
                             " --control --window-lo 2.4 --window-hi 7.2";
    CHECK(run_cli(args).exit_code == 0);
    CHECK(run_cli(args + " --strict").exit_code == 3);
}

TEST_CASE("artifacts are independent of the thread count") {
    const auto dir = temp_dir();
    const auto csv1 = (dir / "t1.csv").string(), csv3 = (dir / "t3.csv").string();
    REQUIRE(run_cli("spectrum --model halftorus --grid 32 --modes 8 --threads 1 --out " + csv1)
                .exit_code == 0);
    REQUIRE(run_cli("spectrum --model halftorus --grid 32 --modes 8 --threads 3 --out " + csv3)
                .exit_code == 0);
    CHECK(bslab::io::read_text(csv1) == bslab::io::read_text(csv3));
}

TEST_CASE("verify-all scoped to the 1d model") {
    const auto res = run_cli("verify-all --model example1d --grid 512");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("[FAIL]") == std::string::npos);
    CHECK(res.output.find("[PASS]") != std::string::npos);
}
