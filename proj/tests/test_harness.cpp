#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hsim/cli.hpp"
#include "hsim/errors.hpp"
#include "hsim/harness.hpp"

using namespace hsim;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig c;
    c.d = 3;
    c.m_order = 2.0;
    c.N = 36;
    c.L = 2.85;
    c.spectrum = {SpectrumKind::gaussian, 0.05, 1.5, 3};
    c.packet.sigma0 = 1.42;
    c.T = 0.1;
    c.dt_ref = 0.004;
    c.epsilon_list = {1.0, 0.5, 0.25};
    c.realizations_per_epsilon = 3;
    c.base_seed = 77;
    c.dt_check_seeds = 0;
    return c;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hsim");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_NOTHROW(tiny_config().validate());
    auto c = tiny_config();
    c.epsilon_list = {0.5, 0.5, 0.25};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = tiny_config();
    c.epsilon_list = {1.5, 0.5};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = tiny_config();
    c.N = 23;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = tiny_config();
    c.T = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = tiny_config();
    c.realizations_per_epsilon = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK(parse_mode("volterra") == Mode::volterra);
    CHECK(to_string(Mode::bounds) == "bounds");
    CHECK_THROWS_AS(parse_mode("nope"), DomainError);
}

TEST_CASE("config json round trip and hash") {
    const auto c = tiny_config();
    const auto text = config_to_json(c);
    const auto back = config_from_json(text);
    CHECK(config_to_json(back) == text);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    auto other = c;
    other.base_seed = 78;
    CHECK(config_hash(other) != config_hash(c));

    const auto nested = config_from_json(R"({"d": 3, "m_order": 2, "grid": {"N": 40, "L": 3.0},
        "spectrum": {"kind": "bump", "amplitude": 0.1, "width": 2.0},
        "epsilon_list": [0.5, 0.25], "mode": "rho"})");
    CHECK(nested.N == 40);
    CHECK(nested.L == 3.0);
    CHECK(nested.spectrum.kind == SpectrumKind::bump);
    CHECK(nested.spectrum.dimension == 3);
    CHECK(nested.mode == Mode::rho);
    CHECK_THROWS(config_from_json("{not json"));
}

TEST_CASE("bundled configs load") {
    for (const char* name : {"converge.json", "converge_quick.json", "rho.json", "volterra.json"}) {
        CAPTURE(name);
        const auto path = std::filesystem::path(HSIM_DATA_DIR).parent_path() / "configs" / name;
        CHECK_NOTHROW(load_config(path.string()).validate());
    }
}

TEST_CASE("fit_rate on synthetic records") {
    std::vector<RunRecord> rec;
    for (double e : {0.5, 0.25, 0.125, 0.0625})
        for (int s = 0; s < 3; ++s) rec.push_back({e, static_cast<std::uint64_t>(s), e * e});
    const auto f = fit_rate(rec);
    CHECK(std::abs(f.slope - 2.0) <= 1e-10);
    CHECK(f.stderr_ <= 1e-10);
    for (auto& r : rec) r.err_sq = 0.3;
    CHECK(std::abs(fit_rate(rec).slope) <= 1e-12);
    rec.resize(6);
    CHECK_THROWS_AS(fit_rate(rec), DomainError);
    // invalid records are ignored
    std::vector<RunRecord> mixed;
    for (double e : {0.5, 0.25, 0.125})
        for (int s = 0; s < 2; ++s) mixed.push_back({e, static_cast<std::uint64_t>(s), e});
    mixed.push_back({0.5, 9, 1e6, 1.0, 0.0, 0.0, 0, false});
    CHECK(fit_rate(mixed).slope == doctest::Approx(1.0));
}

TEST_CASE("zero-amplitude sweep reproduces the free flow") {
    auto c = tiny_config();
    c.spectrum.amplitude = 0.0;
    const auto res = run_convergence_sweep(c, 1);
    CHECK(res.rho == 0.0);
    CHECK(res.records.size() == 9);
    for (const auto& r : res.records) {
        CHECK(r.err_sq <= 1e-18);
        CHECK(r.valid);
    }
}

TEST_CASE("sweep is deterministic and independent of thread count") {
    const auto c = tiny_config();
    const auto a = run_convergence_sweep(c, 1);
    const auto b = run_convergence_sweep(c, 3);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].epsilon == b.records[i].epsilon);
        CHECK(a.records[i].seed == b.records[i].seed);
        CHECK(a.records[i].err_sq == b.records[i].err_sq);
    }
    CHECK(sweep_summary_json(c, a) == sweep_summary_json(c, b));
    CHECK(a.invalid_count == 0);
    CHECK(a.records.front().epsilon == 1.0);
    CHECK(a.records.front().seed == 77);
    for (const auto& r : a.records) CHECK(r.norm_drift <= 1e-8);

    const auto dir = std::filesystem::temp_directory_path() / "hsim_sweep_test";
    std::filesystem::remove_all(dir);
    write_sweep_outputs(c, a, dir.string());
    for (const char* f : {"runs.csv", "summary.json", "plot.dat", "manifest.json"})
        CHECK(std::filesystem::exists(dir / f));
    CHECK(slurp(dir / "manifest.json").find(config_hash(c)) != std::string::npos);
    CHECK(slurp(dir / "runs.csv").find("epsilon,seed,err_sq,norm_drift,wall_time") == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("volterra table covers every (eps, xi, t)") {
    ExperimentConfig c;
    c.spectrum = {SpectrumKind::gaussian, 0.003, 2.0, 3};
    c.T = 1.0;
    c.epsilon_list = {0.5, 0.25};
    c.xi_samples = {1.0};
    const auto rows = volterra_table(c);
    CHECK(rows.size() == 2 * 1 * 4);
    for (const auto& r : rows) CHECK(r.abs_diff == doctest::Approx(std::abs(r.U - r.homogenized)));
    const auto rates = volterra_rates(rows);
    REQUIRE(rates.size() == 1);
    CHECK(rates[0].xi == 1.0);
}

TEST_CASE("command line") {
    CHECK(run_cli({}) == 1);
    CHECK(run_cli({"frobnicate"}) == 1);
    CHECK(run_cli({"graphs", "--bogus"}) == 1);
    CHECK(run_cli({"graphs", "--nbar", "3"}) == 0);
    CHECK(run_cli({"rho"}) == 0);
}
