#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "gprs/error.hpp"
#include "gprs/pipeline.hpp"

using namespace gprs;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gprs_test_pipeline_" + name);
    fs::remove_all(p);
    return p.string();
}

// A run directory containing only what compare needs.
void fake_run(const std::string& dir, const FrequencyAxis& axis, double resonance, double bandwidth, double gain) {
    app::ensure_dir(dir);
    std::ostringstream s;
    s << "[summary]\nresonance_Hz = " << resonance << "\nbandwidth_Hz = " << bandwidth
      << "\npeak_realized_gain_dBi = " << gain << "\n";
    app::write_file(dir + "/summary.txt", s.str());
    std::ostringstream c;
    write_s11_csv(c, Spectrum(axis, std::vector<cplx>(axis.count, cplx(0.5, 0))), "# fake\n");
    app::write_file(dir + "/s11.csv", c.str());
}

}  // namespace

TEST_CASE("compare reports deltas between two runs") {
    const std::string root = scratch_dir("compare");
    const FrequencyAxis axis{600e9, 1e9, 301};
    fake_run(root + "/a", axis, 780e9, 70e9, 5.5);
    fake_run(root + "/b", axis, 810e9, 60e9, 6.57);
    const auto a = app::load_run(root + "/a"), b = app::load_run(root + "/b");
    const auto self = app::compare_runs(a, a);
    CHECK(self.resonance_shift == 0.0);
    CHECK(self.bandwidth_delta == 0.0);
    CHECK(self.gain_delta == 0.0);
    const auto d = app::compare_runs(a, b);
    CHECK(d.resonance_shift == approx(30e9));
    CHECK(d.bandwidth_delta == approx(-10e9));
    CHECK(d.gain_delta == approx(1.07));
    CHECK(app::comparison_text(a, b, d).find("resonance_shift_Hz = 3e+10") != std::string::npos);

    fake_run(root + "/c", FrequencyAxis{600e9, 2e9, 151}, 780e9, 70e9, 5.5);
    CHECK_THROWS_AS(app::compare_runs(a, app::load_run(root + "/c")), ValidationError);
    CHECK_THROWS_AS(app::load_run(root + "/missing"), IoError);
    fs::remove_all(root);
}

TEST_CASE("labels, bands and design text") {
    CHECK(app::run_label(Structure::patch, 15e-6) == "patch");
    CHECK(app::run_label(Structure::cavity, 15e-6) == "cavity_15um");
    CHECK(app::run_label(Structure::cavity, 12.5e-6) == "cavity_12p5um");
    CHECK(app::format_bands({}) == "none");
    CHECK(app::format_bands({{750e9, 820e9}}) == "7.5e+11 - 8.2e+11");
    RunConfig cfg;
    cfg.resolve();
    const std::string text = app::design_report(cfg);
    CHECK(text.find("W_p_formula = 7.917839732e-05") != std::string::npos);
    CHECK(text.find("L_p = 3.6e-05") != std::string::npos);
    CHECK(app::config_header(cfg, "design").rfind("# gprs design\n", 0) == 0);
}

TEST_CASE("solver settings follow the configuration") {
    RunConfig cfg;
    cfg.fdtd.cpml_layers = 8;
    cfg.fdtd.energy_threshold = 1e-5;
    cfg.fdtd.isa = simd::Isa::scalar;
    cfg.resolve();
    const auto s = app::solver_config(cfg);
    CHECK(s.cpml.layers == 8);
    CHECK(s.energy_threshold == 1e-5);
    CHECK(s.isa == simd::Isa::scalar);
    CHECK(s.band == cfg.band());
}

TEST_CASE("coarse end-to-end antenna run writes loadable outputs") {
    RunConfig cfg;
    cfg.fdtd.resolution = 0.25;  // 4 um cells
    cfg.fdtd.dz = 5e-6;
    cfg.fdtd.cpml_layers = 6;
    cfg.fdtd.air_xy = cfg.fdtd.air_z = 20e-6;
    cfg.fdtd.energy_threshold = 1e-4;
    cfg.fdtd.gain_step = 100e9;
    cfg.f_step = 5e9;
    cfg.resolve();
    const auto r = app::simulate_antenna(cfg, Structure::patch, 0, 1);
    CHECK(r.s11.size() == 61);
    CHECK(r.farfields.size() == 4);
    CHECK(r.realized_gain_dbi.size() == 4);
    CHECK(std::isfinite(r.peak_gain_dbi));
    CHECK(r.resonance >= 600e9);
    CHECK(r.resonance <= 900e9);
    for (const auto& v : r.s11.values) CHECK(std::abs(v) <= 1.0 + 1e-6);  // passive

    const std::string dir = scratch_dir("e2e");
    app::write_antenna_outputs(dir, cfg, r, true);
    CHECK(fs::exists(dir + "/farfield.csv"));
    CHECK(fs::exists(dir + "/farfield_700GHz.csv"));
    const auto run = app::load_run(dir);
    CHECK(run.resonance == approx(r.resonance).epsilon(1e-9));
    CHECK(run.axis.same_grid(cfg.band()));
    const auto self = app::compare_runs(run, run);
    CHECK(self.resonance_shift == 0.0);
    CHECK(self.gain_delta == 0.0);
    fs::remove_all(dir);
}
