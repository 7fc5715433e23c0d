#include <doctest.h>

#include "approx.hpp"

#include <cstdio>
#include <fstream>

#include "gprs/config.hpp"
#include "gprs/error.hpp"

using namespace gprs;

TEST_CASE("defaults are valid and round-trip through text exactly") {
    RunConfig c;
    c.resolve();
    CHECK_NOTHROW(c.validate());
    const std::string text = c.to_text();
    const RunConfig r = RunConfig::parse(text);
    CHECK(r.to_text() == text);
}

TEST_CASE("every design-table value survives a round trip bit for bit") {
    RunConfig c;
    c.patch.L_p = 36.123456789012345e-6;
    c.patch.W_p = 0.1 + 0.2 - 0.3 + 60e-6;  // not a short decimal
    c.patch.l_3 = 14.999999999999998e-6;
    c.prs.cell.L_g = 17.32e-6 * (1 + 1e-15);
    c.prs.cell.W_g = 8.66e-6;
    c.graphene.tau = 1.0 / 3.0 * 1e-12;
    c.z_s = {5e-6, 12.5e-6, 1.0 / 7.0 * 1e-4};
    c.fdtd.isa = simd::Isa::scalar;
    c.model = SweepModel::tmm;
    c.structure = Structure::cavity;
    c.resolve();
    const RunConfig r = RunConfig::parse(c.to_text());
    CHECK(r.patch.L_p == c.patch.L_p);
    CHECK(r.patch.W_p == c.patch.W_p);
    CHECK(r.patch.l_3 == c.patch.l_3);
    CHECK(r.prs.cell.L_g == c.prs.cell.L_g);
    CHECK(r.graphene.tau == c.graphene.tau);
    CHECK(r.z_s == c.z_s);
    CHECK(r.fdtd.isa == simd::Isa::scalar);
    CHECK(r.model == SweepModel::tmm);
    CHECK(r.structure == Structure::cavity);
}

TEST_CASE("parse reads values and resolves derived structures") {
    const RunConfig c = RunConfig::parse(
        "# comment\n"
        "[materials]\n"
        "substrate_eps_r = 9.8\n"
        "graphene_mu_c_eV = 0.3\n"
        "[geometry]\n"
        "h = 40e-6\n"
        "radiator = copper\n"
        "[prs_cavity]\n"
        "z_s = 10e-6, 20e-6\n"
        "[run]\n"
        "workers = 3\n");
    CHECK(c.substrate.eps_r == 9.8);
    CHECK(c.patch_geometry().substrate.eps_r == 9.8);
    CHECK(c.patch_geometry().h == 40e-6);
    CHECK(c.design.h == 40e-6);
    CHECK(c.design.eps_r == 9.8);
    CHECK(std::holds_alternative<ConductorSheetSpec>(c.patch_geometry().radiator));
    CHECK(std::get<GrapheneSpec>(c.patch_geometry().ground).mu_c_eV == 0.3);
    CHECK(c.z_s == std::vector<double>{10e-6, 20e-6});
    CHECK(c.workers == 3);
    CHECK(c.assembly(20e-6).z_s == 20e-6);
}

TEST_CASE("bad configurations are rejected") {
    auto check = [](const std::string& text) {
        RunConfig c = RunConfig::parse(text);
        c.validate();
    };
    CHECK_THROWS_AS(check("[geometry]\nnot_a_key = 1\n"), ValidationError);
    CHECK_THROWS_AS(check("[nowhere]\nx = 1\n"), ValidationError);
    CHECK_THROWS_AS(check("x = 1\n"), ValidationError);
    CHECK_THROWS_AS(check("[prs_cavity]\nz_s =\n"), ValidationError);
    CHECK_THROWS_AS(check("[prs_cavity]\nz_s = 5e-6, -1e-6\n"), ValidationError);
    CHECK_THROWS_AS(check("[patch_design]\nf_r = -8e11\n"), ValidationError);
    CHECK_THROWS_AS(check("[patch_design]\nf_r = fast\n"), ValidationError);
    CHECK_THROWS_AS(check("[band]\nf_start = 9e11\nf_stop = 6e11\n"), ValidationError);
    CHECK_THROWS_AS(check("[geometry]\nradiator = gold\n"), ValidationError);
    CHECK_THROWS_AS(check("[fdtd]\nisa = neon\n"), ValidationError);
    CHECK_THROWS_AS(check("[run]\nworkers = 0\n"), ValidationError);
    CHECK_THROWS_AS(check("[geometry]\nL_p = 1e-4\n"), ValidationError);
    CHECK_THROWS_AS(check("[geometry]\nh = 1e-6\nh = 2e-6\n"), ValidationError);
}

TEST_CASE("ini reader") {
    const IniSections s = read_ini("; c\n[a]\nx = 1\n# d\ny=two words\n[b]\n");
    CHECK(s.at("a").at("x") == "1");
    CHECK(s.at("a").at("y") == "two words");
}

TEST_CASE("loading files") {
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/dir/config.ini"), IoError);
    const std::string path = "test_config_tmp.ini";
    {
        std::ofstream os(path);
        os << "[band]\nf_step = 5e9\n";
    }
    const RunConfig c = RunConfig::load(path);
    CHECK(c.f_step == 5e9);
    CHECK(c.band().count == 61);
    std::remove(path.c_str());
}

TEST_CASE("fdtd step sizes") {
    FdtdSettings f;
    CHECK(f.lateral_step() == 1e-6);
    CHECK(f.vertical_step() == 1e-6);
    f.resolution = 0.8;
    f.dz = 2.5e-6;
    CHECK(f.lateral_step() == approx(1.25e-6));
    CHECK(f.vertical_step() == 2.5e-6);
}
