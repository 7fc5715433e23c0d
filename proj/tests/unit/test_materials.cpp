#include <doctest.h>

#include "approx.hpp"

#include <cmath>

#include "gprs/error.hpp"
#include "gprs/materials.hpp"
#include "oracle_values.hpp"

using namespace gprs;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("graphene conductivity matches the frozen reference values") {
    const GrapheneSpec g{};
    CHECK(rel(graphene_sigma_dc(g), oracle::sigma_dc) < 1e-12);
    const cplx s = graphene_sigma(g, 800e9);
    CHECK(rel(s.real(), oracle::sigma_800_re) < 1e-12);
    CHECK(rel(s.imag(), oracle::sigma_800_im) < 1e-12);

    const cplx b = graphene_sigma(GrapheneSpec{0.2, 0.5e-12, 77.0}, 650e9);
    CHECK(rel(b.real(), oracle::sigma_b_re) < 1e-12);
    CHECK(rel(b.imag(), oracle::sigma_b_im) < 1e-12);
}

TEST_CASE("conductivity is real at dc and has the Drude phase at 800 GHz") {
    const GrapheneSpec g{};
    const cplx s0 = graphene_sigma(g, 0.0);
    CHECK(s0.imag() == 0.0);
    CHECK(s0.real() == approx(graphene_sigma_dc(g)).epsilon(1e-15));
    const double phase = std::arg(graphene_sigma(g, 800e9));
    CHECK(phase == approx(-std::atan(two_pi * 800e9 * 1e-12)).epsilon(1e-12));
    CHECK(phase * 180.0 / pi == approx(-78.748).epsilon(1e-4));
}

TEST_CASE("conductivity is conjugate symmetric, passive and decreasing in magnitude") {
    const GrapheneSpec g{0.3, 0.7e-12, 250.0};
    double last = 1e300;
    for (int i = 0; i <= 200; ++i) {
        const double f = i * 10e9;
        const double w = two_pi * f;
        const cplx p = graphene_sigma_omega(g, w), m = graphene_sigma_omega(g, -w);
        CHECK(m.real() == p.real());
        CHECK(m.imag() == -p.imag());
        CHECK(p.real() > 0.0);
        CHECK(std::abs(p) < last);
        last = std::abs(p);
    }
}

TEST_CASE("chemical potential sign does not matter and large values do not overflow") {
    CHECK(graphene_sigma_dc({0.5, 1e-12, 300}) == approx(graphene_sigma_dc({-0.5, 1e-12, 300})));
    const double big = graphene_sigma_dc({5.0, 1e-12, 1.0});
    CHECK(std::isfinite(big));
    // Degenerate limit: sigma_dc -> e^2 mu tau / (pi hbar^2)
    const double expect = phys::q_e * phys::q_e * 5.0 * phys::q_e * 1e-12 / (pi * phys::hbar * phys::hbar);
    CHECK(rel(big, expect) < 1e-12);
}

TEST_CASE("invalid material inputs are rejected") {
    CHECK_THROWS_AS(graphene_sigma(GrapheneSpec{}, -1.0), ValidationError);
    CHECK_THROWS_AS(graphene_sigma(GrapheneSpec{}, NAN), ValidationError);
    CHECK_THROWS_AS(graphene_sigma(GrapheneSpec{0.5, 0.0, 300}, 1e12), ValidationError);
    CHECK_THROWS_AS(graphene_sigma(GrapheneSpec{0.5, 1e-12, -4}, 1e12), ValidationError);
    CHECK_THROWS_AS(graphene_sigma(GrapheneSpec{INFINITY, 1e-12, 300}, 1e12), ValidationError);
    CHECK_THROWS_AS((DielectricSpec{0.5, 0}.validate()), ValidationError);
    CHECK_THROWS_AS((DielectricSpec{2.2, -0.1}.validate()), ValidationError);
    CHECK_THROWS_AS((ConductorSheetSpec{0, 1e-6}.validate()), ValidationError);
    CHECK_NOTHROW(rt6010.validate());
}

TEST_CASE("dielectric loss maps to an equivalent conductivity") {
    const double w0 = two_pi * 800e9;
    const double sigma = rt6010.equivalent_conductivity(w0);
    CHECK(sigma / (w0 * phys::eps0 * rt6010.eps_r) == approx(0.0023).epsilon(1e-14));
    CHECK(vacuum_dielectric.equivalent_conductivity(w0) == 0.0);
    CHECK(rt5880.complex_eps().imag() == approx(-2.2 * 0.0009));
}

TEST_CASE("sheet admittances") {
    CHECK(sheet_admittance(ConductorSheetSpec{}, 800e9) == cplx(290.0, 0.0));
    CHECK(std::abs(sheet_admittance(PecSpec{}, 800e9)) > 1e9);
    CHECK(sheet_admittance(GrapheneSpec{}, 700e9) == graphene_sigma(GrapheneSpec{}, 700e9));
}

TEST_CASE("Drude recursion coefficients") {
    const GrapheneSpec g{};
    SUBCASE("time step not below the relaxation time is rejected") {
        CHECK_THROWS_AS(drude_ade_coefficients(g, 1e-12), ValidationError);
        CHECK_THROWS_AS(drude_ade_coefficients(g, 2e-12), ValidationError);
        CHECK_THROWS_AS(drude_ade_coefficients(g, 0.0), ValidationError);
    }
    SUBCASE("zero field gives zero current") {
        const DrudeAde a = drude_ade_coefficients(g, 1e-16);
        double j = 0;
        for (int n = 0; n < 1000; ++n) j = a.step(j, 0.0);
        CHECK(j == 0.0);
    }
    SUBCASE("long relaxation time approaches the lossless Drude integrator") {
        const double dt = 1e-16;
        const GrapheneSpec slow{0.5, 1e-6, 300};
        const DrudeAde a = drude_ade_coefficients(slow, dt);
        CHECK(1.0 - a.decay < 1e-9);
        CHECK(rel(a.drive, graphene_sigma_dc(slow) / slow.tau * dt) < 1e-9);
    }
    SUBCASE("free decay follows exp(-t/tau)") {
        const double dt = 1e-16;
        const DrudeAde a = drude_ade_coefficients(g, dt);
        double j = 1.0;
        const int n = 10000;  // 1 ps
        for (int i = 0; i < n; ++i) j = a.step(j, 0.0);
        CHECK(j == approx(std::exp(-1.0)).epsilon(1e-6));
    }
}

TEST_CASE("harmonic steady state of the recursion matches the analytic conductivity") {
    const GrapheneSpec g{};
    const double dt = 1e-16;
    const DrudeAde a = drude_ade_coefficients(g, dt);
    for (double f = 600e9; f <= 1000e9 + 1; f += 50e9) {
        const double w = two_pi * f;
        cplx j = 0;
        const int n = 200000;  // 20 tau: start-up transient below 1e-8
        for (int i = 0; i < n; ++i) j = a.decay * j + a.drive * std::polar(1.0, w * i * dt);
        // J lives at (n - 1/2) dt
        const cplx response = j / std::polar(1.0, w * (n - 0.5) * dt);
        const cplx exact = graphene_sigma(g, f);
        CHECK(std::abs(response - exact) / std::abs(exact) < 0.01);
        CHECK(std::abs(response - a.discrete_response(w, dt)) / std::abs(exact) < 1e-6);
    }
}

TEST_CASE("discrete response converges to the analytic one as dt shrinks") {
    const GrapheneSpec g{};
    const double w = two_pi * 900e9;
    const cplx exact = graphene_sigma_omega(g, w);
    double prev = 0;
    for (int level = 0; level < 5; ++level) {
        const double dt = 1e-14 / std::pow(2.0, level);
        const double err = std::abs(drude_ade_coefficients(g, dt).discrete_response(w, dt) - exact);
        if (level > 0) CHECK(prev / err > 2.0);  // at least first order
        prev = err;
    }
}
