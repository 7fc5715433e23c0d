#pragma once

#include <string>
#include <variant>

#include "gprs/constants.hpp"

namespace gprs {

/// Lossy dielectric described by its relative permittivity and loss tangent.
struct DielectricSpec {
    double eps_r = 1.0;
    double tan_delta = 0.0;

    void validate() const;
    /// Complex relative permittivity eps_r (1 - j tan_delta) in the e^{+jwt} convention.
    cplx complex_eps() const { return {eps_r, -eps_r * tan_delta}; }
    /// Equivalent conductivity (S/m) that reproduces the loss tangent at angular frequency w0.
    double equivalent_conductivity(double w0) const { return w0 * phys::eps0 * eps_r * tan_delta; }
};

inline constexpr DielectricSpec vacuum_dielectric{1.0, 0.0};
inline constexpr DielectricSpec rt6010{10.2, 0.0023};
inline constexpr DielectricSpec rt5880{2.2, 0.0009};

/// Intraband graphene parameters. Chemical potential in eV, relaxation time in s.
struct GrapheneSpec {
    double mu_c_eV = 0.5;
    double tau = 1e-12;
    double temperature = 300.0;

    void validate() const;
};

/// Thin metal film treated as a sheet: surface conductance sigma_dc * thickness.
struct ConductorSheetSpec {
    double sigma_dc = 5.8e7;  // annealed copper
    double thickness = 5e-6;

    void validate() const;
    double sheet_conductance() const { return sigma_dc * thickness; }
};

struct PecSpec {};

/// Anything that can be placed as a zero-thickness sheet on a grid plane.
using SheetMaterial = std::variant<GrapheneSpec, ConductorSheetSpec, PecSpec>;

std::string describe(const SheetMaterial& m);

/// DC limit of the intraband conductivity (S).
double graphene_sigma_dc(const GrapheneSpec& spec);

/// Intraband (Drude-form Kubo) surface conductivity at angular frequency w (any sign).
cplx graphene_sigma_omega(const GrapheneSpec& spec, double omega);

/// Intraband surface conductivity at frequency f >= 0 (Hz).
cplx graphene_sigma(const GrapheneSpec& spec, double f);

/// Surface admittance (S) of a sheet material at frequency f.
cplx sheet_admittance(const SheetMaterial& m, double f);

/// Coefficients of the trapezoidal sheet-current recursion
///   J^{n+1/2} = decay * J^{n-1/2} + drive * E^n
/// for the Drude equation tau dJ/dt + J = sigma_dc E.
struct DrudeAde {
    double decay = 1.0;
    double drive = 0.0;

    double step(double j_prev, double e_now) const { return decay * j_prev + drive * e_now; }
    /// Exact discrete response J/E of the recursion at angular frequency w, with J
    /// sampled at the half steps it lives on.
    cplx discrete_response(double omega, double dt) const;
};

DrudeAde drude_ade_coefficients(const GrapheneSpec& spec, double dt);

}  // namespace gprs
