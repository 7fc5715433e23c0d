#include "gprs/materials.hpp"

#include <cmath>
#include <sstream>

#include "gprs/error.hpp"

namespace gprs {

void DielectricSpec::validate() const {
    require_finite(eps_r, "eps_r");
    require_finite(tan_delta, "tan_delta");
    require(eps_r >= 1.0, "eps_r must be >= 1");
    require(tan_delta >= 0.0, "tan_delta must be >= 0");
}

void GrapheneSpec::validate() const {
    require_finite(mu_c_eV, "graphene mu_c");
    require_positive(tau, "graphene tau");
    require_positive(temperature, "graphene temperature");
}

void ConductorSheetSpec::validate() const {
    require_positive(sigma_dc, "sigma_dc");
    require_positive(thickness, "conductor thickness");
}

std::string describe(const SheetMaterial& m) {
    std::ostringstream os;
    os.precision(6);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GrapheneSpec>)
                os << "graphene(mu_c=" << s.mu_c_eV << " eV, tau=" << s.tau << " s, T=" << s.temperature << " K)";
            else if constexpr (std::is_same_v<T, ConductorSheetSpec>)
                os << "conductor(sigma=" << s.sigma_dc << " S/m, t=" << s.thickness << " m)";
            else
                os << "pec";
        },
        m);
    return os.str();
}

namespace {

// ln(2 cosh x) without overflow for large |x|.
double log_two_cosh(double x) {
    const double a = std::fabs(x);
    return a + std::log1p(std::exp(-2.0 * a));
}

}  // namespace

double graphene_sigma_dc(const GrapheneSpec& spec) {
    spec.validate();
    using namespace phys;
    const double kt = k_B * spec.temperature;
    const double mu = spec.mu_c_eV * q_e;
    const double prefactor = q_e * q_e * kt * spec.tau / (pi * hbar * hbar);
    return prefactor * 2.0 * log_two_cosh(mu / (2.0 * kt));
}

cplx graphene_sigma_omega(const GrapheneSpec& spec, double omega) {
    require_finite(omega, "angular frequency");
    const double s0 = graphene_sigma_dc(spec);
    return s0 / cplx(1.0, omega * spec.tau);
}

cplx graphene_sigma(const GrapheneSpec& spec, double f) {
    require_finite(f, "frequency");
    require(f >= 0.0, "frequency must be >= 0");
    return graphene_sigma_omega(spec, two_pi * f);
}

cplx sheet_admittance(const SheetMaterial& m, double f) {
    return std::visit(
        [&](const auto& s) -> cplx {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GrapheneSpec>)
                return graphene_sigma(s, f);
            else if constexpr (std::is_same_v<T, ConductorSheetSpec>) {
                s.validate();
                return s.sheet_conductance();
            } else
                return cplx(1e12, 0.0);
        },
        m);
}

cplx DrudeAde::discrete_response(double omega, double dt) const {
    // decay = (2tau - dt)/(2tau + dt), drive = 2 s0 dt/(2tau + dt); invert for the
    // trapezoid recursion evaluated on e^{jwt}.
    const double half = 0.5 * omega * dt;
    const cplx z_half(std::cos(half), std::sin(half));
    return drive / (z_half - decay / z_half);
}

DrudeAde drude_ade_coefficients(const GrapheneSpec& spec, double dt) {
    spec.validate();
    require_positive(dt, "time step");
    if (!(dt < spec.tau))
        throw ValidationError("time step must be shorter than the graphene relaxation time (dispersion under-resolved)");
    const double s0 = graphene_sigma_dc(spec);
    const double denom = 2.0 * spec.tau + dt;
    return {(2.0 * spec.tau - dt) / denom, 2.0 * s0 * dt / denom};
}

}  // namespace gprs
