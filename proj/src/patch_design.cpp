#include "gprs/patch_design.hpp"

#include <cmath>

#include "gprs/constants.hpp"
#include "gprs/error.hpp"

namespace gprs::patch {

void DesignInputs::validate() const {
    require_positive(f_r, "f_r");
    require_finite(eps_r, "eps_r");
    require(eps_r >= 1.0, "eps_r must be >= 1");
    require_positive(h, "substrate thickness h");
    require_positive(z0, "z0");
    require_positive(r_edge, "r_edge");
}

double patch_width(double f_r, double eps_r) {
    require_positive(f_r, "f_r");
    require_finite(eps_r, "eps_r");
    require(eps_r >= 1.0, "eps_r must be >= 1");
    return phys::c0 / (2.0 * f_r) * std::sqrt(2.0 / (eps_r + 1.0));
}

double effective_permittivity(double eps_r, double h, double w) {
    require_finite(eps_r, "eps_r");
    require(eps_r >= 1.0, "eps_r must be >= 1");
    require_positive(h, "h");
    require_positive(w, "w");
    return 0.5 * (eps_r + 1.0) + 0.5 * (eps_r - 1.0) / std::sqrt(1.0 + 12.0 * h / w);
}

double fringing_extension(double eps_eff, double h, double w) {
    require_positive(h, "h");
    require_positive(w, "w");
    require(eps_eff >= 1.0, "eps_eff must be >= 1");
    const double u = w / h;
    return 0.412 * h * (eps_eff + 0.3) * (u + 0.264) / ((eps_eff - 0.258) * (u + 0.8));
}

double patch_length_with_extension(double f_r, double eps_eff, double delta_l) {
    require_positive(f_r, "f_r");
    require(eps_eff >= 1.0, "eps_eff must be >= 1");
    require(delta_l >= 0.0, "fringing extension must be >= 0");
    const double l_eff = phys::c0 / (2.0 * f_r * std::sqrt(eps_eff));
    if (2.0 * delta_l >= l_eff)
        throw ValidationError("fringing extension consumes the whole resonant length (electrically thick substrate)");
    return l_eff - 2.0 * delta_l;
}

double patch_length(double f_r, double eps_eff, double h, double w) {
    return patch_length_with_extension(f_r, eps_eff, fringing_extension(eps_eff, h, w));
}

double inset_depth(double l_p, double r_edge, double z0) {
    require_positive(l_p, "L_p");
    require_positive(r_edge, "r_edge");
    require_positive(z0, "z0");
    if (z0 > r_edge) throw ValidationError("z0 exceeds the edge resistance: no inset position matches");
    return l_p / pi * std::acos(std::sqrt(z0 / r_edge));
}

Design design(const DesignInputs& in) {
    in.validate();
    Design d;
    d.width = patch_width(in.f_r, in.eps_r);
    d.eps_eff = effective_permittivity(in.eps_r, in.h, d.width);
    d.delta_l = fringing_extension(d.eps_eff, in.h, d.width);
    d.length = patch_length_with_extension(in.f_r, d.eps_eff, d.delta_l);
    d.inset = inset_depth(d.length, in.r_edge, in.z0);
    return d;
}

}  // namespace gprs::patch
