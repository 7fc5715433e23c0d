#pragma once

namespace gprs::patch {

/// Inputs of the closed-form rectangular patch design.
struct DesignInputs {
    double f_r = 800e9;   // Hz
    double eps_r = 10.2;
    double h = 45e-6;     // m
    double z0 = 50.0;     // ohm, feed target
    double r_edge = 240.0;  // ohm, radiating-edge input resistance

    void validate() const;
};

/// Patch width for efficient radiation: c/(2 f_r) * sqrt(2/(eps_r + 1)).
double patch_width(double f_r, double eps_r);

/// Hammerstad effective permittivity of a microstrip of width w on height h.
double effective_permittivity(double eps_r, double h, double w);

/// Open-end fringing extension of each radiating edge.
double fringing_extension(double eps_eff, double h, double w);

/// Resonant length c/(2 f_r sqrt(eps_eff)) - 2 delta_l.
double patch_length(double f_r, double eps_eff, double h, double w);
double patch_length_with_extension(double f_r, double eps_eff, double delta_l);

/// Inset depth y0 such that r_edge cos^2(pi y0 / L_p) = z0.
double inset_depth(double l_p, double r_edge, double z0);

/// Every quantity the closed-form pipeline produces.
struct Design {
    double width = 0;
    double eps_eff = 0;
    double delta_l = 0;
    double length = 0;
    double inset = 0;
};

Design design(const DesignInputs& in);

}  // namespace gprs::patch
