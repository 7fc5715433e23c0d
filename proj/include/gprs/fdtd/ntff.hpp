#pragma once

#include <array>
#include <vector>

#include "gprs/constants.hpp"

namespace gprs::fdtd {

/// One face of the Huygens box. Face-centre samples on a (u, v) lattice, where
/// u and v are the tangential axes (axis + 1) % 3 and (axis + 2) % 3. For each
/// frequency and sample, fields[f][4 * s + c] holds E_u, E_v, H_u, H_v.
struct NtffFace {
    int axis = 0;
    int side = 1;            // outward normal sign
    double position = 0;     // coordinate along `axis`
    int nu = 0, nv = 0;
    double u0 = 0, du = 0, v0 = 0, dv = 0;  // centre of sample (0, 0) and spacing
    std::vector<std::vector<cplx>> fields;
};

struct NtffSurface {
    std::vector<double> frequencies;
    std::array<double, 3> center{};  // phase origin
    std::vector<NtffFace> faces;
};

struct FarFieldOptions {
    double step_deg = 2.0;       // power-integration grid
    double cut_step_deg = 1.0;
    double max_block = 0.0;      // coarse-graining length (m); 0 picks lambda / 40
    bool check_integral = false; // re-integrate D on a finer grid
};

/// Radiation pattern at one frequency. Directivities are linear; the cuts are
/// sampled at angle = -180 .. 180 in 1 degree steps: the E-plane is xz (phi = 0)
/// and the H-plane is yz (phi = 90 deg).
struct FarField {
    double frequency = 0;
    std::vector<double> angles_deg;
    std::vector<double> e_plane, h_plane;     // directivity (linear)
    double peak_directivity = 0;
    double peak_theta = 0, peak_phi = 0;      // radians
    double radiated_power = 0;                // pattern integral (W per DFT units)
    double surface_power = 0;                 // Poynting flux through the box
    double pattern_integral = 0;              // fine-grid integral of D / (4 pi), if requested

    static double to_dbi(double d);
};

/// Radiation intensity U(theta, phi) from the stored surface fields.
double radiation_intensity(const NtffSurface& s, std::size_t f_index, double theta, double phi,
                           double max_block = 0.0);

FarField ntff_farfield(const NtffSurface& s, std::size_t f_index, const FarFieldOptions& opts = {});

/// D * eta * (1 - |S11|^2) in dBi; -inf when no power is accepted.
double realized_gain(double directivity, double s11_mag, double radiation_efficiency);

}  // namespace gprs::fdtd
