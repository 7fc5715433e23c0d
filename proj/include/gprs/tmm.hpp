#pragma once

#include <variant>
#include <vector>

#include "gprs/materials.hpp"

namespace gprs {

/// Series R-L-C sheet: Z_s = R + jwL + 1/(jwC), per square.
struct SeriesLcSheet {
    double inductance = 0;   // H
    double capacitance = 0;  // F
    double resistance = 0;   // ohm

    cplx impedance(double f) const;
    double resonance() const;
};

/// Sheet impedance sampled on a uniform axis, interpolated linearly in between.
struct TabulatedSheet {
    double f_start = 0, step = 0;
    std::vector<cplx> impedance;
    cplx at(double f) const;
};

/// Zero-thickness sheet that couples the tangential fields through its admittance.
struct Sheet {
    std::variant<SheetMaterial, SeriesLcSheet, TabulatedSheet> model;

    cplx admittance(double f) const;
};

struct Slab {
    double thickness = 0;  // m
    DielectricSpec material;
};

using Layer = std::variant<Slab, Sheet>;

/// Stratified medium in propagation order between two half-spaces.
struct LayerStack {
    DielectricSpec incident = vacuum_dielectric;
    std::vector<Layer> layers;
    DielectricSpec exit = vacuum_dielectric;

    void validate() const;
    LayerStack& add_slab(double thickness, DielectricSpec m);
    LayerStack& add_sheet(Sheet s);
};

enum class Polarization { te, tm };

struct TmmResult {
    cplx r;   // tangential-E reflection at the first interface
    cplx t;   // tangential-E transmission into the exit medium
    double reflectance = 0;
    double transmittance = 0;  // impedance-corrected power transmission
};

/// 2x2 characteristic-matrix solution; angle in radians inside the incident medium.
TmmResult tmm_solve(const LayerStack& stack, double f, Polarization pol = Polarization::te, double angle = 0.0);

cplx tmm_reflection(const LayerStack& stack, double f, Polarization pol = Polarization::te, double angle = 0.0);

/// Normal-incidence input admittance (S) looking into `stack` from its first interface.
cplx tmm_input_admittance(const LayerStack& stack, double f);

}  // namespace gprs
