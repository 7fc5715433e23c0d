#pragma once

#include <vector>

#include "gprs/spectrum.hpp"
#include "gprs/tmm.hpp"

namespace gprs::prs {

/// Reflection spectrum of `stack` on `axis` at normal incidence.
Spectrum stack_reflection(const LayerStack& stack, const FrequencyAxis& axis);

/// Reflection of a sheet in free space normalised to a PEC sheet (Gamma / -1).
/// Its phase is positive on the capacitive side, negative on the inductive side,
/// and crosses zero where the sheet reactance vanishes.
Spectrum normalized_sheet_reflection(const Sheet& sheet, const FrequencyAxis& axis);

/// Same quantity computed from measured sheet impedances.
Spectrum normalized_sheet_reflection(const std::vector<cplx>& sheet_impedance, const FrequencyAxis& axis);

/// Sheet impedance (ohm) that turns `backing` into the measured reflection, i.e. the
/// sheet sits on the incident-side face of `backing`.
std::vector<cplx> deembed_sheet_impedance(const Spectrum& gamma, const LayerStack& backing);

struct FitOptions {
    double max_residual = 0.1;       // max |Gamma_fit - Gamma_ref| over the band
    double resonance_tolerance = 0.02;
};

struct SheetFit {
    SeriesLcSheet sheet;
    double max_residual = 0;         // max |dGamma|
    double resonance = 0;            // 1/(2 pi sqrt(LC))
    double reference_crossing = 0;   // zero crossing of the de-embedded reference
    bool resonance_consistent = false;
};

/// Least-squares series-LC fit of a measured reflection spectrum. Throws
/// NumericalError when the reference has no reactance sign change or when the
/// fitted sheet misses the reference by more than `max_residual`.
SheetFit fit_sheet_impedance(const Spectrum& gamma_ref, const LayerStack& backing = {}, const FitOptions& opts = {});

struct PhaseCrossing {
    double f = 0;
    bool rising = false;  // phase goes from negative to positive
};

/// Zero crossings of arg(values), linearly interpolated; +-pi wraps are ignored.
std::vector<PhaseCrossing> phase_crossings(const Spectrum& s);
std::vector<double> phase_zero_crossing(const Spectrum& s);

/// Fabry-Perot resonance height (phi_prs + phi_ground) lambda/(4 pi) + N lambda/2.
double cavity_height(double phi_prs, double phi_ground, double f, int order);

struct Directivity {
    double linear = 1;
    double db = 0;
};

/// Ray-model broadside enhancement (1 + |G|)/(1 - |G|).
Directivity trentini_directivity(double gamma_mag);

/// Round-trip cavity reflection Gamma_ground * Gamma_up(f), with Gamma_up the
/// reflection of `prs` seen from the ground plane through an air gap z_s.
/// Its phase vanishes at the cavity resonance.
std::vector<Spectrum> sweep_cavity(const LayerStack& prs, const std::vector<double>& z_s, const FrequencyAxis& axis,
                                   const Sheet& ground = Sheet{SheetMaterial{PecSpec{}}});

/// Reflection of the ground sheet seen from the cavity (air on both sides).
cplx ground_reflection(const Sheet& ground, double f);

}  // namespace gprs::prs
