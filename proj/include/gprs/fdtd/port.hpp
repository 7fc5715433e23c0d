#pragma once

#include <utility>
#include <vector>

#include "gprs/fdtd/source.hpp"
#include "gprs/spectrum.hpp"

namespace gprs::fdtd {

/// Lumped-port history. Voltage, current and open-circuit source voltage are
/// sampled at the half steps t = (n + 1/2) dt. The incident wave is known from
/// the source record: a = Vs / (2 sqrt(R)).
struct PortRecord {
    double dt = 0;
    double resistance = 50;
    SourceSpec source;
    std::vector<double> voltage, current, source_voltage;
};

/// DFT of a half-step series on `axis`: sum x_n exp(-j w (n + 1/2) dt) dt.
std::vector<cplx> half_step_dft(const std::vector<double>& x, double dt, const FrequencyAxis& axis);

/// S11 = b / a = 2 V / Vs - 1. Rejects band points more than 40 dB below the
/// source peak.
Spectrum s11_spectrum(const PortRecord& rec, const FrequencyAxis& band);

struct PortPowers {
    std::vector<double> incident;  // |Vs|^2 / (8 R)
    std::vector<double> accepted;  // Re(V I*) / 2
};

PortPowers port_powers(const PortRecord& rec, const FrequencyAxis& band);

struct Band {
    double f_lo = 0, f_hi = 0;
    double width() const { return f_hi - f_lo; }
    double center() const { return 0.5 * (f_lo + f_hi); }
};

/// Maximal intervals with |S11| <= -10 dB, edges interpolated linearly in dB.
std::vector<Band> bandwidth_minus10dB(const Spectrum& s11);

/// Frequency of the deepest |S11| sample refined by a parabola through its neighbours.
double min_s11_frequency(const Spectrum& s11);

}  // namespace gprs::fdtd
