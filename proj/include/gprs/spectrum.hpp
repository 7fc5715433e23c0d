#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gprs/constants.hpp"

namespace gprs {

/// Uniform frequency grid f_start + i*step, i in [0, count).
struct FrequencyAxis {
    double f_start = 600e9;
    double step = 1e9;
    std::size_t count = 301;

    static FrequencyAxis from_range(double f_lo, double f_hi, double step);

    double operator[](std::size_t i) const { return f_start + static_cast<double>(i) * step; }
    double f_stop() const { return (*this)[count - 1]; }
    std::vector<double> values() const;
    void validate() const;

    bool operator==(const FrequencyAxis&) const = default;
    bool same_grid(const FrequencyAxis& other, double rel_tol = 1e-9) const;
};

/// Frequency-indexed complex samples (reflection coefficient, S11, ...).
struct Spectrum {
    FrequencyAxis axis;
    std::vector<cplx> values;

    Spectrum() = default;
    Spectrum(FrequencyAxis a, std::vector<cplx> v);

    std::size_t size() const { return values.size(); }
    double freq(std::size_t i) const { return axis[i]; }

    std::vector<double> magnitude_db() const;
    std::vector<double> phase_deg() const;
};

double to_db20(double magnitude);
double to_db10(double power_ratio);

/// Writes f_Hz,re_gamma,im_gamma,mag_dB,phase_deg with an optional '#'-prefixed header.
void write_gamma_csv(std::ostream& os, const Spectrum& s, const std::string& header = {});
/// Writes f_Hz,re,im,mag_dB.
void write_s11_csv(std::ostream& os, const Spectrum& s, const std::string& header = {});
/// Reads either CSV flavour back (comment lines skipped); the axis must be uniform.
Spectrum read_spectrum_csv(std::istream& is);

/// Prefixes every line of `text` with "# ".
std::string comment_block(const std::string& text);

}  // namespace gprs
