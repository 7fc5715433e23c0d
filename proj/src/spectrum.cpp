#include "gprs/spectrum.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gprs/error.hpp"

namespace gprs {

FrequencyAxis FrequencyAxis::from_range(double f_lo, double f_hi, double step) {
    require_positive(step, "frequency step");
    require_finite(f_lo, "f_lo");
    require_finite(f_hi, "f_hi");
    require(f_hi >= f_lo, "frequency band must satisfy f_hi >= f_lo");
    const auto n = static_cast<std::size_t>(std::llround((f_hi - f_lo) / step)) + 1;
    return {f_lo, step, n};
}

std::vector<double> FrequencyAxis::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = (*this)[i];
    return v;
}

void FrequencyAxis::validate() const {
    require(count >= 1, "frequency axis must have at least one sample");
    require_finite(f_start, "f_start");
    require(f_start >= 0.0, "f_start must be >= 0");
    require_positive(step, "frequency step");
}

bool FrequencyAxis::same_grid(const FrequencyAxis& o, double rel_tol) const {
    if (count != o.count) return false;
    const double scale = std::max({std::fabs(f_start), std::fabs(o.f_start), step});
    return std::fabs(f_start - o.f_start) <= rel_tol * scale && std::fabs(step - o.step) <= rel_tol * step;
}

Spectrum::Spectrum(FrequencyAxis a, std::vector<cplx> v) : axis(a), values(std::move(v)) {
    if (values.size() != axis.count) throw ValidationError("spectrum length does not match its frequency axis");
}

double to_db20(double magnitude) {
    return magnitude > 0.0 ? 20.0 * std::log10(magnitude) : -std::numeric_limits<double>::infinity();
}

double to_db10(double power_ratio) {
    return power_ratio > 0.0 ? 10.0 * std::log10(power_ratio) : -std::numeric_limits<double>::infinity();
}

std::vector<double> Spectrum::magnitude_db() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = to_db20(std::abs(values[i]));
    return out;
}

std::vector<double> Spectrum::phase_deg() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::arg(values[i]) * 180.0 / pi;
    return out;
}

std::string comment_block(const std::string& text) {
    std::ostringstream os;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) os << "# " << line << '\n';
    return os.str();
}

namespace {

void write_rows(std::ostream& os, const Spectrum& s, bool with_phase) {
    os << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const cplx v = s.values[i];
        os << s.freq(i) << ',' << v.real() << ',' << v.imag() << ',' << to_db20(std::abs(v));
        if (with_phase) os << ',' << std::arg(v) * 180.0 / pi;
        os << '\n';
    }
}

}  // namespace

void write_gamma_csv(std::ostream& os, const Spectrum& s, const std::string& header) {
    os << comment_block(header) << "f_Hz,re_gamma,im_gamma,mag_dB,phase_deg\n";
    write_rows(os, s, true);
}

void write_s11_csv(std::ostream& os, const Spectrum& s, const std::string& header) {
    os << comment_block(header) << "f_Hz,re,im,mag_dB\n";
    write_rows(os, s, false);
}

Spectrum read_spectrum_csv(std::istream& is) {
    std::string line;
    bool header_seen = false;
    std::vector<double> freqs;
    std::vector<cplx> vals;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("f_Hz", 0) != 0) throw IoError("spectrum CSV: missing f_Hz header");
            continue;
        }
        std::istringstream ls(line);
        double f = 0, re = 0, im = 0;
        char c1 = 0, c2 = 0;
        if (!(ls >> f >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
            throw IoError("spectrum CSV: malformed row '" + line + "'");
        freqs.push_back(f);
        vals.emplace_back(re, im);
    }
    if (freqs.empty()) throw IoError("spectrum CSV: no data rows");
    FrequencyAxis axis{freqs.front(), freqs.size() > 1 ? freqs[1] - freqs[0] : 1.0, freqs.size()};
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (std::fabs(freqs[i] - axis[i]) > 1e-6 * axis.step)
            throw IoError("spectrum CSV: frequency axis is not uniform");
    }
    return Spectrum(axis, std::move(vals));
}

}  // namespace gprs
