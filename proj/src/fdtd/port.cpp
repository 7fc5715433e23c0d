#include "gprs/fdtd/port.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gprs/error.hpp"

namespace gprs::fdtd {

std::vector<cplx> half_step_dft(const std::vector<double>& x, double dt, const FrequencyAxis& axis) {
    std::vector<cplx> out(axis.count);
    for (std::size_t fi = 0; fi < axis.count; ++fi) {
        const double w = two_pi * axis[fi];
        // rotate a unit phasor instead of calling sincos per sample; renormalise
        // periodically to keep the recurrence on the unit circle
        const cplx rot = std::polar(1.0, -w * dt);
        cplx ph = std::polar(1.0, -w * 0.5 * dt);
        cplx acc{};
        for (std::size_t n = 0; n < x.size(); ++n) {
            acc += x[n] * ph;
            ph *= rot;
            if ((n & 1023) == 1023) ph = std::polar(1.0, -w * (static_cast<double>(n) + 1.5) * dt);
        }
        out[fi] = acc * dt;
    }
    return out;
}

namespace {

void check_record(const PortRecord& rec) {
    require(rec.dt > 0.0, "port record has no time step");
    require(!rec.voltage.empty(), "port record is empty");
    require(rec.voltage.size() == rec.current.size() && rec.voltage.size() == rec.source_voltage.size(),
            "port record series lengths differ");
}

void check_band(const PortRecord& rec, const FrequencyAxis& band) {
    band.validate();
    for (std::size_t i = 0; i < band.count; ++i)
        if (rec.source.relative_level(band[i]) < 0.01) {
            std::ostringstream os;
            os << "frequency " << band[i] * 1e-9 << " GHz lies more than 40 dB below the source peak";
            throw ValidationError(os.str());
        }
}

}  // namespace

Spectrum s11_spectrum(const PortRecord& rec, const FrequencyAxis& band) {
    check_record(rec);
    check_band(rec, band);
    const auto v = half_step_dft(rec.voltage, rec.dt, band);
    const auto vs = half_step_dft(rec.source_voltage, rec.dt, band);
    std::vector<cplx> s(band.count);
    for (std::size_t i = 0; i < band.count; ++i) s[i] = 2.0 * v[i] / vs[i] - 1.0;
    return {band, std::move(s)};
}

PortPowers port_powers(const PortRecord& rec, const FrequencyAxis& band) {
    check_record(rec);
    check_band(rec, band);
    const auto v = half_step_dft(rec.voltage, rec.dt, band);
    const auto i = half_step_dft(rec.current, rec.dt, band);
    const auto vs = half_step_dft(rec.source_voltage, rec.dt, band);
    PortPowers p;
    for (std::size_t k = 0; k < band.count; ++k) {
        p.incident.push_back(std::norm(vs[k]) / (8.0 * rec.resistance));
        p.accepted.push_back(0.5 * (v[k] * std::conj(i[k])).real());
    }
    return p;
}

std::vector<Band> bandwidth_minus10dB(const Spectrum& s11) {
    const auto db = s11.magnitude_db();
    std::vector<Band> out;
    const std::size_t n = db.size();
    auto cross = [&](std::size_t a) {  // crossing between a and a + 1
        const double t = (-10.0 - db[a]) / (db[a + 1] - db[a]);
        return s11.freq(a) + t * s11.axis.step;
    };
    bool inside = false;
    double lo = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool below = db[i] <= -10.0;
        if (below && !inside) {
            lo = i == 0 ? s11.freq(0) : cross(i - 1);
            inside = true;
        } else if (!below && inside) {
            out.push_back({lo, cross(i - 1)});
            inside = false;
        }
    }
    if (inside) out.push_back({lo, s11.freq(n - 1)});
    return out;
}

double min_s11_frequency(const Spectrum& s11) {
    require(s11.size() > 0, "empty S11 spectrum");
    const auto db = s11.magnitude_db();
    const std::size_t m = static_cast<std::size_t>(std::min_element(db.begin(), db.end()) - db.begin());
    if (m == 0 || m + 1 >= db.size()) return s11.freq(m);
    const double a = db[m - 1], b = db[m], c = db[m + 1];
    const double den = a - 2.0 * b + c;
    const double off = den > 0.0 ? 0.5 * (a - c) / den : 0.0;
    return s11.freq(m) + off * s11.axis.step;
}

}  // namespace gprs::fdtd
