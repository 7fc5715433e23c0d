#pragma once

namespace gprs::fdtd {

/// Gaussian-modulated sine. `half_band` is the offset from f0 at which the
/// spectrum is 20 dB below its peak.
struct SourceSpec {
    double f0 = 800e9;
    double half_band = 200e9;
    double amplitude = 1.0;
    double delay = 4.0;  // peak time in units of tau

    void validate() const;
    double tau() const;
    double t0() const { return delay * tau(); }
    double value(double t) const;
    /// Spectral envelope relative to its peak (ignores the negative-frequency image).
    double relative_level(double f) const;
};

}  // namespace gprs::fdtd
