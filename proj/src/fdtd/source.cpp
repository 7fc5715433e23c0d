#include "gprs/fdtd/source.hpp"

#include <cmath>

#include "gprs/constants.hpp"
#include "gprs/error.hpp"

namespace gprs::fdtd {

void SourceSpec::validate() const {
    require_positive(f0, "source f0");
    require_positive(half_band, "source half band");
    require_finite(amplitude, "source amplitude");
    require(delay >= 3.0 && std::isfinite(delay), "source delay must be at least 3 tau");
}

double SourceSpec::tau() const { return std::sqrt(std::log(10.0)) / (pi * half_band); }

double SourceSpec::value(double t) const {
    const double tau_ = tau();
    const double u = (t - delay * tau_) / tau_;
    return amplitude * std::exp(-u * u) * std::sin(two_pi * f0 * (t - delay * tau_));
}

double SourceSpec::relative_level(double f) const {
    const double a = pi * tau() * (f - f0);
    return std::exp(-a * a);
}

}  // namespace gprs::fdtd
