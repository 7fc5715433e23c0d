#include "gprs/prs_cavity.hpp"

#include <algorithm>
#include <cmath>

#include "gprs/error.hpp"

namespace gprs::prs {

Spectrum stack_reflection(const LayerStack& stack, const FrequencyAxis& axis) {
    axis.validate();
    std::vector<cplx> v(axis.count);
    for (std::size_t i = 0; i < axis.count; ++i) v[i] = tmm_reflection(stack, axis[i]);
    return {axis, std::move(v)};
}

Spectrum normalized_sheet_reflection(const std::vector<cplx>& zs, const FrequencyAxis& axis) {
    std::vector<cplx> v(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) v[i] = phys::eta0 / (phys::eta0 + 2.0 * zs[i]);
    return {axis, std::move(v)};
}

Spectrum normalized_sheet_reflection(const Sheet& sheet, const FrequencyAxis& axis) {
    std::vector<cplx> zs(axis.count);
    for (std::size_t i = 0; i < axis.count; ++i) zs[i] = 1.0 / sheet.admittance(axis[i]);
    return normalized_sheet_reflection(zs, axis);
}

std::vector<cplx> deembed_sheet_impedance(const Spectrum& gamma, const LayerStack& backing) {
    const double y0 = std::sqrt(backing.incident.eps_r) / phys::eta0;
    std::vector<cplx> zs(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const cplx g = gamma.values[i];
        const cplx y_in = y0 * (1.0 - g) / (1.0 + g);
        const cplx y_back = tmm_input_admittance(backing, gamma.freq(i));
        zs[i] = 1.0 / (y_in - y_back);
    }
    return zs;
}

std::vector<PhaseCrossing> phase_crossings(const Spectrum& s) {
    std::vector<PhaseCrossing> out;
    const std::size_t n = s.size();
    std::vector<double> ph(n);
    for (std::size_t i = 0; i < n; ++i) ph[i] = std::arg(s.values[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = ph[i], b = ph[i + 1];
        if (std::fabs(b - a) >= pi) continue;  // wrap through +-pi
        if (a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0)) {
            const double t = a / (a - b);
            out.push_back({s.freq(i) + t * s.axis.step, b > a});
        } else if (b == 0.0 && i + 2 < n) {
            const double c = ph[i + 2];
            if (a != 0.0 && c != 0.0 && (a < 0.0) != (c < 0.0) && std::fabs(c - a) < pi)
                out.push_back({s.freq(i + 1), c > a});
        }
    }
    return out;
}

std::vector<double> phase_zero_crossing(const Spectrum& s) {
    std::vector<double> f;
    for (const auto& c : phase_crossings(s)) f.push_back(c.f);
    return f;
}

SheetFit fit_sheet_impedance(const Spectrum& gamma_ref, const LayerStack& backing, const FitOptions& opts) {
    gamma_ref.axis.validate();
    require(gamma_ref.size() >= 3, "sheet fit needs at least three frequency samples");
    require(gamma_ref.axis.f_start > 0.0, "sheet fit band must exclude DC");

    const auto zs = deembed_sheet_impedance(gamma_ref, backing);
    const Spectrum iso_ref = normalized_sheet_reflection(zs, gamma_ref.axis);
    const auto crossings = phase_zero_crossing(iso_ref);
    if (crossings.empty())
        throw NumericalError("sheet fit: reference reflection phase never crosses zero (no LC resonance in band)");

    // Weighted least squares on X(w) = w L - S / w with S = 1/C. The weight is the
    // squared sensitivity |dGamma/dZ|^2 so the fit is tight where Gamma is.
    const double z0 = phys::eta0;
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0, r_num = 0, w_sum = 0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double w = two_pi * gamma_ref.freq(i);
        const double sens = 2.0 * z0 / std::norm(z0 + 2.0 * zs[i]);
        const double wt = sens * sens;
        const double p = w, q = -1.0 / w;
        a11 += wt * p * p;
        a12 += wt * p * q;
        a22 += wt * q * q;
        b1 += wt * p * zs[i].imag();
        b2 += wt * q * zs[i].imag();
        r_num += wt * zs[i].real();
        w_sum += wt;
    }
    const double det = a11 * a22 - a12 * a12;
    if (!(std::fabs(det) > 0.0)) throw NumericalError("sheet fit: singular normal equations");
    const double l = (b1 * a22 - b2 * a12) / det;
    const double s = (a11 * b2 - a12 * b1) / det;
    if (!(l > 0.0) || !(s > 0.0))
        throw NumericalError("sheet fit: reference is not a series-LC sheet (non-positive L or C)");

    SheetFit fit;
    fit.sheet = SeriesLcSheet{l, 1.0 / s, std::max(0.0, r_num / w_sum)};
    fit.resonance = fit.sheet.resonance();

    LayerStack model = backing;
    model.layers.insert(model.layers.begin(), Layer{Sheet{fit.sheet}});
    for (std::size_t i = 0; i < gamma_ref.size(); ++i) {
        const cplx g = tmm_reflection(model, gamma_ref.freq(i));
        fit.max_residual = std::max(fit.max_residual, std::abs(g - gamma_ref.values[i]));
    }
    fit.reference_crossing = *std::min_element(crossings.begin(), crossings.end(), [&](double a, double b) {
        return std::fabs(a - fit.resonance) < std::fabs(b - fit.resonance);
    });
    fit.resonance_consistent =
        std::fabs(fit.resonance - fit.reference_crossing) <= opts.resonance_tolerance * fit.reference_crossing;
    if (fit.max_residual > opts.max_residual)
        throw NumericalError("sheet fit: residual " + std::to_string(fit.max_residual) +
                             " exceeds threshold (unit cell not well modelled by a single LC sheet)");
    return fit;
}

double cavity_height(double phi_prs, double phi_ground, double f, int order) {
    require_positive(f, "frequency");
    require(order >= 0, "cavity order must be >= 0");
    require(phi_prs > -pi && phi_prs <= pi, "PRS phase must lie in (-pi, pi]");
    require(phi_ground > -pi && phi_ground <= pi, "ground phase must lie in (-pi, pi]");
    const double lambda = phys::c0 / f;
    double base = (phi_prs + phi_ground) * lambda / (4.0 * pi);
    if (base <= 0.0 && order == 0) base += 0.5 * lambda;
    return base + order * 0.5 * lambda;
}

Directivity trentini_directivity(double gamma_mag) {
    require_finite(gamma_mag, "|Gamma|");
    require(gamma_mag >= 0.0 && gamma_mag < 1.0, "|Gamma| must lie in [0, 1)");
    Directivity d;
    // extended precision keeps the ratio correctly rounded, e.g. exactly 2 at 1/3
    const long double g = gamma_mag;
    d.linear = static_cast<double>((1.0L + g) / (1.0L - g));
    d.db = 10.0 * std::log10(d.linear);
    return d;
}

cplx ground_reflection(const Sheet& ground, double f) {
    LayerStack s;
    s.add_sheet(ground);
    return tmm_reflection(s, f);
}

std::vector<Spectrum> sweep_cavity(const LayerStack& prs, const std::vector<double>& z_s, const FrequencyAxis& axis,
                                   const Sheet& ground) {
    axis.validate();
    require(!z_s.empty(), "z_s list must not be empty");
    for (double z : z_s) require_positive(z, "z_s");
    std::vector<Spectrum> out;
    out.reserve(z_s.size());
    for (double z : z_s) {
        LayerStack cavity = prs;
        cavity.incident = vacuum_dielectric;
        cavity.layers.insert(cavity.layers.begin(), Layer{Slab{z, vacuum_dielectric}});
        std::vector<cplx> v(axis.count);
        for (std::size_t i = 0; i < axis.count; ++i)
            v[i] = ground_reflection(ground, axis[i]) * tmm_reflection(cavity, axis[i]);
        out.emplace_back(axis, std::move(v));
    }
    return out;
}

}  // namespace gprs::prs
