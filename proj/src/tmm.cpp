#include "gprs/tmm.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gprs/error.hpp"

namespace gprs {

cplx SeriesLcSheet::impedance(double f) const {
    const double w = two_pi * f;
    return {resistance, w * inductance - 1.0 / (w * capacitance)};
}

double SeriesLcSheet::resonance() const { return 1.0 / (two_pi * std::sqrt(inductance * capacitance)); }

cplx TabulatedSheet::at(double f) const {
    require(impedance.size() >= 2 && step > 0, "tabulated sheet needs at least two samples");
    const double u = (f - f_start) / step;
    const double last = static_cast<double>(impedance.size() - 1);
    require(u >= -1e-9 && u <= last + 1e-9, "frequency outside the tabulated sheet");
    const std::size_t i = std::min(static_cast<std::size_t>(std::max(u, 0.0)), impedance.size() - 2);
    const double w = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
    return (1.0 - w) * impedance[i] + w * impedance[i + 1];
}

cplx Sheet::admittance(double f) const {
    if (const auto* lc = std::get_if<SeriesLcSheet>(&model)) return 1.0 / lc->impedance(f);
    if (const auto* tab = std::get_if<TabulatedSheet>(&model)) return 1.0 / tab->at(f);
    return sheet_admittance(std::get<SheetMaterial>(model), f);
}

void LayerStack::validate() const {
    incident.validate();
    exit.validate();
    for (const auto& l : layers) {
        if (const auto* s = std::get_if<Slab>(&l)) {
            require_positive(s->thickness, "layer thickness");
            s->material.validate();
        }
    }
}

LayerStack& LayerStack::add_slab(double thickness, DielectricSpec m) {
    layers.emplace_back(Slab{thickness, m});
    return *this;
}

LayerStack& LayerStack::add_sheet(Sheet s) {
    layers.emplace_back(std::move(s));
    return *this;
}

namespace {

using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

cplx refractive_index(const DielectricSpec& m) { return std::sqrt(m.complex_eps()); }

// Cosine of the propagation angle in a medium, on the decaying/forward branch.
cplx cos_angle(cplx n, cplx n0_sin0) {
    const cplx s = n0_sin0 / n;
    cplx c = std::sqrt(1.0 - s * s);
    const cplx kz = n * c;
    if (kz.imag() > 0.0 || (kz.imag() == 0.0 && kz.real() < 0.0)) c = -c;
    return c;
}

// Tilted optical admittance in siemens.
cplx tilted_admittance(cplx n, cplx cos_t, Polarization pol) {
    const cplx y = n / phys::eta0;
    return pol == Polarization::te ? y * cos_t : y / cos_t;
}

struct Assembled {
    cplx b, c;
    cplx eta_in, eta_out;
};

Assembled assemble(const LayerStack& stack, double f, Polarization pol, double angle) {
    require_positive(f, "frequency");
    require(angle >= 0.0 && angle < pi / 2, "incidence angle must lie in [0, 90) degrees");
    stack.validate();
    const double k0 = two_pi * f / phys::c0;
    const cplx n0 = refractive_index(stack.incident);
    const cplx n0_sin0 = n0 * std::sin(angle);

    const cplx n_exit = refractive_index(stack.exit);
    const cplx cos_exit = cos_angle(n_exit, n0_sin0);
    if (stack.exit.tan_delta == 0.0 && std::abs((n_exit * cos_exit).real()) < 1e-12)
        throw ValidationError("exit half-space is evanescent at this incidence angle");
    if (stack.incident.tan_delta == 0.0 && std::abs((n0 * cos_angle(n0, n0_sin0)).real()) < 1e-12)
        throw ValidationError("incident half-space does not support a propagating wave");

    Mat2 m{1.0, 0.0, 0.0, 1.0};
    for (const auto& layer : stack.layers) {
        if (const auto* slab = std::get_if<Slab>(&layer)) {
            const cplx n = refractive_index(slab->material);
            const cplx ct = cos_angle(n, n0_sin0);
            const cplx eta = tilted_admittance(n, ct, pol);
            const cplx delta = k0 * n * ct * slab->thickness;
            const cplx cd = std::cos(delta), sd = std::sin(delta);
            const cplx j(0.0, 1.0);
            m = mul(m, Mat2{cd, j * sd / eta, j * eta * sd, cd});
        } else {
            const cplx y = std::get<Sheet>(layer).admittance(f);
            m = mul(m, Mat2{1.0, 0.0, y, 1.0});
        }
    }
    Assembled out;
    out.eta_in = tilted_admittance(n0, cos_angle(n0, n0_sin0), pol);
    out.eta_out = tilted_admittance(n_exit, cos_exit, pol);
    out.b = m[0] + m[1] * out.eta_out;
    out.c = m[2] + m[3] * out.eta_out;
    return out;
}

}  // namespace

TmmResult tmm_solve(const LayerStack& stack, double f, Polarization pol, double angle) {
    const auto a = assemble(stack, f, pol, angle);
    const cplx denom = a.eta_in * a.b + a.c;
    TmmResult r;
    r.r = (a.eta_in * a.b - a.c) / denom;
    r.t = 2.0 * a.eta_in / denom;
    r.reflectance = std::norm(r.r);
    r.transmittance = 4.0 * a.eta_in.real() * a.eta_out.real() / std::norm(denom);
    return r;
}

cplx tmm_reflection(const LayerStack& stack, double f, Polarization pol, double angle) {
    return tmm_solve(stack, f, pol, angle).r;
}

cplx tmm_input_admittance(const LayerStack& stack, double f) {
    const auto a = assemble(stack, f, Polarization::te, 0.0);
    return a.c / a.b;
}

}  // namespace gprs
