#include "gprs/fdtd/ntff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gprs/error.hpp"

namespace gprs::fdtd {

namespace {

using Vec3c = std::array<cplx, 3>;

struct Point {
    std::array<double, 3> r;  // relative to the phase origin
    Vec3c J, M;               // area-weighted
};

/// Equivalent currents J = n x H, M = -n x E, merged over blocks no larger than
/// `block` so that the per-direction sum stays cheap on fine grids.
std::vector<Point> surface_points(const NtffSurface& s, std::size_t fi, double block) {
    std::vector<Point> pts;
    for (const auto& f : s.faces) {
        const int a = f.axis, u = (a + 1) % 3, v = (a + 2) % 3;
        const int bu = block > 0 ? std::max(1, static_cast<int>(std::floor(block / f.du))) : 1;
        const int bv = block > 0 ? std::max(1, static_cast<int>(std::floor(block / f.dv))) : 1;
        const auto& data = f.fields.at(fi);
        const double area = f.du * f.dv;
        for (int vb = 0; vb < f.nv; vb += bv)
            for (int ub = 0; ub < f.nu; ub += bu) {
                Point p{};
                const int ue = std::min(f.nu, ub + bu), ve = std::min(f.nv, vb + bv);
                double su = 0, sv = 0;
                int count = 0;
                for (int iv = vb; iv < ve; ++iv)
                    for (int iu = ub; iu < ue; ++iu) {
                        const std::size_t q = 4 * (static_cast<std::size_t>(iu) + static_cast<std::size_t>(f.nu) * iv);
                        const cplx eu = data[q], ev = data[q + 1], hu = data[q + 2], hv = data[q + 3];
                        p.J[u] += -static_cast<double>(f.side) * hv * area;
                        p.J[v] += static_cast<double>(f.side) * hu * area;
                        p.M[u] += static_cast<double>(f.side) * ev * area;
                        p.M[v] += -static_cast<double>(f.side) * eu * area;
                        su += f.u0 + iu * f.du;
                        sv += f.v0 + iv * f.dv;
                        ++count;
                    }
                p.r[a] = f.position - s.center[a];
                p.r[u] = su / count - s.center[u];
                p.r[v] = sv / count - s.center[v];
                pts.push_back(p);
            }
    }
    return pts;
}

double intensity(const std::vector<Point>& pts, double k, double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
    const double rx = st * cp, ry = st * sp, rz = ct;
    Vec3c N{}, L{};
    for (const auto& p : pts) {
        const cplx ph = std::polar(1.0, k * (rx * p.r[0] + ry * p.r[1] + rz * p.r[2]));
        for (int c = 0; c < 3; ++c) {
            N[c] += p.J[c] * ph;
            L[c] += p.M[c] * ph;
        }
    }
    const cplx n_t = N[0] * ct * cp + N[1] * ct * sp - N[2] * st;
    const cplx n_p = -N[0] * sp + N[1] * cp;
    const cplx l_t = L[0] * ct * cp + L[1] * ct * sp - L[2] * st;
    const cplx l_p = -L[0] * sp + L[1] * cp;
    const double eta = phys::eta0;
    return k * k / (32.0 * pi * pi * eta) * (std::norm(l_p + eta * n_t) + std::norm(l_t - eta * n_p));
}

double surface_flux(const NtffSurface& s, std::size_t fi) {
    double p = 0;
    for (const auto& f : s.faces) {
        const auto& d = f.fields.at(fi);
        double acc = 0;
        for (std::size_t q = 0; q < d.size(); q += 4)
            acc += (d[q] * std::conj(d[q + 3]) - d[q + 1] * std::conj(d[q + 2])).real();
        p += 0.5 * f.side * acc * f.du * f.dv;
    }
    return p;
}

double default_block(double f, double max_block) { return max_block > 0 ? max_block : phys::c0 / f / 40.0; }

}  // namespace

double FarField::to_dbi(double d) {
    return d > 0 ? 10.0 * std::log10(d) : -std::numeric_limits<double>::infinity();
}

double radiation_intensity(const NtffSurface& s, std::size_t fi, double theta, double phi, double max_block) {
    require(fi < s.frequencies.size(), "NTFF frequency index out of range");
    const double f = s.frequencies[fi];
    const auto pts = surface_points(s, fi, default_block(f, max_block));
    return intensity(pts, two_pi * f / phys::c0, theta, phi);
}

FarField ntff_farfield(const NtffSurface& s, std::size_t fi, const FarFieldOptions& opts) {
    require(fi < s.frequencies.size(), "NTFF frequency index out of range");
    require(opts.step_deg > 0 && opts.step_deg <= 15 && opts.cut_step_deg > 0, "far-field steps out of range");
    require(!s.faces.empty(), "NTFF surface has no faces");
    const double f = s.frequencies[fi];
    const double k = two_pi * f / phys::c0;
    const auto pts = surface_points(s, fi, default_block(f, opts.max_block));

    FarField ff;
    ff.frequency = f;
    const int nt = static_cast<int>(std::lround(180.0 / opts.step_deg));
    const int np = 2 * nt;
    const double dth = pi / nt, dph = two_pi / np;
    double prad = 0, umax = 0, pk_t = 0, pk_p = 0;
    for (int it = 0; it < nt; ++it) {
        const double th = (it + 0.5) * dth;
        double ring = 0;
        for (int ip = 0; ip < np; ++ip) {
            const double ph = (ip + 0.5) * dph;
            const double u = intensity(pts, k, th, ph);
            ring += u;
            if (u > umax) {
                umax = u;
                pk_t = th;
                pk_p = ph;
            }
        }
        prad += ring * std::sin(th) * dth * dph;
    }
    if (!(prad > 0)) throw NumericalError("NTFF: no radiated power at the requested frequency");
    ff.radiated_power = prad;
    ff.surface_power = surface_flux(s, fi);

    const int nc = static_cast<int>(std::lround(360.0 / opts.cut_step_deg));
    for (int q = 0; q <= nc; ++q) {
        const double a = -180.0 + q * opts.cut_step_deg;
        const double th = std::fabs(a) * pi / 180.0;
        const double ue = intensity(pts, k, th, a >= 0 ? 0.0 : pi);
        const double uh = intensity(pts, k, th, a >= 0 ? 0.5 * pi : 1.5 * pi);
        ff.angles_deg.push_back(a);
        ff.e_plane.push_back(4.0 * pi * ue / prad);
        ff.h_plane.push_back(4.0 * pi * uh / prad);
        for (auto [u, ph] : {std::pair{ue, a >= 0 ? 0.0 : pi}, std::pair{uh, a >= 0 ? 0.5 * pi : 1.5 * pi}})
            if (u > umax) {
                umax = u;
                pk_t = th;
                pk_p = ph;
            }
    }
    ff.peak_directivity = 4.0 * pi * umax / prad;
    ff.peak_theta = pk_t;
    ff.peak_phi = pk_p;
    if (opts.check_integral) {
        // independent quadrature at half the step: D integrates to 4 pi up to quadrature error
        const int nt2 = 2 * nt, np2 = 2 * np;
        const double dth2 = pi / nt2, dph2 = two_pi / np2;
        double integral = 0;
        for (int it = 0; it < nt2; ++it) {
            const double th = (it + 0.5) * dth2;
            double ring = 0;
            for (int ip = 0; ip < np2; ++ip) ring += intensity(pts, k, th, (ip + 0.5) * dph2);
            integral += ring * std::sin(th) * dth2 * dph2;
        }
        ff.pattern_integral = integral / prad;
    }
    return ff;
}

double realized_gain(double directivity, double s11_mag, double radiation_efficiency) {
    require(radiation_efficiency >= 0.0 && radiation_efficiency <= 1.0, "radiation efficiency must lie in [0, 1]");
    require(directivity >= 0.0 && s11_mag >= 0.0, "directivity and |S11| must be >= 0");
    const double g = directivity * radiation_efficiency * (1.0 - s11_mag * s11_mag);
    return g > 0 ? 10.0 * std::log10(g) : -std::numeric_limits<double>::infinity();
}

}  // namespace gprs::fdtd
