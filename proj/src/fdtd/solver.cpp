#include "gprs/fdtd/solver.hpp"

#include <cstdint>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "gprs/error.hpp"
#include "gprs/parallel.hpp"

namespace gprs::fdtd {

void CpmlSpec::validate() const {
    require(layers >= 6, "CPML needs at least 6 layers");
    require(grading >= 1.0 && std::isfinite(grading), "CPML grading order must be >= 1");
    require(sigma_max >= 0.0 && std::isfinite(sigma_max), "CPML sigma_max must be >= 0");
    require(kappa_max >= 1.0 && std::isfinite(kappa_max), "CPML kappa_max must be >= 1");
    require(alpha_max >= 0.0 && std::isfinite(alpha_max), "CPML alpha_max must be >= 0");
}

void SimulationConfig::validate() const {
    require(dt >= 0.0 && std::isfinite(dt), "dt must be >= 0 (0 selects the Courant fraction)");
    require(courant_fraction > 0.0 && courant_fraction <= 1.0, "Courant fraction must lie in (0, 1]");
    source.validate();
    require_positive(port_impedance, "port impedance");
    for (int f = 0; f < 6; f += 2)
        require((boundaries[f] == Boundary::periodic) == (boundaries[f + 1] == Boundary::periodic),
                "periodic boundaries must be paired on opposite faces");
    require(boundaries[4] != Boundary::periodic, "periodic z boundaries are not supported");
    if (std::find(boundaries.begin(), boundaries.end(), Boundary::cpml) != boundaries.end()) cpml.validate();
    require(max_steps > 0, "max_steps must be > 0");
    require(min_steps >= 0, "min_steps must be >= 0");
    require(energy_threshold > 0.0 && energy_threshold < 1.0, "energy threshold must lie in (0, 1)");
    require(energy_stride > 0, "energy stride must be > 0");
    require_positive(loss_frequency, "loss frequency");
    band.validate();
    for (double f : ntff_frequencies) require_positive(f, "NTFF frequency");
    require(ntff_gap >= 1, "NTFF gap must be >= 1 cell");
    require(workers >= 1, "workers must be >= 1");
}

double courant_limit(double dx, double dy, double dz) {
    return 1.0 / (phys::c0 * std::sqrt(1.0 / (dx * dx) + 1.0 / (dy * dy) + 1.0 / (dz * dz)));
}

namespace {

struct Range {
    int lo = 0, hi = 0;  // [lo, hi)
};

struct Range3 {
    Range r[3];
};

struct AxisPml {
    bool lo = false, hi = false;
    int n = 0, layers = 0;
    std::vector<float> bE, aE, kE;  // node positions 0..n
    std::vector<float> bH, aH, kH;  // half positions 0..n-1

    bool active() const { return lo || hi; }
    bool node_in(int p) const { return (lo && p < layers) || (hi && p > n - layers); }
    bool half_in(int p) const { return (lo && p < layers) || (hi && p >= n - layers); }
    int node_compact(int p) const { return p < layers ? p : p - (n + 1 - 2 * layers); }
    int half_compact(int p) const { return p < layers ? p : p - (n - 2 * layers); }
};

struct PmlTerm {
    float* dst = nullptr;
    const float* coef = nullptr;  // per-edge cb, or null for the constant
    float coef_const = 0;
    const float* src = nullptr;
    int axis = 0;
    float s = 0;
    bool e_type = true;
    Range3 range;
    std::vector<float> psi;
};

struct AdeEdge {
    float* e = nullptr;
    float decay = 0, drive = 0, scale = 0;  // scale = cb / dz
    float j = 0;
};

struct SourceEdge {
    float* e = nullptr;
    float scale = 0;
};

struct FaceAcc {
    NtffFace face;
    std::vector<float> scratch[4];
    // [freq][comp] -> re, im
    std::vector<std::vector<std::vector<double>>> re, im;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

struct Solver::Impl {
    VoxelGrid g;
    SimulationConfig cfg;
    const simd::Kernels* K = nullptr;
    WorkerPool pool;

    int nx = 0, ny = 0, nz = 0;
    std::size_t sy = 0, sz = 0, N = 0;
    double dx = 0, dy = 0, dz = 0, dt = 0;
    bool per_x = false, per_y = false;
    float idx_ = 0, idy_ = 0, idz_ = 0, ch = 0;

    std::vector<float> E[3], H[3], Hold[3];
    std::vector<float> ca[3], cb[3], eps[3];
    Range3 range[6];  // Ex Ey Ez Hx Hy Hz update ranges

    AxisPml pml[3];
    std::vector<PmlTerm> e_terms, h_terms;

    std::vector<AdeEdge> ade;
    std::vector<SourceEdge> port_edges;
    std::vector<const float*> port_sense;
    double port_r_edge = 0;
    int port_series = 0, port_parallel = 0;
    std::vector<SourceEdge> plane_edges;
    std::vector<SourceEdge> current_edges;

    int n = 0;
    int n_source_end = 0;
    double peak_energy = 0, last_energy = 0;
    std::vector<double> energy_series;
    std::vector<double> plane_w_e, plane_w_h;
    bool converged = false;

    PortRecord port_rec;
    bool has_port = false;
    std::vector<ProbeRecord> probes;
    std::vector<std::vector<double>> current_field, current_value;

    std::vector<FaceAcc> ntff;
    std::array<int, 6> ntff_box{};
    int ntff_stride = 1;
    std::vector<double> ntff_freqs;

    std::size_t idx(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + sy * static_cast<std::size_t>(j) + sz * static_cast<std::size_t>(k);
    }
    double xn(int i) const { return g.x0 + i * dx; }
    double yn(int j) const { return g.y0 + j * dy; }
    double zn(int k) const { return g.z0 + k * dz; }

    Impl(const VoxelGrid& grid, const SimulationConfig& c) : g(grid), cfg(c), pool(c.workers) {
        cfg.validate();
        require(g.nx > 0 && g.ny > 0 && g.nz > 0, "empty voxel grid");
        K = &simd::kernels_for(cfg.isa.value_or(simd::preferred_isa()));
        nx = g.nx;
        ny = g.ny;
        nz = g.nz;
        dx = g.dx;
        dy = g.dy;
        dz = g.dz;
        sy = static_cast<std::size_t>(nx) + 1;
        sz = sy * (static_cast<std::size_t>(ny) + 1);
        N = sz * (static_cast<std::size_t>(nz) + 1);
        per_x = cfg.boundaries[0] == Boundary::periodic;
        per_y = cfg.boundaries[2] == Boundary::periodic;

        const double limit = courant_limit(dx, dy, dz);
        dt = cfg.dt > 0.0 ? cfg.dt : cfg.courant_fraction * limit;
        if (dt > limit * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "dt = " << dt << " s exceeds the Courant limit " << limit << " s";
            throw ValidationError(os.str());
        }
        idx_ = static_cast<float>(1.0 / dx);
        idy_ = static_cast<float>(1.0 / dy);
        idz_ = static_cast<float>(1.0 / dz);
        ch = static_cast<float>(dt / phys::mu0);

        for (int c = 0; c < 3; ++c) {
            E[c].assign(N, 0.0f);
            H[c].assign(N, 0.0f);
            Hold[c].assign(N, 0.0f);
            ca[c].assign(N, 0.0f);
            cb[c].assign(N, 0.0f);
            eps[c].assign(N, 1.0f);
        }
        const int ex0 = per_x ? 0 : 1, ey0 = per_y ? 0 : 1;
        range[0] = {{{0, nx}, {ey0, ny}, {1, nz}}};
        range[1] = {{{ex0, nx}, {0, ny}, {1, nz}}};
        range[2] = {{{ex0, nx}, {ey0, ny}, {0, nz}}};
        range[3] = {{{0, per_x ? nx : nx + 1}, {0, ny}, {0, nz}}};
        range[4] = {{{0, nx}, {0, per_y ? ny : ny + 1}, {0, nz}}};
        range[5] = {{{0, nx}, {0, ny}, {0, nz + 1}}};

        setup_materials();
        setup_pml();
        setup_port();
        setup_sources();
        setup_probes();
        setup_ntff();
        build_runs();
        n_source_end = static_cast<int>(std::ceil(2.0 * cfg.source.t0() / dt));
        plane_w_e.assign(static_cast<std::size_t>(nz) + 1, 0.0);
        plane_w_h.assign(static_cast<std::size_t>(nz) + 1, 0.0);
    }

    // ---- materials -------------------------------------------------------

    int wrap_cell(int v, int n_cells, bool periodic) const {
        if (v >= 0 && v < n_cells) return v;
        if (!periodic) return -1;
        return (v + n_cells) % n_cells;
    }

    void edge_medium(int comp, int i, int j, int k, double w0, double& eps_r, double& sigma) const {
        int di[2] = {i, i}, dj[2] = {j, j}, dk[2] = {k, k};
        if (comp != 0) di[0] = i - 1;
        if (comp != 1) dj[0] = j - 1;
        if (comp != 2) dk[0] = k - 1;
        double se = 0, ss = 0;
        int count = 0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    if ((comp == 0 && a) || (comp == 1 && b) || (comp == 2 && c)) continue;
                    const int ci = wrap_cell(di[a], nx, per_x);
                    const int cj = wrap_cell(dj[b], ny, per_y);
                    const int ck = wrap_cell(dk[c], nz, false);
                    if (ci < 0 || cj < 0 || ck < 0) continue;
                    const auto& d = g.dielectrics.at(g.cell[g.cell_index(ci, cj, ck)]);
                    se += d.eps_r;
                    ss += d.equivalent_conductivity(w0);
                    ++count;
                }
        eps_r = count ? se / count : 1.0;
        sigma = count ? ss / count : 0.0;
    }

    int sheet_tag(int comp, int i, int j, int k) const {
        if (comp == 0) return g.ex[g.ex_index(i, std::min(j, ny), k)];
        if (comp == 1) return g.ey[g.ey_index(std::min(i, nx), j, k)];
        return 0;
    }

    void setup_materials() {
        const double w0 = two_pi * cfg.loss_frequency;
        for (int comp = 0; comp < 3; ++comp) {
            const Range3& r = range[comp];
            for (int k = r.r[2].lo; k < r.r[2].hi; ++k)
                for (int j = r.r[1].lo; j < r.r[1].hi; ++j)
                    for (int i = r.r[0].lo; i < r.r[0].hi; ++i) {
                        double er, sig;
                        edge_medium(comp, i, j, k, w0, er, sig);
                        const double e = phys::eps0 * er;
                        const std::size_t id = idx(i, j, k);
                        eps[comp][id] = static_cast<float>(er);
                        const int tag = sheet_tag(comp, i, j, k);
                        const SheetMaterial* sheet = tag ? &g.sheets.at(static_cast<std::size_t>(tag - 1)) : nullptr;
                        if (sheet && std::holds_alternative<PecSpec>(*sheet)) {
                            ca[comp][id] = 0.0f;
                            cb[comp][id] = 0.0f;
                            continue;
                        }
                        if (sheet && std::holds_alternative<ConductorSheetSpec>(*sheet)) {
                            const double s = sig + std::get<ConductorSheetSpec>(*sheet).sheet_conductance() / dz;
                            const double a = std::exp(-s * dt / e);
                            ca[comp][id] = static_cast<float>(a);
                            cb[comp][id] = static_cast<float>((1.0 - a) / s);
                            continue;
                        }
                        const double beta = sig * dt / (2.0 * e);
                        ca[comp][id] = static_cast<float>((1.0 - beta) / (1.0 + beta));
                        cb[comp][id] = static_cast<float>(dt / e / (1.0 + beta));
                        if (sheet) {
                            const auto coeffs = drude_ade_coefficients(std::get<GrapheneSpec>(*sheet), dt);
                            AdeEdge a;
                            a.e = &E[comp][id];
                            a.decay = static_cast<float>(coeffs.decay);
                            a.drive = static_cast<float>(coeffs.drive);
                            a.scale = static_cast<float>(dt / e / (1.0 + beta) / dz);
                            ade.push_back(a);
                        }
                    }
        }
    }

    // ---- CPML ------------------------------------------------------------

    void setup_axis_pml(int a, int n_cells, double delta) {
        AxisPml& p = pml[a];
        p.lo = cfg.boundaries[2 * a] == Boundary::cpml;
        p.hi = cfg.boundaries[2 * a + 1] == Boundary::cpml;
        p.n = n_cells;
        if (!p.active()) return;
        const int L = cfg.cpml.layers;
        p.layers = L;
        if (n_cells < 2 * L + 2) {
            std::ostringstream os;
            os << "axis " << "xyz"[a] << " has " << n_cells << " cells, too few for two " << L << "-layer CPMLs";
            throw ValidationError(os.str());
        }
        const double m = cfg.cpml.grading;
        const double smax = cfg.cpml.sigma_max > 0.0 ? cfg.cpml.sigma_max : 0.8 * (m + 1.0) / (phys::eta0 * delta);
        const double d = L * delta;
        auto coeff = [&](double rho, float& b, float& av, float& kf) {
            const double x = rho / d;
            const double xm = std::pow(x, m);
            const double sigma = smax * xm;
            const double kappa = 1.0 + (cfg.cpml.kappa_max - 1.0) * xm;
            const double alpha = cfg.cpml.alpha_max * (1.0 - x);
            const double bb = std::exp(-(sigma / kappa + alpha) * dt / phys::eps0);
            b = static_cast<float>(bb);
            av = sigma > 0.0 ? static_cast<float>(sigma / (sigma * kappa + kappa * kappa * alpha) * (bb - 1.0)) : 0.0f;
            kf = static_cast<float>(1.0 / kappa - 1.0);
        };
        p.bE.assign(n_cells + 1, 1.0f);
        p.aE.assign(n_cells + 1, 0.0f);
        p.kE.assign(n_cells + 1, 0.0f);
        p.bH.assign(n_cells, 1.0f);
        p.aH.assign(n_cells, 0.0f);
        p.kH.assign(n_cells, 0.0f);
        for (int q = 0; q <= n_cells; ++q) {
            double rho = 0;
            if (p.lo && q < L) rho = (L - q) * delta;
            if (p.hi && q > n_cells - L) rho = (q - (n_cells - L)) * delta;
            if (rho > 0) coeff(rho, p.bE[q], p.aE[q], p.kE[q]);
        }
        for (int q = 0; q < n_cells; ++q) {
            double rho = 0;
            if (p.lo && q < L) rho = (L - q - 0.5) * delta;
            if (p.hi && q >= n_cells - L) rho = (q + 0.5 - (n_cells - L)) * delta;
            if (rho > 0) coeff(rho, p.bH[q], p.aH[q], p.kH[q]);
        }
    }

    void add_term(std::vector<PmlTerm>& list, int field, int comp, int src_comp, int axis, double sign) {
        if (!pml[axis].active()) return;
        const bool e_type = field == 0;
        PmlTerm t;
        t.dst = e_type ? E[comp].data() : H[comp].data();
        t.coef = e_type ? cb[comp].data() : nullptr;
        t.coef_const = -ch;
        t.src = e_type ? H[src_comp].data() : E[src_comp].data();
        t.axis = axis;
        const double delta = axis == 0 ? dx : axis == 1 ? dy : dz;
        t.s = static_cast<float>(sign / delta);
        t.e_type = e_type;
        t.range = range[e_type ? comp : comp + 3];
        std::size_t dims[3] = {static_cast<std::size_t>(nx) + 1, static_cast<std::size_t>(ny) + 1,
                               static_cast<std::size_t>(nz) + 1};
        dims[axis] = 2 * static_cast<std::size_t>(pml[axis].layers);
        t.psi.assign(dims[0] * dims[1] * dims[2], 0.0f);
        list.push_back(std::move(t));
    }

    void setup_pml() {
        setup_axis_pml(0, nx, dx);
        setup_axis_pml(1, ny, dy);
        setup_axis_pml(2, nz, dz);
        // E: Ex = dHz/dy - dHy/dz, Ey = dHx/dz - dHz/dx, Ez = dHy/dx - dHx/dy
        add_term(e_terms, 0, 0, 2, 1, +1);
        add_term(e_terms, 0, 0, 1, 2, -1);
        add_term(e_terms, 0, 1, 0, 2, +1);
        add_term(e_terms, 0, 1, 2, 0, -1);
        add_term(e_terms, 0, 2, 1, 0, +1);
        add_term(e_terms, 0, 2, 0, 1, -1);
        // H: Hx = dEz/dy - dEy/dz, Hy = dEx/dz - dEz/dx, Hz = dEy/dx - dEx/dy
        add_term(h_terms, 1, 0, 2, 1, +1);
        add_term(h_terms, 1, 0, 1, 2, -1);
        add_term(h_terms, 1, 1, 0, 2, +1);
        add_term(h_terms, 1, 1, 2, 0, -1);
        add_term(h_terms, 1, 2, 1, 0, +1);
        add_term(h_terms, 1, 2, 0, 1, -1);
    }

    std::size_t psi_index(int axis, int c, int i, int j, int k) const {
        const std::size_t L2 = 2 * static_cast<std::size_t>(pml[axis].layers);
        if (axis == 0) return c + L2 * (j + (static_cast<std::size_t>(ny) + 1) * k);
        if (axis == 1) return i + sy * (c + L2 * k);
        return i + sy * (j + (static_cast<std::size_t>(ny) + 1) * c);
    }

    void apply_pml(PmlTerm& t, int kb, int ke) {
        const AxisPml& p = pml[t.axis];
        const Range& rx = t.range.r[0];
        const Range& ry = t.range.r[1];
        const Range& rz = t.range.r[2];
        const int k_lo = std::max(kb, rz.lo), k_hi = std::min(ke, rz.hi);
        const std::size_t stride = t.axis == 0 ? 1 : t.axis == 1 ? sy : sz;
        auto in = [&](int q) { return t.e_type ? p.node_in(q) : p.half_in(q); };
        auto compact = [&](int q) { return t.e_type ? p.node_compact(q) : p.half_compact(q); };
        const float* B = t.e_type ? p.bE.data() : p.bH.data();
        const float* A = t.e_type ? p.aE.data() : p.aH.data();
        const float* KF = t.e_type ? p.kE.data() : p.kH.data();
        const std::size_t row_n = static_cast<std::size_t>(rx.hi - rx.lo);

        auto row = [&](std::size_t base, std::size_t pbase, float b, float a, float kf) {
            const float* pp = t.e_type ? t.src + base : t.src + base + stride;
            const float* mm = t.e_type ? t.src + base - stride : t.src + base;
            if (t.coef)
                K->cpml_row(row_n, t.dst + base, t.coef + base, t.psi.data() + pbase, pp, mm, t.s, b, a, kf);
            else
                K->cpml_row_const(row_n, t.dst + base, t.coef_const, t.psi.data() + pbase, pp, mm, t.s, b, a, kf);
        };

        if (t.axis == 2) {
            for (int k = k_lo; k < k_hi; ++k) {
                if (!in(k)) continue;
                const int c = compact(k);
                for (int j = ry.lo; j < ry.hi; ++j)
                    row(idx(rx.lo, j, k), psi_index(2, c, rx.lo, j, k), B[k], A[k], KF[k]);
            }
        } else if (t.axis == 1) {
            for (int k = k_lo; k < k_hi; ++k)
                for (int j = ry.lo; j < ry.hi; ++j) {
                    if (!in(j)) continue;
                    row(idx(rx.lo, j, k), psi_index(1, compact(j), rx.lo, j, k), B[j], A[j], KF[j]);
                }
        } else {
            std::vector<int> xs;
            for (int i = rx.lo; i < rx.hi; ++i)
                if (in(i)) xs.push_back(i);
            for (int k = k_lo; k < k_hi; ++k)
                for (int j = ry.lo; j < ry.hi; ++j)
                    for (int i : xs) {
                        const std::size_t id = idx(i, j, k);
                        float& psi = t.psi[psi_index(0, compact(i), i, j, k)];
                        const float pv = t.e_type ? t.src[id] : t.src[id + 1];
                        const float mv = t.e_type ? t.src[id - 1] : t.src[id];
                        const float d = (pv - mv) * t.s;
                        psi = B[i] * psi + A[i] * d;
                        const float c = t.coef ? t.coef[id] : t.coef_const;
                        t.dst[id] = t.dst[id] + c * (KF[i] * d + psi);
                    }
        }
    }

    // ---- port and sources ------------------------------------------------

    void setup_port() {
        if (!g.port) return;
        const GridPort& p = *g.port;
        has_port = true;
        port_series = p.k1 - p.k0;
        port_parallel = static_cast<int>(p.j_nodes.size());
        port_r_edge = cfg.port_impedance * port_parallel / port_series;
        const double w0 = two_pi * cfg.loss_frequency;
        for (int j : p.j_nodes)
            for (int k = p.k0; k < p.k1; ++k) {
                const Range3& r = range[2];
                if (p.i < r.r[0].lo || p.i >= r.r[0].hi || j < r.r[1].lo || j >= r.r[1].hi)
                    throw ValidationError("port edges lie on a boundary face");
                double er, sig;
                edge_medium(2, p.i, j, k, w0, er, sig);
                const double e = phys::eps0 * er;
                const double beta = sig * dt / (2.0 * e) + dt * dz / (2.0 * e * port_r_edge * dx * dy);
                const std::size_t id = idx(p.i, j, k);
                ca[2][id] = static_cast<float>((1.0 - beta) / (1.0 + beta));
                cb[2][id] = static_cast<float>(dt / e / (1.0 + beta));
                SourceEdge s;
                s.e = &E[2][id];
                s.scale = static_cast<float>(dt / e / (1.0 + beta) / (port_r_edge * dx * dy) / port_series);
                port_edges.push_back(s);
                port_sense.push_back(&E[2][id]);
            }
        port_rec.dt = dt;
        port_rec.resistance = cfg.port_impedance;
        port_rec.source = cfg.source;
    }

    double port_voltage() const {
        double v = 0;
        for (const float* e : port_sense) v += *e;
        return -v * dz / port_parallel;
    }

    void setup_sources() {
        if (cfg.plane_source) {
            require(per_x && per_y, "a plane source needs periodic x and y boundaries");
            const int k = cfg.plane_source->k;
            require(k > 0 && k < nz, "plane source plane out of range");
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const std::size_t id = idx(i, j, k);
                    plane_edges.push_back({&E[0][id], static_cast<float>(cb[0][id] / dz)});
                }
        }
        for (const auto& c : cfg.currents) {
            require(c.component >= 0 && c.component < 3, "current component must be 0, 1 or 2");
            const Range3& r = range[c.component];
            require(c.i >= r.r[0].lo && c.i < r.r[0].hi && c.j >= r.r[1].lo && c.j < r.r[1].hi && c.k >= r.r[2].lo &&
                        c.k < r.r[2].hi,
                    "current source edge outside the update region");
            const double area = c.component == 0 ? dy * dz : c.component == 1 ? dx * dz : dx * dy;
            const std::size_t id = idx(c.i, c.j, c.k);
            current_edges.push_back({&E[c.component][id], static_cast<float>(cb[c.component][id] / area)});
        }
        current_field.resize(cfg.currents.size());
        current_value.resize(cfg.currents.size());
    }

    void setup_probes() {
        for (const auto& p : cfg.probes) {
            require(p.component == 0 || p.component == 1, "probe component must be Ex (0) or Ey (1)");
            require(p.k >= 0 && p.k <= nz, "probe plane out of range");
            ProbeRecord r;
            r.probe = p;
            probes.push_back(std::move(r));
        }
    }

    double plane_average(int comp, int k) const {
        const int ni = comp == 1 && !per_x ? nx + 1 : nx;
        const int nj = comp == 0 && !per_y ? ny + 1 : ny;
        double s = 0;
        for (int j = 0; j < nj; ++j)
            for (int i = 0; i < ni; ++i) s += E[comp][idx(i, j, k)];
        return s / (static_cast<double>(ni) * nj);
    }

    // ---- NTFF ------------------------------------------------------------

    void setup_ntff() {
        if (cfg.ntff_frequencies.empty()) return;
        for (auto b : cfg.boundaries)
            require(b == Boundary::cpml, "the NTFF box needs CPML on every face");
        const int L = cfg.cpml.layers, gap = cfg.ntff_gap;
        const int i0 = L + gap, i1 = nx - L - gap, j0 = L + gap, j1 = ny - L - gap, k0 = L + gap, k1 = nz - L - gap;
        require(i1 > i0 + 1 && j1 > j0 + 1 && k1 > k0 + 1, "grid too small for an NTFF box inside the CPML");
        ntff_box = {i0, i1, j0, j1, k0, k1};

        // the surface must enclose every material, sheet and port strictly
        auto inside_cell = [&](int i, int j, int k) { return i >= i0 && i < i1 && j >= j0 && j < j1 && k >= k0 && k < k1; };
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    if (g.cell[g.cell_index(i, j, k)] != 0 && !inside_cell(i, j, k))
                        throw ValidationError("NTFF surface intersects a dielectric region; add padding");
        for (int k = 0; k <= nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    if (g.zface[g.zface_index(i, j, k)] != 0 && !(i >= i0 && i < i1 && j >= j0 && j < j1 && k > k0 && k < k1))
                        throw ValidationError("NTFF surface intersects a conducting sheet; add padding");
        if (g.port && !(g.port->i > i0 && g.port->i < i1 && g.port->k0 > k0 && g.port->k1 < k1))
            throw ValidationError("NTFF surface intersects the port");
        for (const auto& c : cfg.currents)
            require(c.i > i0 && c.i < i1 && c.j > j0 && c.j < j1 && c.k > k0 && c.k < k1,
                    "NTFF surface must enclose the current sources");

        ntff_freqs = cfg.ntff_frequencies;
        const double f_hi =
            std::max(*std::max_element(ntff_freqs.begin(), ntff_freqs.end()), cfg.source.f0 + 1.5 * cfg.source.half_band);
        ntff_stride = std::max(1, static_cast<int>(std::floor(1.0 / (20.0 * f_hi * dt))));

        auto make = [&](int axis, int side, int pos, int nu, int nv, double u0, double du, double v0, double dv) {
            FaceAcc a;
            a.face.axis = axis;
            a.face.side = side;
            a.face.position = axis == 0 ? xn(pos) : axis == 1 ? yn(pos) : zn(pos);
            a.face.nu = nu;
            a.face.nv = nv;
            a.face.u0 = u0;
            a.face.du = du;
            a.face.v0 = v0;
            a.face.dv = dv;
            const std::size_t m = static_cast<std::size_t>(nu) * nv;
            for (auto& s : a.scratch) s.assign(m, 0.0f);
            a.re.assign(ntff_freqs.size(), std::vector<std::vector<double>>(4, std::vector<double>(m, 0.0)));
            a.im = a.re;
            ntff.push_back(std::move(a));
        };
        for (int side : {-1, 1}) {
            make(0, side, side < 0 ? i0 : i1, j1 - j0, k1 - k0, yn(j0) + dy / 2, dy, zn(k0) + dz / 2, dz);
            make(1, side, side < 0 ? j0 : j1, k1 - k0, i1 - i0, zn(k0) + dz / 2, dz, xn(i0) + dx / 2, dx);
            make(2, side, side < 0 ? k0 : k1, i1 - i0, j1 - j0, xn(i0) + dx / 2, dx, yn(j0) + dy / 2, dy);
        }
    }

    void sample_face(FaceAcc& a) {
        const auto [i0, i1, j0, j1, k0, k1] = ntff_box;
        const NtffFace& f = a.face;
        const int pos = f.axis == 0 ? (f.side < 0 ? i0 : i1) : f.axis == 1 ? (f.side < 0 ? j0 : j1) : (f.side < 0 ? k0 : k1);
        const float* Ex = E[0].data();
        const float* Ey = E[1].data();
        const float* Ez = E[2].data();
        const float* Hx = H[0].data();
        const float* Hy = H[1].data();
        const float* Hz = H[2].data();
        if (f.axis == 2) {
            const int k = pos;
            for (int j = j0; j < j1; ++j)
                for (int i = i0; i < i1; ++i) {
                    const std::size_t s = static_cast<std::size_t>(i - i0) + static_cast<std::size_t>(f.nu) * (j - j0);
                    const std::size_t c = idx(i, j, k);
                    a.scratch[0][s] = 0.5f * (Ex[c] + Ex[c + sy]);
                    a.scratch[1][s] = 0.5f * (Ey[c] + Ey[c + 1]);
                    a.scratch[2][s] = 0.25f * (Hx[c - sz] + Hx[c + 1 - sz] + Hx[c] + Hx[c + 1]);
                    a.scratch[3][s] = 0.25f * (Hy[c - sz] + Hy[c + sy - sz] + Hy[c] + Hy[c + sy]);
                }
        } else if (f.axis == 0) {
            const int i = pos;
            for (int k = k0; k < k1; ++k)
                for (int j = j0; j < j1; ++j) {
                    const std::size_t s = static_cast<std::size_t>(j - j0) + static_cast<std::size_t>(f.nu) * (k - k0);
                    const std::size_t c = idx(i, j, k);
                    a.scratch[0][s] = 0.5f * (Ey[c] + Ey[c + sz]);
                    a.scratch[1][s] = 0.5f * (Ez[c] + Ez[c + sy]);
                    a.scratch[2][s] = 0.25f * (Hy[c - 1] + Hy[c] + Hy[c - 1 + sy] + Hy[c + sy]);
                    a.scratch[3][s] = 0.25f * (Hz[c - 1] + Hz[c] + Hz[c - 1 + sz] + Hz[c + sz]);
                }
        } else {
            const int j = pos;
            for (int i = i0; i < i1; ++i)
                for (int k = k0; k < k1; ++k) {
                    const std::size_t s = static_cast<std::size_t>(k - k0) + static_cast<std::size_t>(f.nu) * (i - i0);
                    const std::size_t c = idx(i, j, k);
                    a.scratch[0][s] = 0.5f * (Ez[c] + Ez[c + 1]);
                    a.scratch[1][s] = 0.5f * (Ex[c] + Ex[c + sz]);
                    a.scratch[2][s] = 0.25f * (Hz[c - sy] + Hz[c] + Hz[c - sy + sz] + Hz[c + sz]);
                    a.scratch[3][s] = 0.25f * (Hx[c - sy] + Hx[c] + Hx[c + 1 - sy] + Hx[c + 1]);
                }
        }
    }

    void accumulate_ntff() {
        const double te = (n + 1) * dt, th = (n + 0.5) * dt;
        pool.run(ntff.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t q = b; q < e; ++q) {
                FaceAcc& a = ntff[q];
                sample_face(a);
                const std::size_t m = a.scratch[0].size();
                for (std::size_t fi = 0; fi < ntff_freqs.size(); ++fi) {
                    const double w = two_pi * ntff_freqs[fi];
                    const double ce = std::cos(w * te), se = std::sin(w * te);
                    const double chh = std::cos(w * th), shh = std::sin(w * th);
                    for (int c = 0; c < 4; ++c) {
                        const bool is_e = c < 2;
                        K->dft_accumulate(m, a.re[fi][c].data(), a.im[fi][c].data(), a.scratch[c].data(),
                                          is_e ? ce : chh, is_e ? se : shh);
                    }
                }
            }
        });
    }

    // ---- updates -----------------------------------------------------------

    // Rows of E split into runs of constant (ca, cb); the bulk is mostly one run per row.
    struct Run {
        int i0, len;
        float ca, cb;
    };
    std::vector<Run> runs[3];
    std::vector<std::uint32_t> row_start[3];  // per (j, k) row, size (ny + 1)(nz + 1) + 1

    void build_runs() {
        const std::size_t rows = static_cast<std::size_t>(ny + 1) * static_cast<std::size_t>(nz + 1);
        for (int c = 0; c < 3; ++c) {
            runs[c].clear();
            row_start[c].assign(rows + 1, 0);
            const Range3& r = range[c];
            for (int k = 0; k <= nz; ++k)
                for (int j = 0; j <= ny; ++j) {
                    const std::size_t row = static_cast<std::size_t>(j) + static_cast<std::size_t>(ny + 1) * k;
                    row_start[c][row] = static_cast<std::uint32_t>(runs[c].size());
                    if (k < r.r[2].lo || k >= r.r[2].hi || j < r.r[1].lo || j >= r.r[1].hi) continue;
                    const std::size_t b = idx(0, j, k);
                    int i = r.r[0].lo;
                    while (i < r.r[0].hi) {
                        const float a0 = ca[c][b + i], b0 = cb[c][b + i];
                        int e = i + 1;
                        while (e < r.r[0].hi && ca[c][b + e] == a0 && cb[c][b + e] == b0) ++e;
                        runs[c].push_back({i, e - i, a0, b0});
                        i = e;
                    }
                }
            row_start[c][rows] = static_cast<std::uint32_t>(runs[c].size());
            require(runs[c].size() < 0xffffffffu, "too many coefficient runs");
        }
    }

    void h_rows(int k, int j) {
        float* Hx = H[0].data();
        float* Hy = H[1].data();
        float* Hz = H[2].data();
        const float* Ex = E[0].data();
        const float* Ey = E[1].data();
        const float* Ez = E[2].data();
        const std::size_t b = idx(0, j, k);
        if (j < range[3].r[1].hi && k < range[3].r[2].hi)
            K->curl_row_const(static_cast<std::size_t>(range[3].r[0].hi), Hx + b, ch, Ez + b + sy, Ez + b, idy_,
                              Ey + b + sz, Ey + b, idz_);
        if (j < range[4].r[1].hi && k < range[4].r[2].hi)
            K->curl_row_const(static_cast<std::size_t>(nx), Hy + b, ch, Ex + b + sz, Ex + b, idz_, Ez + b + 1, Ez + b,
                              idx_);
        if (j < range[5].r[1].hi)
            K->curl_row_const(static_cast<std::size_t>(nx), Hz + b, ch, Ey + b + 1, Ey + b, idx_, Ex + b + sy, Ex + b,
                              idy_);
    }

    void update_h(int kb, int ke) {
        for (int k = kb; k < ke; ++k)
            for (int j = 0; j <= ny; ++j) h_rows(k, j);
        for (auto& t : h_terms) apply_pml(t, kb, ke);
    }

    void e_rows(int k, int j) {
        float* Ex = E[0].data();
        float* Ey = E[1].data();
        float* Ez = E[2].data();
        const float* Hx = H[0].data();
        const float* Hy = H[1].data();
        const float* Hz = H[2].data();
        const std::size_t xw = static_cast<std::size_t>(nx) - 1;  // wrap offset from i = 0 to i = nx - 1
        const std::size_t row = static_cast<std::size_t>(j) + static_cast<std::size_t>(ny + 1) * k;
        const std::size_t b = idx(0, j, k);
        const std::size_t bm = idx(0, j == 0 ? ny - 1 : j - 1, k);
        for (std::uint32_t q = row_start[0][row]; q < row_start[0][row + 1]; ++q) {
            const Run& u = runs[0][q];
            const std::size_t o = b + u.i0;
            K->curl_run(u.len, Ex + o, u.ca, u.cb, Hz + o, Hz + bm + u.i0, idy_, Hy + o, Hy + o - sz, idz_);
        }
        for (std::uint32_t q = row_start[1][row]; q < row_start[1][row + 1]; ++q) {
            Run u = runs[1][q];
            if (u.i0 == 0) {
                const float d1 = (Hx[b] - Hx[b - sz]) * idz_;
                const float d2 = (Hz[b] - Hz[b + xw]) * idx_;
                Ey[b] = u.ca * Ey[b] + u.cb * (d1 - d2);
                u.i0 = 1;
                if (--u.len == 0) continue;
            }
            const std::size_t o = b + u.i0;
            K->curl_run(u.len, Ey + o, u.ca, u.cb, Hx + o, Hx + o - sz, idz_, Hz + o, Hz + o - 1, idx_);
        }
        for (std::uint32_t q = row_start[2][row]; q < row_start[2][row + 1]; ++q) {
            Run u = runs[2][q];
            if (u.i0 == 0) {
                const float d1 = (Hy[b] - Hy[b + xw]) * idx_;
                const float d2 = (Hx[b] - Hx[bm]) * idy_;
                Ez[b] = u.ca * Ez[b] + u.cb * (d1 - d2);
                u.i0 = 1;
                if (--u.len == 0) continue;
            }
            const std::size_t o = b + u.i0;
            K->curl_run(u.len, Ez + o, u.ca, u.cb, Hy + o, Hy + o - 1, idx_, Hx + o, Hx + bm + u.i0, idy_);
        }
    }

    void update_e(int kb, int ke) {
        for (int k = kb; k < ke; ++k)
            for (int j = 0; j <= ny; ++j) e_rows(k, j);
        for (auto& t : e_terms) apply_pml(t, kb, ke);
    }

    void copy_periodic_e() {
        if (per_x)
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k <= nz; ++k)
                    for (int j = 0; j <= ny; ++j) E[c][idx(nx, j, k)] = E[c][idx(0, j, k)];
        if (per_y)
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k <= nz; ++k)
                    std::copy_n(E[c].begin() + static_cast<std::ptrdiff_t>(idx(0, 0, k)), sy,
                                E[c].begin() + static_cast<std::ptrdiff_t>(idx(0, ny, k)));
    }

    // ---- energy -------------------------------------------------------------

    double compute_energy() {
        const int ux = per_x ? nx : nx + 1, uy = per_y ? ny : ny + 1;
        const int lim[6][3] = {{nx, uy, nz + 1}, {ux, ny, nz + 1}, {ux, uy, nz}, {ux, ny, nz}, {nx, uy, nz}, {nx, ny, nz + 1}};
        pool.run(static_cast<std::size_t>(nz) + 1, [&](std::size_t kb, std::size_t ke) {
            for (std::size_t kk = kb; kk < ke; ++kk) {
                const int k = static_cast<int>(kk);
                double we = 0, wh = 0;
                for (int c = 0; c < 3; ++c) {
                    if (k >= lim[c][2]) continue;
                    for (int j = 0; j < lim[c][1]; ++j) {
                        const std::size_t b = idx(0, j, k);
                        const float* e = E[c].data() + b;
                        const float* er = eps[c].data() + b;
                        for (int i = 0; i < lim[c][0]; ++i) we += static_cast<double>(er[i]) * e[i] * e[i];
                    }
                }
                for (int c = 0; c < 3; ++c) {
                    if (k >= lim[c + 3][2]) continue;
                    for (int j = 0; j < lim[c + 3][1]; ++j) {
                        const std::size_t b = idx(0, j, k);
                        const float* h = H[c].data() + b;
                        const float* ho = Hold[c].data() + b;
                        for (int i = 0; i < lim[c + 3][0]; ++i) wh += static_cast<double>(ho[i]) * h[i];
                    }
                }
                plane_w_e[kk] = we;
                plane_w_h[kk] = wh;
            }
        });
        double we = 0, wh = 0;
        for (int k = 0; k <= nz; ++k) {
            we += plane_w_e[static_cast<std::size_t>(k)];
            wh += plane_w_h[static_cast<std::size_t>(k)];
        }
        const double dv = dx * dy * dz;
        return 0.5 * dv * (phys::eps0 * we + phys::mu0 * wh);
    }

    // ---- stepping -----------------------------------------------------------

    void step() {
        const double t_half = (n + 0.5) * dt;
        const bool energy_step = n % cfg.energy_stride == 0;
        const std::size_t planes = static_cast<std::size_t>(nz) + 1;

        if (energy_step)
            for (int c = 0; c < 3; ++c) std::copy(H[c].begin(), H[c].end(), Hold[c].begin());
        pool.run(planes, [&](std::size_t b, std::size_t e) { update_h(static_cast<int>(b), static_cast<int>(e)); });
        if (energy_step) {
            last_energy = compute_energy();
            if (!std::isfinite(last_energy)) {
                std::ostringstream os;
                os << "FDTD instability: non-finite field energy at step " << n;
                throw NumericalError(os.str());
            }
            peak_energy = std::max(peak_energy, last_energy);
            energy_series.push_back(last_energy);
        }

        for (auto& a : ade) a.j = a.decay * a.j + a.drive * *a.e;
        const double v_before = has_port ? port_voltage() : 0.0;
        std::vector<float> cur_before(current_edges.size());
        for (std::size_t q = 0; q < current_edges.size(); ++q) cur_before[q] = *current_edges[q].e;

        pool.run(planes, [&](std::size_t b, std::size_t e) { update_e(static_cast<int>(b), static_cast<int>(e)); });

        for (auto& a : ade) *a.e -= a.scale * a.j;
        const double src = cfg.source.value(t_half);
        if (has_port) {
            const float vs_edge = static_cast<float>(src);
            for (auto& p : port_edges) *p.e -= p.scale * vs_edge;
        }
        for (auto& p : plane_edges) *p.e -= p.scale * static_cast<float>(src);
        for (auto& p : current_edges) *p.e -= p.scale * static_cast<float>(src);
        copy_periodic_e();

        if (has_port) {
            const double v = 0.5 * (v_before + port_voltage());
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "FDTD instability: non-finite port voltage at step " << n;
                throw NumericalError(os.str());
            }
            port_rec.voltage.push_back(v);
            port_rec.current.push_back((src - v) / cfg.port_impedance);
            port_rec.source_voltage.push_back(src);
        }
        for (std::size_t q = 0; q < current_edges.size(); ++q) {
            current_field[q].push_back(0.5 * (static_cast<double>(cur_before[q]) + *current_edges[q].e));
            current_value[q].push_back(src);
        }
        for (auto& p : probes) p.series.push_back(plane_average(p.probe.component, p.probe.k));
        if (!ntff.empty() && (n + 1) % ntff_stride == 0) accumulate_ntff();
        ++n;
    }

    bool should_stop() {
        if (n >= cfg.max_steps) return true;
        if (n < std::max(n_source_end, cfg.min_steps)) return false;
        if (n % cfg.energy_stride != 1 && cfg.energy_stride > 1) return false;
        if (peak_energy > 0.0 && last_energy < cfg.energy_threshold * peak_energy) {
            converged = true;
            return true;
        }
        return false;
    }

    RunResult result() const {
        RunResult r;
        r.dt = dt;
        r.steps = n;
        r.converged = converged;
        r.peak_energy = peak_energy;
        r.final_energy = last_energy;
        r.energy = energy_series;
        r.energy_stride = cfg.energy_stride;
        r.cells = g.cell_count();
        r.isa = K->isa;
        if (has_port) r.port = port_rec;
        for (const auto& p : probes) {
            ProbeRecord pr = p;
            pr.dft.assign(cfg.band.count, cplx{});
            for (std::size_t fi = 0; fi < cfg.band.count; ++fi) {
                const double w = two_pi * cfg.band[fi];
                cplx acc{};
                for (std::size_t s = 0; s < p.series.size(); ++s)
                    acc += p.series[s] * std::polar(1.0, -w * (static_cast<double>(s) + 1.0) * dt);
                pr.dft[fi] = acc * dt;
            }
            if (!cfg.record_series) pr.series.clear();
            r.probes.push_back(std::move(pr));
        }
        for (std::size_t q = 0; q < cfg.currents.size(); ++q) {
            CurrentRecord c;
            c.where = cfg.currents[q];
            c.field_dft = half_step_dft(current_field[q], dt, cfg.band);
            c.current_dft = half_step_dft(current_value[q], dt, cfg.band);
            r.currents.push_back(std::move(c));
        }
        if (!ntff.empty()) {
            NtffSurface s;
            s.frequencies = ntff_freqs;
            const auto [i0, i1, j0, j1, k0, k1] = ntff_box;
            s.center = {0.5 * (xn(i0) + xn(i1)), 0.5 * (yn(j0) + yn(j1)), 0.5 * (zn(k0) + zn(k1))};
            const double w = ntff_stride * dt;
            for (const auto& a : ntff) {
                NtffFace f = a.face;
                const std::size_t m = a.scratch[0].size();
                f.fields.assign(ntff_freqs.size(), std::vector<cplx>(4 * m));
                for (std::size_t fi = 0; fi < ntff_freqs.size(); ++fi)
                    for (std::size_t sidx = 0; sidx < m; ++sidx)
                        for (int c = 0; c < 4; ++c)
                            f.fields[fi][4 * sidx + c] = cplx(a.re[fi][c][sidx], a.im[fi][c][sidx]) * w;
                s.faces.push_back(std::move(f));
            }
            r.ntff = std::move(s);
        }
        return r;
    }

    double max_abs() const {
        float m = 0;
        for (int c = 0; c < 3; ++c) {
            for (float v : E[c]) m = std::max(m, std::fabs(v));
            for (float v : H[c]) m = std::max(m, std::fabs(v));
        }
        return m;
    }
};

Solver::Solver(const VoxelGrid& grid, const SimulationConfig& cfg) : impl_(std::make_unique<Impl>(grid, cfg)) {}
Solver::~Solver() = default;

void Solver::step() { impl_->step(); }
int Solver::steps_taken() const { return impl_->n; }
double Solver::dt() const { return impl_->dt; }
double Solver::max_abs_field() const { return impl_->max_abs(); }
RunResult Solver::result() const { return impl_->result(); }

double Solver::energy_now() { return impl_->last_energy; }

RunResult Solver::run() {
    const auto t0 = std::chrono::steady_clock::now();
    while (!impl_->should_stop()) impl_->step();
    RunResult r = impl_->result();
    r.wall_seconds = seconds_since(t0);
    return r;
}

RunResult simulate(const VoxelGrid& grid, const SimulationConfig& cfg) { return Solver(grid, cfg).run(); }

}  // namespace gprs::fdtd
