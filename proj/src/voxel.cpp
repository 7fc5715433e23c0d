#include "gprs/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gprs/error.hpp"
#include "gprs/parallel.hpp"

namespace gprs {

using namespace geom;

double VoxelGrid::sheet_area(int tag) const {
    std::size_t count = 0;
    for (auto t : zface)
        if (t != 0 && (tag < 0 || t == tag)) ++count;
    return static_cast<double>(count) * dx * dy;
}

int VoxelGrid::plane_of(double z) const {
    const double k = (z - z0) / dz;
    const double kr = std::round(k);
    if (std::fabs(k - kr) > 1e-6 || kr < 0 || kr > nz) return -1;
    return static_cast<int>(kr);
}

bool VoxelGrid::operator==(const VoxelGrid& o) const {
    auto same_port = [&] {
        if (port.has_value() != o.port.has_value()) return false;
        if (!port) return true;
        return port->i == o.port->i && port->j_nodes == o.port->j_nodes && port->k0 == o.port->k0 &&
               port->k1 == o.port->k1;
    };
    return dx == o.dx && dy == o.dy && dz == o.dz && nx == o.nx && ny == o.ny && nz == o.nz && x0 == o.x0 &&
           y0 == o.y0 && z0 == o.z0 && cell == o.cell && zface == o.zface && ex == o.ex && ey == o.ey && same_port();
}

namespace {

struct Rasterizer {
    double dx, dy, tol;

    bool contains(const Shape& s, double x, double y) const {
        if (const auto* r = std::get_if<Rect>(&s)) {
            double x0 = r->x0, x1 = r->x1, y0 = r->y0, y1 = r->y1;
            if (r->widen) {
                if (x1 - x0 < dx) {
                    const double c = 0.5 * (x0 + x1);
                    x0 = c - dx / 2;
                    x1 = c + dx / 2;
                }
                if (y1 - y0 < dy) {
                    const double c = 0.5 * (y0 + y1);
                    y0 = c - dy / 2;
                    y1 = c + dy / 2;
                }
            }
            return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
        }
        const auto& t = std::get<Triangle>(s);
        const double h = t.height();
        const double cx = t.centroid.x, cy = t.centroid.y;
        const double vx[3] = {cx - t.side / 2, cx + t.side / 2, cx};
        const double vy[3] = {cy - h / 3, cy - h / 3, cy + 2 * h / 3};
        for (int e = 0; e < 3; ++e) {
            const int n = (e + 1) % 3;
            const double ex = vx[n] - vx[e], ey = vy[n] - vy[e];
            const double len = std::hypot(ex, ey);
            const double cross = ex * (y - vy[e]) - ey * (x - vx[e]);
            if (cross < -tol * len) return false;
        }
        return true;
    }

    bool covered(const SheetLayer& l, double x, double y) const {
        bool on = false;
        for (const auto& op : l.ops)
            if (contains(op.shape, x, y)) on = !op.subtract;
        return on;
    }
};

double snap_down(double v, double step, double offset) { return std::floor((v - offset) / step + 1e-9) * step + offset; }

void check_features(const Scene& s, const VoxelOptions& o) {
    for (const auto& f : s.features) {
        const double cell = f.vertical ? o.dz : std::min(o.dx, o.dy);
        if (f.size < cell * (1 - 1e-9) && !f.widenable) {
            std::ostringstream os;
            os << "feature '" << f.name << "' (" << f.size * 1e6 << " um) is thinner than one cell (" << cell * 1e6
               << " um) and cannot be represented";
            throw ValidationError(os.str());
        }
    }
}

}  // namespace

void derive_edge_tags(VoxelGrid& g) {
    for (int k = 0; k <= g.nz; ++k) {
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const std::uint8_t a = j > 0 ? g.zface[g.zface_index(i, j - 1, k)] : 0;
                const std::uint8_t c = j < g.ny ? g.zface[g.zface_index(i, j, k)] : 0;
                g.ex[g.ex_index(i, j, k)] = std::max(a, c);
            }
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                const std::uint8_t a = i > 0 ? g.zface[g.zface_index(i - 1, j, k)] : 0;
                const std::uint8_t c = i < g.nx ? g.zface[g.zface_index(i, j, k)] : 0;
                g.ey[g.ey_index(i, j, k)] = std::max(a, c);
            }
    }
}

VoxelGrid voxelize(const Scene& scene, const VoxelOptions& o) {
    require_positive(o.dx, "dx");
    require_positive(o.dy, "dy");
    require_positive(o.dz, "dz");
    require(o.padding_xy >= 0 && o.padding_z >= 0, "padding must be >= 0");
    check_features(scene, o);
    require(scene.dielectrics.size() < 256 && scene.sheets.size() < 255, "too many materials for 8-bit tags");

    VoxelGrid g;
    g.dx = o.dx;
    g.dy = o.dy;
    g.dz = o.dz;
    g.dielectrics = scene.dielectrics;
    g.sheets = scene.sheets;

    const Box b = scene.bounds().value_or(Box{});
    // x nodes on multiples of dx, y faces centred on multiples of dy, z nodes on multiples of dz
    g.x0 = snap_down(b.x0 - o.padding_xy, o.dx, 0.0);
    g.y0 = snap_down(b.y0 - o.padding_xy, o.dy, o.centre_y_faces ? 0.5 * o.dy : 0.0);
    g.z0 = snap_down(b.z0 - o.padding_z, o.dz, 0.0);
    g.nx = std::max(1, static_cast<int>(std::ceil((b.x1 + o.padding_xy - g.x0) / o.dx - 1e-9)));
    g.ny = std::max(1, static_cast<int>(std::ceil((b.y1 + o.padding_xy - g.y0) / o.dy - 1e-9)));
    g.nz = std::max(1, static_cast<int>(std::ceil((b.z1 + o.padding_z - g.z0) / o.dz - 1e-9)));

    g.cell.assign(g.cell_count(), 0);
    g.zface.assign(static_cast<std::size_t>(g.nx) * g.ny * (g.nz + 1), 0);
    g.ex.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1) * (g.nz + 1), 0);
    g.ey.assign(static_cast<std::size_t>(g.nx + 1) * g.ny * (g.nz + 1), 0);

    const Rasterizer rz{o.dx, o.dy, 1e-9 * std::min(o.dx, o.dy)};
    const double ztol = 1e-9 * o.dz;

    parallel_for(static_cast<std::size_t>(g.nz), o.workers, [&](std::size_t kb, std::size_t ke) {
        for (int k = static_cast<int>(kb); k < static_cast<int>(ke); ++k) {
            const double zc = g.node_z(k) + 0.5 * o.dz;
            for (const auto& blk : scene.blocks) {
                if (zc < blk.box.z0 - ztol || zc > blk.box.z1 + ztol) continue;
                for (int j = 0; j < g.ny; ++j) {
                    const double yc = g.node_y(j) + 0.5 * o.dy;
                    if (yc < blk.box.y0 - rz.tol || yc > blk.box.y1 + rz.tol) continue;
                    for (int i = 0; i < g.nx; ++i) {
                        const double xc = g.node_x(i) + 0.5 * o.dx;
                        if (xc >= blk.box.x0 - rz.tol && xc <= blk.box.x1 + rz.tol)
                            g.cell[g.cell_index(i, j, k)] = static_cast<std::uint8_t>(blk.material);
                    }
                }
            }
        }
    });

    for (const auto& layer : scene.layers) {
        const int k = g.plane_of(layer.z);
        if (k < 0) {
            std::ostringstream os;
            os << "sheet '" << layer.name << "' at z = " << layer.z * 1e6 << " um does not lie on a grid plane (dz = "
               << o.dz * 1e6 << " um)";
            throw ValidationError(os.str());
        }
        parallel_for(static_cast<std::size_t>(g.ny), o.workers, [&](std::size_t jb, std::size_t je) {
            for (int j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
                const double yc = g.node_y(j) + 0.5 * o.dy;
                for (int i = 0; i < g.nx; ++i) {
                    const double xc = g.node_x(i) + 0.5 * o.dx;
                    if (rz.covered(layer, xc, yc))
                        g.zface[g.zface_index(i, j, k)] = static_cast<std::uint8_t>(layer.material);
                }
            }
        });
    }

    derive_edge_tags(g);

    if (scene.port) {
        const auto& p = *scene.port;
        GridPort gp;
        const double fi = (p.x - g.x0) / g.dx;
        gp.i = static_cast<int>(std::lround(fi));
        if (std::fabs(fi - gp.i) > 1e-6) throw ValidationError("port x position is not on a grid node");
        const double half = 0.5 * std::max(p.width, g.dy) + rz.tol;
        for (int j = 0; j <= g.ny; ++j)
            if (std::fabs(g.node_y(j) - p.y) <= half) gp.j_nodes.push_back(j);
        gp.k0 = g.plane_of(p.z0);
        gp.k1 = g.plane_of(p.z1);
        if (gp.j_nodes.empty() || gp.k0 < 0 || gp.k1 <= gp.k0) throw ValidationError("port does not map onto grid edges");
        g.port = gp;
    }
    return g;
}

VoxelGrid make_vacuum_grid(int nx, int ny, int nz, double dx, double dy, double dz) {
    require(nx > 0 && ny > 0 && nz > 0, "grid dimensions must be positive");
    require_positive(dx, "dx");
    require_positive(dy, "dy");
    require_positive(dz, "dz");
    VoxelGrid g;
    g.dx = dx;
    g.dy = dy;
    g.dz = dz;
    g.nx = nx;
    g.ny = ny;
    g.nz = nz;
    g.cell.assign(g.cell_count(), 0);
    g.zface.assign(static_cast<std::size_t>(nx) * ny * (nz + 1), 0);
    g.ex.assign(static_cast<std::size_t>(nx) * (ny + 1) * (nz + 1), 0);
    g.ey.assign(static_cast<std::size_t>(nx + 1) * ny * (nz + 1), 0);
    return g;
}

VoxelGrid voxelize(const Scene& scene, double resolution, VoxelOptions o) {
    require_finite(resolution, "resolution");
    require(resolution >= 2.0, "resolution must be >= 2 cells per smallest feature");
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& f : scene.features)
        if (!f.vertical && !f.widenable) smallest = std::min(smallest, f.size);
    if (!std::isfinite(smallest)) {
        if (const auto b = scene.bounds()) smallest = std::max(b->x1 - b->x0, b->y1 - b->y0);
        if (!(smallest > 0)) smallest = o.dx * resolution;
    }
    o.dx = o.dy = smallest / resolution;
    return voxelize(scene, o);
}

namespace {

void write_sheet(std::ostream& os, const SheetMaterial& m) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GrapheneSpec>)
                os << "graphene " << s.mu_c_eV << ' ' << s.tau << ' ' << s.temperature;
            else if constexpr (std::is_same_v<T, ConductorSheetSpec>)
                os << "conductor " << s.sigma_dc << ' ' << s.thickness;
            else
                os << "pec";
        },
        m);
}

}  // namespace

void write_voxel_dump(std::ostream& os, const VoxelGrid& g) {
    os << std::setprecision(17);
    os << "GPRS-VOXEL 1\n";
    os << "dims " << g.nx << ' ' << g.ny << ' ' << g.nz << '\n';
    os << "spacing " << g.dx << ' ' << g.dy << ' ' << g.dz << '\n';
    os << "origin " << g.x0 << ' ' << g.y0 << ' ' << g.z0 << '\n';
    for (std::size_t i = 0; i < g.dielectrics.size(); ++i)
        os << "dielectric " << i << ' ' << g.dielectrics[i].eps_r << ' ' << g.dielectrics[i].tan_delta << '\n';
    for (std::size_t i = 0; i < g.sheets.size(); ++i) {
        os << "sheet " << i + 1 << ' ';
        write_sheet(os, g.sheets[i]);
        os << '\n';
    }
    if (g.port) {
        os << "port " << g.port->i << ' ' << g.port->k0 << ' ' << g.port->k1;
        for (int j : g.port->j_nodes) os << ' ' << j;
        os << '\n';
    }
    os << "arrays cell " << g.cell.size() << " zface " << g.zface.size() << " ex " << g.ex.size() << " ey "
       << g.ey.size() << '\n';
    os << "END\n";
    for (const auto* a : {&g.cell, &g.zface, &g.ex, &g.ey})
        os.write(reinterpret_cast<const char*>(a->data()), static_cast<std::streamsize>(a->size()));
    if (!os) throw IoError("failed writing voxel dump");
}

VoxelGrid read_voxel_dump(std::istream& is) {
    VoxelGrid g;
    g.dielectrics.clear();
    std::string line;
    if (!std::getline(is, line) || line != "GPRS-VOXEL 1") throw IoError("voxel dump: bad magic");
    std::size_t sizes[4] = {0, 0, 0, 0};
    while (std::getline(is, line) && line != "END") {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dims") ls >> g.nx >> g.ny >> g.nz;
        else if (key == "spacing") ls >> g.dx >> g.dy >> g.dz;
        else if (key == "origin") ls >> g.x0 >> g.y0 >> g.z0;
        else if (key == "dielectric") {
            std::size_t idx;
            DielectricSpec d;
            ls >> idx >> d.eps_r >> d.tan_delta;
            g.dielectrics.push_back(d);
        } else if (key == "sheet") {
            std::size_t tag;
            std::string kind;
            ls >> tag >> kind;
            if (kind == "graphene") {
                GrapheneSpec s;
                ls >> s.mu_c_eV >> s.tau >> s.temperature;
                g.sheets.emplace_back(s);
            } else if (kind == "conductor") {
                ConductorSheetSpec s;
                ls >> s.sigma_dc >> s.thickness;
                g.sheets.emplace_back(s);
            } else
                g.sheets.emplace_back(PecSpec{});
        } else if (key == "port") {
            GridPort p;
            ls >> p.i >> p.k0 >> p.k1;
            int j;
            while (ls >> j) p.j_nodes.push_back(j);
            g.port = p;
        } else if (key == "arrays") {
            std::string name;
            for (auto& s : sizes) ls >> name >> s;
        } else
            throw IoError("voxel dump: unknown header key '" + key + "'");
        if (ls.fail() && key != "port") throw IoError("voxel dump: malformed line '" + line + "'");
    }
    if (line != "END") throw IoError("voxel dump: missing END");
    for (auto [a, n] : {std::pair{&g.cell, sizes[0]}, {&g.zface, sizes[1]}, {&g.ex, sizes[2]}, {&g.ey, sizes[3]}}) {
        a->resize(n);
        is.read(reinterpret_cast<char*>(a->data()), static_cast<std::streamsize>(n));
    }
    if (!is) throw IoError("voxel dump: truncated tag arrays");
    return g;
}

}  // namespace gprs
