#include "gprs/fdtd/scenes.hpp"

#include <algorithm>
#include <cmath>

#include "gprs/error.hpp"

namespace gprs::fdtd {

namespace {

int cells_of(double length, double step, const char* what) {
    const double r = length / step;
    const long q = std::lround(r);
    if (q <= 0 || std::fabs(r - static_cast<double>(q)) > 1e-6)
        throw ValidationError(std::string(what) + " is not a whole number of cells");
    return static_cast<int>(q);
}

}  // namespace

Column slab_column(const DielectricSpec& slab, double thickness, double dz, double air, int cpml_layers,
                   int lateral_cells) {
    slab.validate();
    require(lateral_cells >= 1, "lateral cell count must be >= 1");
    const int ns = cells_of(thickness, dz, "slab thickness");
    const int na = cells_of(air, dz, "air padding");
    const int nz = 2 * (na + cpml_layers) + ns;
    Column c;
    c.grid = make_vacuum_grid(lateral_cells, lateral_cells, nz, dz, dz, dz);
    c.grid.dielectrics.push_back(slab);
    const int k0 = na + cpml_layers;
    for (int k = k0; k < k0 + ns; ++k)
        for (int j = 0; j < lateral_cells; ++j)
            for (int i = 0; i < lateral_cells; ++i) c.grid.cell[c.grid.cell_index(i, j, k)] = 1;
    c.k_ref = k0 + ns;
    return c;
}

Column unit_cell_column(const geom::UnitCellGeometry& cell, double dxy, double dz, double air, int cpml_layers) {
    cell.validate();
    const geom::Scene scene = geom::build_unit_cell_scene(cell);
    VoxelOptions o;
    o.dx = o.dy = dxy;
    o.dz = dz;
    o.padding_z = air + cpml_layers * dz;
    o.centre_y_faces = false;
    Column c;
    c.grid = voxelize(scene, o);
    require(std::fabs(c.grid.nx * dxy - cell.pitch_x) < 1e-6 * dxy && std::fabs(c.grid.ny * dxy - cell.pitch_y) < 1e-6 * dxy,
            "unit-cell pitch must be a whole number of cells");
    c.k_ref = c.grid.plane_of(cell.substrate_thickness);
    require(c.k_ref > 0, "ring plane is not on the grid");
    return c;
}

PlaneWaveResult planewave_reflection(const Column& column, const SimulationConfig& base, int source_offset) {
    const VoxelGrid& g = column.grid;
    SimulationConfig cfg = base;
    cfg.boundaries = {Boundary::periodic, Boundary::periodic, Boundary::periodic,
                      Boundary::periodic, Boundary::cpml,     Boundary::cpml};
    const int ks = column.k_ref + source_offset;
    require(source_offset >= 1 && ks < g.nz - cfg.cpml.layers - 1, "plane source falls inside the CPML");
    cfg.plane_source = PlaneSource{ks};
    cfg.probes = {PlaneProbe{0, column.k_ref}};
    cfg.ntff_frequencies.clear();
    cfg.currents.clear();

    VoxelGrid empty = make_vacuum_grid(g.nx, g.ny, g.nz, g.dx, g.dy, g.dz);
    empty.x0 = g.x0;
    empty.y0 = g.y0;
    empty.z0 = g.z0;

    PlaneWaveResult r;
    r.structure = simulate(g, cfg);
    r.reference = simulate(empty, cfg);
    const auto& a = r.structure.probes.at(0).dft;
    const auto& b = r.reference.probes.at(0).dft;
    std::vector<cplx> gamma(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) gamma[i] = a[i] / b[i] - 1.0;
    r.gamma = Spectrum(cfg.band, std::move(gamma));
    return r;
}

VoxelGrid antenna_grid(const geom::Scene& scene, const AntennaGridOptions& opts) {
    require(opts.cpml_layers >= 6, "CPML needs at least 6 layers");
    require(opts.air_xy >= 0 && opts.air_z >= 0, "air padding must be >= 0");
    VoxelOptions o;
    o.dx = opts.dx;
    o.dy = opts.dy;
    o.dz = opts.dz;
    o.padding_xy = opts.air_xy + opts.cpml_layers * std::max(opts.dx, opts.dy);
    o.padding_z = opts.air_z + opts.cpml_layers * opts.dz;
    o.workers = opts.workers;
    return voxelize(scene, o);
}

}  // namespace gprs::fdtd
