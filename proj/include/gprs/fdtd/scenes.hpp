#pragma once

#include "gprs/fdtd/solver.hpp"
#include "gprs/geometry.hpp"
#include "gprs/spectrum.hpp"
#include "gprs/voxel.hpp"

namespace gprs::fdtd {

/// Laterally periodic column with the structure under test and its reference
/// plane index (Gamma is referred to this node plane).
struct Column {
    VoxelGrid grid;
    int k_ref = 0;
};

/// Dielectric slab of `thickness` (a multiple of dz) with air above and below.
Column slab_column(const DielectricSpec& slab, double thickness, double dz, double air, int cpml_layers,
                   int lateral_cells = 2);

/// Periodic PRS unit cell; the reference plane is the ring (top face of the substrate).
Column unit_cell_column(const geom::UnitCellGeometry& cell, double dxy, double dz, double air, int cpml_layers);

struct PlaneWaveResult {
    Spectrum gamma;
    RunResult structure, reference;
};

/// Normal-incidence reflection from two runs: the column and the same grid emptied.
/// An x-directed current sheet `source_offset` cells above k_ref launches the wave
/// and Gamma = E(k_ref) / E_empty(k_ref) - 1 on the plane-averaged Ex.
PlaneWaveResult planewave_reflection(const Column& column, const SimulationConfig& base, int source_offset = 10);

struct AntennaGridOptions {
    double dx = 1e-6, dy = 1e-6, dz = 1e-6;
    double air_xy = 30e-6, air_z = 30e-6;  // air between the structure and the CPML
    int cpml_layers = 10;
    int workers = 1;
};

/// Voxelizes an antenna scene with air and CPML padding around it.
VoxelGrid antenna_grid(const geom::Scene& scene, const AntennaGridOptions& opts);

}  // namespace gprs::fdtd
