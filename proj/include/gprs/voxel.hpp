#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gprs/geometry.hpp"

namespace gprs {

/// Lumped-port location in node indices: Ez edges k0..k1-1 at every (i, j) column.
struct GridPort {
    int i = 0;
    std::vector<int> j_nodes;
    int k0 = 0, k1 = 0;
};

/// Material assignment on a uniform Yee grid.
///
/// Node (i, j, k) sits at (x0 + i dx, y0 + j dy, z0 + k dz). Cells are indexed by
/// their lower node. Sheets live on z-planes; an in-plane edge carries a sheet when
/// either adjacent face does. Tag 0 means vacuum / no sheet.
struct VoxelGrid {
    double dx = 0, dy = 0, dz = 0;
    int nx = 0, ny = 0, nz = 0;
    double x0 = 0, y0 = 0, z0 = 0;

    std::vector<DielectricSpec> dielectrics{vacuum_dielectric};
    std::vector<SheetMaterial> sheets;  // tag t refers to sheets[t - 1]

    std::vector<std::uint8_t> cell;   // nx * ny * nz
    std::vector<std::uint8_t> zface;  // nx * ny * (nz + 1), sheet tag of face (i, j) on plane k
    std::vector<std::uint8_t> ex;     // nx * (ny + 1) * (nz + 1)
    std::vector<std::uint8_t> ey;     // (nx + 1) * ny * (nz + 1)

    std::optional<GridPort> port;

    std::size_t cell_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * (j + static_cast<std::size_t>(ny) * k);
    }
    std::size_t zface_index(int i, int j, int k) const { return cell_index(i, j, k); }
    std::size_t ex_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * (j + static_cast<std::size_t>(ny + 1) * k);
    }
    std::size_t ey_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx + 1) * (j + static_cast<std::size_t>(ny) * k);
    }
    double node_x(int i) const { return x0 + i * dx; }
    double node_y(int j) const { return y0 + j * dy; }
    double node_z(int k) const { return z0 + k * dz; }

    std::size_t cell_count() const { return static_cast<std::size_t>(nx) * ny * nz; }
    /// Total tagged sheet area (m^2), optionally restricted to one tag.
    double sheet_area(int tag = -1) const;
    /// Plane index of a z coordinate, or -1 when it is not on a grid plane.
    int plane_of(double z) const;

    bool operator==(const VoxelGrid& o) const;
};

struct VoxelOptions {
    double dx = 1e-6, dy = 1e-6, dz = 1e-6;
    double padding_xy = 0.0;  // air around the scene bounds
    double padding_z = 0.0;
    bool centre_y_faces = true;  // y faces centred on multiples of dy (one-cell feed on y = 0)
    int workers = 1;
};

/// Recomputes ex/ey sheet tags from zface (the larger tag of the two adjacent faces).
void derive_edge_tags(VoxelGrid& g);

/// All-vacuum grid of the given size with its lower corner at the origin.
VoxelGrid make_vacuum_grid(int nx, int ny, int nz, double dx, double dy, double dz);

/// Rasterises a scene. Throws ValidationError naming the feature when a feature is
/// thinner than one cell and cannot be widened, or a sheet is off the grid planes.
VoxelGrid voxelize(const geom::Scene& scene, const VoxelOptions& opts);

/// Cell size chosen so that the smallest non-widenable lateral feature spans
/// `resolution` cells (resolution >= 2); z spacing is taken from opts.dz.
VoxelGrid voxelize(const geom::Scene& scene, double resolution, VoxelOptions opts);

/// ASCII header followed by the raw tag arrays; see docs in the README.
void write_voxel_dump(std::ostream& os, const VoxelGrid& g);
VoxelGrid read_voxel_dump(std::istream& is);

}  // namespace gprs
