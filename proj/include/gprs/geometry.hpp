#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gprs/materials.hpp"

namespace gprs::geom {

struct Vec2 {
    double x = 0, y = 0;
};

/// Axis-aligned rectangle. `widen` grows a sub-cell strip to one full cell when
/// rasterised instead of rejecting it.
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool widen = false;

    double area() const { return (x1 - x0) * (y1 - y0); }
};

/// Equilateral triangle, apex toward +y, given by centroid and side length.
struct Triangle {
    Vec2 centroid;
    double side = 0;

    double area() const;
    double height() const;
};

using Shape = std::variant<Rect, Triangle>;

struct ShapeOp {
    Shape shape;
    bool subtract = false;
};

/// Zero-thickness conductive layer in the plane z = const. Ops apply in order.
struct SheetLayer {
    std::string name;
    double z = 0;
    int material = 0;  // index into Scene::sheets
    std::vector<ShapeOp> ops;
};

struct Box {
    double x0 = 0, y0 = 0, z0 = 0, x1 = 0, y1 = 0, z1 = 0;
};

struct DielectricBlock {
    std::string name;
    Box box;
    int material = 0;  // index into Scene::dielectrics (0 is vacuum)
};

/// Smallest dimension of a named feature; used for resolution checks.
struct Feature {
    std::string name;
    double size = 0;
    bool vertical = false;   // measured along z
    bool widenable = false;  // may be widened to one cell
};

/// Lumped feed across the substrate: strip of width `width` centred at (x, y)
/// between the ground (z0) and the strip (z1).
struct PortSite {
    double x = 0, y = 0, width = 0, z0 = 0, z1 = 0;
};

/// Flattened solid model handed to the voxelizer.
struct Scene {
    std::vector<DielectricSpec> dielectrics{vacuum_dielectric};
    std::vector<SheetMaterial> sheets;
    std::vector<DielectricBlock> blocks;
    std::vector<SheetLayer> layers;
    std::vector<Feature> features;
    std::optional<PortSite> port;

    int add_dielectric(const DielectricSpec& d);
    int add_sheet(const SheetMaterial& m);
    /// Bounding box of all blocks and additive shapes; nullopt when empty.
    std::optional<Box> bounds() const;
    /// Mirror image across the plane x = 0.
    Scene mirrored_x() const;
};

double triangle_ring_area(double outer, double inner);

/// Rectangular graphene patch: symbols follow the optimized design table.
/// Axes: x runs along the feed (length), y across it (width), z up from the ground.
struct PatchGeometry {
    double L_p = 36e-6, W_p = 60e-6, ring_thickness = 5e-6;
    double W_1 = 1e-6, W_2 = 5e-6, W_3 = 4e-6, l_4 = 10e-6;
    double L_c = 20e-6, W_c = 5e-6;
    double L_s = 130e-6, W_s = 100e-6, h = 45e-6;
    double l_1 = 40e-6, l_2 = 25e-6, l_3 = 15e-6;

    // Placement choices the design table leaves open.
    double ring_gap = 5e-6;        // patch edge to parasitic ring
    double slot_offset = 4e-6;     // slot centre offset from patch centre, +x toward the far edge
    double dgs_length_x = 5e-6;    // defect under the feed, along x
    double dgs_length_y = 20e-6;   // across the feed
    bool with_ring = true;
    bool with_dgs = true;

    DielectricSpec substrate = rt6010;
    SheetMaterial radiator = GrapheneSpec{};
    SheetMaterial ground = GrapheneSpec{};

    void validate() const;
    double patch_x0() const { return l_1 + l_2 - l_3; }  // feed-side edge of the patch
    double feed_end_x() const { return l_1 + l_2; }
};

/// Triangular-ring PRS unit cell on its substrate.
struct UnitCellGeometry {
    double L_g = 17.32e-6;   // outer triangle side
    double W_g = 8.66e-6;    // inner triangle side
    double t_1 = 5e-6;       // copper thickness (sheet model)
    double substrate_thickness = 10e-6;
    double pitch_x = 25e-6, pitch_y = 25e-6;
    DielectricSpec substrate = rt5880;
    SheetMaterial metal = ConductorSheetSpec{};

    void validate() const;
    double ring_width() const;  // inradius difference
};

struct PrsArrayGeometry {
    UnitCellGeometry cell;
    int nx = 5, ny = 4;
    double l_s2 = 125e-6, W_s2 = 100e-6;

    void validate() const;
    /// Cell pitch implied by the aperture and counts.
    void derive_pitch();
};

struct CavityAssembly {
    PatchGeometry antenna;
    PrsArrayGeometry prs;
    double z_s = 15e-6;  // top of antenna substrate to bottom of PRS substrate

    void validate() const;
};

PatchGeometry default_patch();
UnitCellGeometry default_unit_cell();
PrsArrayGeometry default_prs_array();

Scene build_scene(const PatchGeometry& p);
Scene build_scene(const CavityAssembly& a);
/// Single periodic unit cell centred at the origin, ring on top of the substrate
/// whose bottom face is at z = 0.
Scene build_unit_cell_scene(const UnitCellGeometry& u);

}  // namespace gprs::geom
