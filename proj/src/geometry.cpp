#include "gprs/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gprs/error.hpp"

namespace gprs::geom {

double Triangle::height() const { return side * std::sqrt(3.0) / 2.0; }
double Triangle::area() const { return side * side * std::sqrt(3.0) / 4.0; }

double triangle_ring_area(double outer, double inner) {
    return std::sqrt(3.0) / 4.0 * (outer * outer - inner * inner);
}

int Scene::add_dielectric(const DielectricSpec& d) {
    d.validate();
    dielectrics.push_back(d);
    return static_cast<int>(dielectrics.size()) - 1;
}

int Scene::add_sheet(const SheetMaterial& m) {
    sheets.push_back(m);
    return static_cast<int>(sheets.size());  // 0 is "no sheet"
}

namespace {

void grow(std::optional<Box>& b, const Box& o) {
    if (!b) {
        b = o;
        return;
    }
    b->x0 = std::min(b->x0, o.x0);
    b->y0 = std::min(b->y0, o.y0);
    b->z0 = std::min(b->z0, o.z0);
    b->x1 = std::max(b->x1, o.x1);
    b->y1 = std::max(b->y1, o.y1);
    b->z1 = std::max(b->z1, o.z1);
}

Box shape_box(const Shape& s, double z) {
    if (const auto* r = std::get_if<Rect>(&s)) return {r->x0, r->y0, z, r->x1, r->y1, z};
    const auto& t = std::get<Triangle>(s);
    const double hgt = t.height();
    return {t.centroid.x - t.side / 2, t.centroid.y - hgt / 3, z, t.centroid.x + t.side / 2, t.centroid.y + 2 * hgt / 3, z};
}

Shape mirror(const Shape& s) {
    if (const auto* r = std::get_if<Rect>(&s)) return Rect{-r->x1, r->y0, -r->x0, r->y1, r->widen};
    auto t = std::get<Triangle>(s);
    t.centroid.x = -t.centroid.x;
    return t;
}

}  // namespace

std::optional<Box> Scene::bounds() const {
    std::optional<Box> b;
    for (const auto& blk : blocks) grow(b, blk.box);
    for (const auto& l : layers)
        for (const auto& op : l.ops)
            if (!op.subtract) grow(b, shape_box(op.shape, l.z));
    if (port) grow(b, {port->x, port->y - port->width / 2, port->z0, port->x, port->y + port->width / 2, port->z1});
    return b;
}

Scene Scene::mirrored_x() const {
    Scene m = *this;
    for (auto& blk : m.blocks) {
        const double x0 = blk.box.x0;
        blk.box.x0 = -blk.box.x1;
        blk.box.x1 = -x0;
    }
    for (auto& l : m.layers)
        for (auto& op : l.ops) op.shape = mirror(op.shape);
    if (m.port) m.port->x = -m.port->x;
    return m;
}

void PatchGeometry::validate() const {
    const std::pair<const char*, double> lengths[] = {
        {"L_p", L_p}, {"W_p", W_p}, {"ring_thickness", ring_thickness}, {"W_1", W_1}, {"W_2", W_2},
        {"W_3", W_3}, {"l_4", l_4}, {"L_c", L_c}, {"W_c", W_c}, {"L_s", L_s}, {"W_s", W_s}, {"h", h},
        {"l_1", l_1}, {"l_2", l_2}, {"l_3", l_3}, {"ring_gap", ring_gap}, {"dgs_length_x", dgs_length_x},
        {"dgs_length_y", dgs_length_y}};
    for (const auto& [name, v] : lengths) require_positive(v, name);
    require_finite(slot_offset, "slot_offset");
    substrate.validate();
    require(W_p <= W_s, "patch width W_p exceeds substrate width W_s");
    require(L_p + l_1 <= L_s, "L_p + l_1 exceeds substrate length L_s");
    require(l_3 < L_p, "inset cut length l_3 must be shorter than L_p");
    require(W_1 + 2 * W_2 < W_p, "inset cut (W_1 + 2 W_2) does not fit inside W_p");
    require(l_2 >= l_3, "inset feed line l_2 must reach the inset depth l_3");
    require(patch_x0() + L_p <= L_s, "patch extends beyond the substrate");
    require(l_4 < L_p && W_3 < W_p, "patch cut does not fit inside the patch");
    require(W_c < L_p && L_c < W_p, "slot does not fit inside the patch");
    if (with_ring) {
        const double outer_w = W_p + 2 * (ring_gap + ring_thickness);
        const double outer_l = L_p + 2 * (ring_gap + ring_thickness);
        require(outer_w <= W_s, "parasitic ring does not fit across the substrate");
        require(patch_x0() - ring_gap - ring_thickness >= 0.0 && patch_x0() + outer_l - ring_gap - ring_thickness <= L_s,
                "parasitic ring does not fit along the substrate");
    }
}

void UnitCellGeometry::validate() const {
    require_positive(L_g, "L_g");
    require_finite(W_g, "W_g");
    require(W_g >= 0.0, "W_g must be >= 0");
    require(W_g < L_g, "ring inner length W_g must be smaller than the outer length L_g");
    require_positive(t_1, "t_1");
    require_positive(substrate_thickness, "PRS substrate thickness");
    require_positive(pitch_x, "pitch_x");
    require_positive(pitch_y, "pitch_y");
    const Triangle outer{{0, 0}, L_g};
    require(L_g <= pitch_x && outer.height() <= pitch_y, "triangle ring does not fit inside its unit cell");
    substrate.validate();
}

double UnitCellGeometry::ring_width() const { return (L_g - W_g) / (2.0 * std::sqrt(3.0)); }

void PrsArrayGeometry::validate() const {
    cell.validate();
    require(nx >= 1 && ny >= 1, "PRS array counts must be >= 1");
    require_positive(l_s2, "l_s2");
    require_positive(W_s2, "W_s2");
    require(nx * cell.pitch_x <= l_s2 * (1 + 1e-12), "nx * pitch_x exceeds the aperture length l_s2");
    require(ny * cell.pitch_y <= W_s2 * (1 + 1e-12), "ny * pitch_y exceeds the aperture width W_s2");
}

void PrsArrayGeometry::derive_pitch() {
    cell.pitch_x = l_s2 / nx;
    cell.pitch_y = W_s2 / ny;
}

void CavityAssembly::validate() const {
    antenna.validate();
    prs.validate();
    require_positive(z_s, "z_s");
}

PatchGeometry default_patch() { return PatchGeometry{}; }

UnitCellGeometry default_unit_cell() { return UnitCellGeometry{}; }

PrsArrayGeometry default_prs_array() {
    PrsArrayGeometry a;
    a.derive_pitch();
    return a;
}

namespace {

void add_patch(Scene& s, const PatchGeometry& p) {
    p.validate();
    const int sub = s.add_dielectric(p.substrate);
    const int rad = s.add_sheet(p.radiator);
    const int gnd = s.add_sheet(p.ground);
    const double hw = p.W_s / 2;
    s.blocks.push_back({"antenna substrate", {0, -hw, 0, p.L_s, hw, p.h}, sub});

    SheetLayer ground{"ground plane", 0.0, gnd, {}};
    ground.ops.push_back({Rect{0, -hw, p.L_s, hw}, false});
    const double x0 = p.patch_x0();
    if (p.with_dgs)
        ground.ops.push_back(
            {Rect{x0 - p.dgs_length_x / 2, -p.dgs_length_y / 2, x0 + p.dgs_length_x / 2, p.dgs_length_y / 2}, true});
    s.layers.push_back(std::move(ground));

    SheetLayer top{"patch", p.h, rad, {}};
    const double x1 = x0 + p.L_p;
    const double wp = p.W_p / 2;
    const double notch = p.W_1 / 2 + p.W_2;
    if (p.with_ring) {
        // parasitic rectangular ring around the patch, open where the feed passes
        const double g = p.ring_gap, t = p.ring_thickness;
        top.ops.push_back({Rect{x0 - g - t, -wp - g - t, x1 + g + t, wp + g + t}, false});
        top.ops.push_back({Rect{x0 - g, -wp - g, x1 + g, wp + g}, true});
        top.ops.push_back({Rect{x0 - g - t, -notch, x0 - g, notch}, true});
    }
    top.ops.push_back({Rect{x0, -wp, x1, wp}, false});
    top.ops.push_back({Rect{x0, -notch, x0 + p.l_3, notch}, true});
    top.ops.push_back({Rect{x1 - p.l_4, -p.W_3 / 2, x1, p.W_3 / 2}, true});
    const double xc = 0.5 * (x0 + x1) + p.slot_offset;
    top.ops.push_back({Rect{xc - p.W_c / 2, -p.L_c / 2, xc + p.W_c / 2, p.L_c / 2}, true});
    top.ops.push_back({Rect{0, -p.W_1 / 2, p.feed_end_x(), p.W_1 / 2, true}, false});
    s.layers.push_back(std::move(top));

    s.features.push_back({"inset feed width W_1", p.W_1, false, true});
    s.features.push_back({"inset gap W_2", p.W_2, false, false});
    s.features.push_back({"patch cut width W_3", p.W_3, false, false});
    s.features.push_back({"patch slot width W_c", p.W_c, false, false});
    if (p.with_ring) {
        s.features.push_back({"ring thickness", p.ring_thickness, false, false});
        s.features.push_back({"ring gap", p.ring_gap, false, false});
    }
    s.features.push_back({"substrate thickness h", p.h, true, false});
    s.port = PortSite{0.0, 0.0, p.W_1, 0.0, p.h};
}

void add_prs(Scene& s, const PrsArrayGeometry& a, double x_center, double z_bottom) {
    a.validate();
    const auto& c = a.cell;
    const int sub = s.add_dielectric(c.substrate);
    const int metal = s.add_sheet(c.metal);
    const double ztop = z_bottom + c.substrate_thickness;
    s.blocks.push_back({"PRS substrate",
                        {x_center - a.l_s2 / 2, -a.W_s2 / 2, z_bottom, x_center + a.l_s2 / 2, a.W_s2 / 2, ztop},
                        sub});
    SheetLayer rings{"PRS rings", ztop, metal, {}};
    const double xa = x_center - 0.5 * a.nx * c.pitch_x;
    const double ya = -0.5 * a.ny * c.pitch_y;
    for (int i = 0; i < a.nx; ++i)
        for (int j = 0; j < a.ny; ++j) {
            const Vec2 centre{xa + (i + 0.5) * c.pitch_x, ya + (j + 0.5) * c.pitch_y};
            rings.ops.push_back({Triangle{centre, c.L_g}, false});
            if (c.W_g > 0) rings.ops.push_back({Triangle{centre, c.W_g}, true});
        }
    s.layers.push_back(std::move(rings));
    if (c.W_g > 0) s.features.push_back({"PRS ring width", c.ring_width(), false, false});
    s.features.push_back({"PRS substrate thickness", c.substrate_thickness, true, false});
}

}  // namespace

Scene build_scene(const PatchGeometry& p) {
    Scene s;
    add_patch(s, p);
    return s;
}

Scene build_scene(const CavityAssembly& a) {
    a.validate();
    Scene s;
    add_patch(s, a.antenna);
    add_prs(s, a.prs, a.antenna.L_s / 2, a.antenna.h + a.z_s);
    s.features.push_back({"antenna-PRS separation z_s", a.z_s, true, false});
    return s;
}

Scene build_unit_cell_scene(const UnitCellGeometry& u) {
    u.validate();
    Scene s;
    const int sub = s.add_dielectric(u.substrate);
    const int metal = s.add_sheet(u.metal);
    s.blocks.push_back({"PRS substrate",
                        {-u.pitch_x / 2, -u.pitch_y / 2, 0, u.pitch_x / 2, u.pitch_y / 2, u.substrate_thickness},
                        sub});
    SheetLayer ring{"PRS ring", u.substrate_thickness, metal, {}};
    ring.ops.push_back({Triangle{{0, 0}, u.L_g}, false});
    if (u.W_g > 0) ring.ops.push_back({Triangle{{0, 0}, u.W_g}, true});
    s.layers.push_back(std::move(ring));
    if (u.W_g > 0) s.features.push_back({"PRS ring width", u.ring_width(), false, false});
    s.features.push_back({"PRS substrate thickness", u.substrate_thickness, true, false});
    return s;
}

}  // namespace gprs::geom
