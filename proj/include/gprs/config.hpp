#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gprs/geometry.hpp"
#include "gprs/materials.hpp"
#include "gprs/patch_design.hpp"
#include "gprs/simd/kernels.hpp"
#include "gprs/spectrum.hpp"

namespace gprs {

enum class SweepModel { fdtd, tmm };
enum class Structure { patch, cavity };

struct FdtdSettings {
    double resolution = 1.0;          // lateral cells per micrometre
    double dz = 0.0;                  // m; 0 means 1 / resolution
    double unitcell_resolution = 2.0;
    double unitcell_air = 60e-6;
    double air_xy = 30e-6, air_z = 30e-6;
    int cpml_layers = 10;
    double cpml_grading = 3.0;
    double cpml_kappa_max = 1.0;
    double cpml_alpha_max = 0.28;
    double courant = 0.99;
    int max_steps = 200000;
    int min_steps = 0;
    double energy_threshold = 1e-8;
    int energy_stride = 10;
    double port_impedance = 50.0;
    double source_f0 = 800e9;
    double source_half_band = 200e9;
    int ntff_gap = 3;
    double gain_step = 25e9;          // spacing of far-field frequencies
    double farfield_step_deg = 2.0;
    std::optional<simd::Isa> isa;     // unset: runtime choice

    double lateral_step() const { return 1e-6 / resolution; }
    double vertical_step() const { return dz > 0 ? dz : lateral_step(); }
};

/// Everything a command needs, loaded from an INI-style file.
struct RunConfig {
    GrapheneSpec graphene;
    DielectricSpec substrate = rt6010;
    DielectricSpec prs_substrate = rt5880;
    ConductorSheetSpec copper;
    double loss_frequency = 800e9;

    patch::DesignInputs design;
    geom::PatchGeometry patch = geom::default_patch();
    geom::PrsArrayGeometry prs = geom::default_prs_array();
    std::string radiator = "graphene";  // graphene | copper | pec
    std::string ground = "graphene";

    std::vector<double> z_s{5e-6, 10e-6, 15e-6, 20e-6, 25e-6, 30e-6, 35e-6, 40e-6};
    double z_s_optimal = 15e-6;

    double f_start = 600e9, f_stop = 900e9, f_step = 1e9;

    FdtdSettings fdtd;

    std::string out = "out";
    int workers = 1;
    SweepModel model = SweepModel::fdtd;
    Structure structure = Structure::patch;

    /// Applies the material and design-table fields to the derived structures.
    /// Called by parse(); call again after editing fields by hand.
    void resolve();
    void validate() const;

    FrequencyAxis band() const { return FrequencyAxis::from_range(f_start, f_stop, f_step); }
    geom::PatchGeometry patch_geometry() const;
    geom::CavityAssembly assembly(double z_s) const;

    /// Canonical text form; parse(to_text()) reproduces the config exactly.
    std::string to_text() const;
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);
};

/// Section -> key -> raw value of an INI-style text. '#' and ';' start comments;
/// duplicate keys and keys outside a section are errors.
using IniSections = std::map<std::string, std::map<std::string, std::string>>;
IniSections read_ini(const std::string& text);

SheetMaterial sheet_material_named(const std::string& name, const RunConfig& cfg);

}  // namespace gprs
