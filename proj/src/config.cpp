#include "gprs/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gprs/error.hpp"

namespace gprs {

namespace {

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, r.ptr};
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    double out = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size())
        throw ValidationError("config: " + key + " expects a number, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    int out = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size())
        throw ValidationError("config: " + key + " expects an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ValidationError("config: " + key + " expects true/false, got '" + v + "'");
}

struct Field {
    std::string section, key;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

struct Table {
    std::vector<Field> fields;
    std::string section;

    void num(const std::string& key, double& ref) {
        const std::string full = section + "." + key;
        fields.push_back({section, key, [&ref, full](const std::string& v) { ref = to_double(full, v); },
                          [&ref] { return fmt(ref); }});
    }
    void integer(const std::string& key, int& ref) {
        const std::string full = section + "." + key;
        fields.push_back({section, key, [&ref, full](const std::string& v) { ref = to_int(full, v); },
                          [&ref] { return std::to_string(ref); }});
    }
    void flag(const std::string& key, bool& ref) {
        const std::string full = section + "." + key;
        fields.push_back({section, key, [&ref, full](const std::string& v) { ref = to_bool(full, v); },
                          [&ref] { return std::string(ref ? "true" : "false"); }});
    }
    void text(const std::string& key, std::string& ref) {
        fields.push_back({section, key, [&ref](const std::string& v) { ref = trim(v); }, [&ref] { return ref; }});
    }
    void custom(const std::string& key, std::function<void(const std::string&)> set, std::function<std::string()> get) {
        fields.push_back({section, key, std::move(set), std::move(get)});
    }
};

Table fields_of(RunConfig& c) {
    Table t;
    t.section = "materials";
    t.num("graphene_mu_c_eV", c.graphene.mu_c_eV);
    t.num("graphene_tau", c.graphene.tau);
    t.num("graphene_temperature", c.graphene.temperature);
    t.num("substrate_eps_r", c.substrate.eps_r);
    t.num("substrate_tan_delta", c.substrate.tan_delta);
    t.num("prs_substrate_eps_r", c.prs_substrate.eps_r);
    t.num("prs_substrate_tan_delta", c.prs_substrate.tan_delta);
    t.num("copper_sigma", c.copper.sigma_dc);
    t.num("copper_thickness", c.copper.thickness);
    t.num("loss_frequency", c.loss_frequency);

    t.section = "patch_design";
    t.num("f_r", c.design.f_r);
    t.num("z0", c.design.z0);
    t.num("r_edge", c.design.r_edge);

    t.section = "geometry";
    auto& p = c.patch;
    t.num("L_p", p.L_p);
    t.num("W_p", p.W_p);
    t.num("ring_thickness", p.ring_thickness);
    t.num("W_1", p.W_1);
    t.num("W_2", p.W_2);
    t.num("W_3", p.W_3);
    t.num("l_4", p.l_4);
    t.num("L_c", p.L_c);
    t.num("W_c", p.W_c);
    t.num("L_s", p.L_s);
    t.num("W_s", p.W_s);
    t.num("h", p.h);
    t.num("l_1", p.l_1);
    t.num("l_2", p.l_2);
    t.num("l_3", p.l_3);
    t.num("ring_gap", p.ring_gap);
    t.num("slot_offset", p.slot_offset);
    t.num("dgs_length_x", p.dgs_length_x);
    t.num("dgs_length_y", p.dgs_length_y);
    t.flag("with_ring", p.with_ring);
    t.flag("with_dgs", p.with_dgs);
    t.text("radiator", c.radiator);
    t.text("ground", c.ground);
    t.num("prs_L_g", c.prs.cell.L_g);
    t.num("prs_W_g", c.prs.cell.W_g);
    t.num("prs_t_1", c.prs.cell.t_1);
    t.num("prs_substrate_thickness", c.prs.cell.substrate_thickness);
    t.integer("prs_nx", c.prs.nx);
    t.integer("prs_ny", c.prs.ny);
    t.num("prs_l_s2", c.prs.l_s2);
    t.num("prs_W_s2", c.prs.W_s2);

    t.section = "prs_cavity";
    t.custom(
        "z_s",
        [&c](const std::string& v) {
            c.z_s.clear();
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!trim(item).empty()) c.z_s.push_back(to_double("prs_cavity.z_s", item));
        },
        [&c] {
            std::string s;
            for (std::size_t i = 0; i < c.z_s.size(); ++i) s += (i ? ", " : "") + fmt(c.z_s[i]);
            return s;
        });
    t.num("z_s_optimal", c.z_s_optimal);

    t.section = "band";
    t.num("f_start", c.f_start);
    t.num("f_stop", c.f_stop);
    t.num("f_step", c.f_step);

    t.section = "fdtd";
    auto& f = c.fdtd;
    t.num("resolution", f.resolution);
    t.num("dz", f.dz);
    t.num("unitcell_resolution", f.unitcell_resolution);
    t.num("unitcell_air", f.unitcell_air);
    t.num("air_xy", f.air_xy);
    t.num("air_z", f.air_z);
    t.integer("cpml_layers", f.cpml_layers);
    t.num("cpml_grading", f.cpml_grading);
    t.num("cpml_kappa_max", f.cpml_kappa_max);
    t.num("cpml_alpha_max", f.cpml_alpha_max);
    t.num("courant", f.courant);
    t.integer("max_steps", f.max_steps);
    t.integer("min_steps", f.min_steps);
    t.num("energy_threshold", f.energy_threshold);
    t.integer("energy_stride", f.energy_stride);
    t.num("port_impedance", f.port_impedance);
    t.num("source_f0", f.source_f0);
    t.num("source_half_band", f.source_half_band);
    t.integer("ntff_gap", f.ntff_gap);
    t.num("gain_step", f.gain_step);
    t.num("farfield_step_deg", f.farfield_step_deg);
    t.custom(
        "isa",
        [&f](const std::string& v) {
            const std::string s = trim(v);
            if (s == "auto")
                f.isa.reset();
            else if (s == "scalar")
                f.isa = simd::Isa::scalar;
            else if (s == "avx2")
                f.isa = simd::Isa::avx2;
            else
                throw ValidationError("config: fdtd.isa must be auto, scalar or avx2");
        },
        [&f] { return f.isa ? std::string(simd::isa_name(*f.isa)) : std::string("auto"); });

    t.section = "run";
    t.text("out", c.out);
    t.integer("workers", c.workers);
    t.custom(
        "model",
        [&c](const std::string& v) {
            const std::string s = trim(v);
            if (s == "fdtd")
                c.model = SweepModel::fdtd;
            else if (s == "tmm")
                c.model = SweepModel::tmm;
            else
                throw ValidationError("config: run.model must be fdtd or tmm");
        },
        [&c] { return std::string(c.model == SweepModel::fdtd ? "fdtd" : "tmm"); });
    t.custom(
        "structure",
        [&c](const std::string& v) {
            const std::string s = trim(v);
            if (s == "patch")
                c.structure = Structure::patch;
            else if (s == "cavity")
                c.structure = Structure::cavity;
            else
                throw ValidationError("config: run.structure must be patch or cavity");
        },
        [&c] { return std::string(c.structure == Structure::patch ? "patch" : "cavity"); });
    return t;
}

}  // namespace

SheetMaterial sheet_material_named(const std::string& name, const RunConfig& cfg) {
    if (name == "graphene") return cfg.graphene;
    if (name == "copper") return cfg.copper;
    if (name == "pec") return PecSpec{};
    throw ValidationError("unknown sheet material '" + name + "' (graphene, copper or pec)");
}

void RunConfig::resolve() {
    patch.substrate = substrate;
    patch.radiator = sheet_material_named(radiator, *this);
    patch.ground = sheet_material_named(ground, *this);
    design.eps_r = substrate.eps_r;
    design.h = patch.h;
    prs.cell.substrate = prs_substrate;
    prs.cell.metal = ConductorSheetSpec{copper.sigma_dc, prs.cell.t_1};
    if (prs.nx > 0 && prs.ny > 0) prs.derive_pitch();
}

void RunConfig::validate() const {
    graphene.validate();
    substrate.validate();
    prs_substrate.validate();
    copper.validate();
    require_positive(loss_frequency, "materials.loss_frequency");
    design.validate();
    patch_geometry().validate();
    prs.validate();
    require(!z_s.empty(), "prs_cavity.z_s must list at least one separation");
    for (double z : z_s) require_positive(z, "prs_cavity.z_s entry");
    require_positive(z_s_optimal, "prs_cavity.z_s_optimal");
    require_positive(f_start, "band.f_start");
    require(f_stop > f_start, "band.f_stop must exceed band.f_start");
    require_positive(f_step, "band.f_step");
    band().validate();
    require_positive(fdtd.resolution, "fdtd.resolution");
    require(fdtd.dz >= 0.0, "fdtd.dz must be >= 0");
    require_positive(fdtd.unitcell_resolution, "fdtd.unitcell_resolution");
    require_positive(fdtd.unitcell_air, "fdtd.unitcell_air");
    require(fdtd.air_xy >= 0 && fdtd.air_z >= 0, "fdtd air padding must be >= 0");
    require(fdtd.cpml_layers >= 1, "fdtd.cpml_layers must be >= 1");
    require(fdtd.courant > 0 && fdtd.courant <= 1, "fdtd.courant must lie in (0, 1]");
    require(fdtd.max_steps >= 1 && fdtd.min_steps >= 0, "fdtd step limits must be positive");
    require(fdtd.energy_threshold > 0 && fdtd.energy_threshold < 1, "fdtd.energy_threshold must lie in (0, 1)");
    require(fdtd.energy_stride >= 1, "fdtd.energy_stride must be >= 1");
    require_positive(fdtd.port_impedance, "fdtd.port_impedance");
    require_positive(fdtd.source_f0, "fdtd.source_f0");
    require_positive(fdtd.source_half_band, "fdtd.source_half_band");
    require(fdtd.ntff_gap >= 1, "fdtd.ntff_gap must be >= 1");
    require_positive(fdtd.gain_step, "fdtd.gain_step");
    require(fdtd.farfield_step_deg > 0 && fdtd.farfield_step_deg <= 15, "fdtd.farfield_step_deg must lie in (0, 15]");
    require(workers >= 1, "run.workers must be >= 1");
    require(!out.empty(), "run.out must not be empty");
}

geom::PatchGeometry RunConfig::patch_geometry() const { return patch; }

geom::CavityAssembly RunConfig::assembly(double zs) const {
    geom::CavityAssembly a;
    a.antenna = patch;
    a.prs = prs;
    a.z_s = zs;
    return a;
}

std::string RunConfig::to_text() const {
    RunConfig copy = *this;
    const Table t = fields_of(copy);
    std::ostringstream os;
    std::string section;
    for (const auto& f : t.fields) {
        if (f.section != section) {
            if (!section.empty()) os << '\n';
            section = f.section;
            os << '[' << section << "]\n";
        }
        os << f.key << " = " << f.get() << '\n';
    }
    return os.str();
}

IniSections read_ini(const std::string& text) {
    // The INI reader only knows ';' comments; accept '#' too.
    std::istringstream in(text);
    std::ostringstream cleaned;
    for (std::string line; std::getline(in, line);) {
        const std::string t = trim(line);
        cleaned << (!t.empty() && t[0] == '#' ? std::string(";") + t : line) << '\n';
    }
    boost::property_tree::ptree tree;
    try {
        std::istringstream is(cleaned.str());
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    IniSections out;
    for (const auto& [section, keys] : tree) {
        if (keys.empty() && !keys.data().empty())
            throw ValidationError("config: key '" + section + "' outside of any section");
        auto& dst = out[section];
        for (const auto& [key, value] : keys) dst[key] = value.data();
    }
    return out;
}

RunConfig RunConfig::parse(const std::string& text) {
    const IniSections sections = read_ini(text);
    RunConfig c;
    Table t = fields_of(c);
    std::map<std::string, std::map<std::string, Field*>> index;
    for (auto& f : t.fields) index[f.section][f.key] = &f;
    for (const auto& [section, keys] : sections) {
        const auto s = index.find(section);
        if (s == index.end()) throw ValidationError("config: unknown section [" + section + "]");
        for (const auto& [key, value] : keys) {
            const auto k = s->second.find(key);
            if (k == s->second.end()) throw ValidationError("config: unknown key '" + key + "' in [" + section + "]");
            k->second->set(value);
        }
    }
    c.resolve();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace gprs
