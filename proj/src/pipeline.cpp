#include "gprs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gprs/error.hpp"
#include "gprs/fdtd/scenes.hpp"
#include "gprs/parallel.hpp"
#include "gprs/patch_design.hpp"

namespace gprs::app {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string um(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v * 1e6);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t band_index(const FrequencyAxis& axis, double f) {
    const double u = std::round((f - axis.f_start) / axis.step);
    return static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(axis.count - 1)));
}

std::vector<double> gain_frequencies(const RunConfig& cfg) {
    const FrequencyAxis axis = cfg.band();
    std::vector<double> out;
    for (double f = cfg.f_start; f <= cfg.f_stop * (1 + 1e-12); f += cfg.fdtd.gain_step) {
        const double snapped = axis[band_index(axis, f)];
        if (out.empty() || snapped > out.back()) out.push_back(snapped);
    }
    return out;
}

std::string zs_file(double z) {
    std::string s = um(z);
    std::replace(s.begin(), s.end(), '.', 'p');
    return "zs_" + s + "um.csv";
}

}  // namespace

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write '" + path + "'");
}

// Output headers leave out run.workers and run.out so that reruns with another
// worker count or output directory produce identical files.
std::string config_header(const RunConfig& cfg, const std::string& command) {
    std::istringstream in(cfg.to_text());
    std::string kept, line;
    while (std::getline(in, line))
        if (line.rfind("workers =", 0) != 0 && line.rfind("out =", 0) != 0) kept += line + "\n";
    return comment_block("gprs " + command + "\n" + kept);
}

std::string format_bands(const std::vector<fdtd::Band>& bands) {
    if (bands.empty()) return "none";
    std::string s;
    for (std::size_t i = 0; i < bands.size(); ++i)
        s += (i ? "; " : "") + num(bands[i].f_lo) + " - " + num(bands[i].f_hi);
    return s;
}

// ---- design ----------------------------------------------------------------

std::string design_report(const RunConfig& cfg) {
    cfg.validate();
    const patch::Design d = patch::design(cfg.design);
    const auto& p = cfg.patch;
    std::ostringstream os;
    os << "[design_equations]\n"
       << "f_r = " << num(cfg.design.f_r) << "\n"
       << "eps_r = " << num(cfg.design.eps_r) << "\n"
       << "h = " << num(cfg.design.h) << "\n"
       << "W_p_formula = " << num(d.width) << "\n"
       << "eps_eff = " << num(d.eps_eff) << "\n"
       << "delta_l = " << num(d.delta_l) << "\n"
       << "L_p_formula = " << num(d.length) << "\n"
       << "inset_depth_formula = " << num(d.inset) << "\n"
       << "\n[patch_geometry]\n";
    const std::pair<const char*, double> rows[] = {
        {"L_p", p.L_p}, {"W_p", p.W_p}, {"ring_thickness", p.ring_thickness}, {"W_1", p.W_1}, {"W_2", p.W_2},
        {"W_3", p.W_3}, {"l_4", p.l_4}, {"L_c", p.L_c}, {"W_c", p.W_c}, {"L_s", p.L_s}, {"W_s", p.W_s},
        {"h", p.h}, {"l_1", p.l_1}, {"l_2", p.l_2}, {"l_3", p.l_3}, {"ring_gap", p.ring_gap},
        {"slot_offset", p.slot_offset}, {"dgs_length_x", p.dgs_length_x}, {"dgs_length_y", p.dgs_length_y}};
    for (const auto& [k, v] : rows) os << k << " = " << num(v) << "\n";
    os << "with_ring = " << (p.with_ring ? "true" : "false") << "\n"
       << "with_dgs = " << (p.with_dgs ? "true" : "false") << "\n"
       << "substrate = eps_r " << num(p.substrate.eps_r) << ", tan_delta " << num(p.substrate.tan_delta) << "\n"
       << "radiator = " << describe(p.radiator) << "\n"
       << "ground = " << describe(p.ground) << "\n";
    return os.str();
}

// ---- solver settings ---------------------------------------------------------

fdtd::SimulationConfig solver_config(const RunConfig& cfg) {
    const auto& f = cfg.fdtd;
    fdtd::SimulationConfig s;
    s.courant_fraction = f.courant;
    s.source.f0 = f.source_f0;
    s.source.half_band = f.source_half_band;
    s.port_impedance = f.port_impedance;
    s.cpml.layers = f.cpml_layers;
    s.cpml.grading = f.cpml_grading;
    s.cpml.kappa_max = f.cpml_kappa_max;
    s.cpml.alpha_max = f.cpml_alpha_max;
    s.max_steps = f.max_steps;
    s.min_steps = f.min_steps;
    s.energy_threshold = f.energy_threshold;
    s.energy_stride = f.energy_stride;
    s.loss_frequency = cfg.loss_frequency;
    s.band = cfg.band();
    s.ntff_gap = f.ntff_gap;
    s.record_series = false;
    s.workers = cfg.workers;
    s.isa = f.isa;
    return s;
}

// ---- unit cell ---------------------------------------------------------------

LayerStack prs_backing(const RunConfig& cfg) {
    LayerStack s;
    s.add_slab(cfg.prs.cell.substrate_thickness, cfg.prs.cell.substrate);
    return s;
}

UnitCellOutcome run_unitcell(const RunConfig& cfg) {
    cfg.validate();
    const double d = 1e-6 / cfg.fdtd.unitcell_resolution;
    const fdtd::Column col = fdtd::unit_cell_column(cfg.prs.cell, d, d, cfg.fdtd.unitcell_air, cfg.fdtd.cpml_layers);
    fdtd::SimulationConfig sc = solver_config(cfg);
    sc.record_series = false;
    const fdtd::PlaneWaveResult pw = fdtd::planewave_reflection(col, sc);

    UnitCellOutcome out;
    out.gamma = pw.gamma;
    out.steps = pw.structure.steps + pw.reference.steps;
    out.wall_seconds = pw.structure.wall_seconds + pw.reference.wall_seconds;
    const LayerStack backing = prs_backing(cfg);
    out.sheet_impedance = prs::deembed_sheet_impedance(out.gamma, backing);
    out.crossings = prs::phase_crossings(prs::normalized_sheet_reflection(out.sheet_impedance, out.gamma.axis));
    try {
        out.fit = prs::fit_sheet_impedance(out.gamma, backing);
    } catch (const NumericalError& e) {
        out.fit_error = e.what();
    }
    return out;
}

LayerStack prs_stack(const RunConfig& cfg, const UnitCellOutcome& cell) {
    LayerStack s = prs_backing(cfg);
    if (cell.fit)
        s.add_sheet(Sheet{cell.fit->sheet});
    else
        s.add_sheet(Sheet{TabulatedSheet{cell.gamma.axis.f_start, cell.gamma.axis.step, cell.sheet_impedance}});
    return s;
}

// ---- antenna runs ------------------------------------------------------------

std::string run_label(Structure structure, double z_s) {
    if (structure == Structure::patch) return "patch";
    std::string s = um(z_s);
    std::replace(s.begin(), s.end(), '.', 'p');
    return "cavity_" + s + "um";
}

VoxelGrid antenna_voxels(const RunConfig& cfg, Structure structure, double z_s, int workers) {
    cfg.validate();
    const geom::Scene scene =
        structure == Structure::patch ? geom::build_scene(cfg.patch) : geom::build_scene(cfg.assembly(z_s));
    fdtd::AntennaGridOptions o;
    o.dx = o.dy = cfg.fdtd.lateral_step();
    o.dz = cfg.fdtd.vertical_step();
    o.air_xy = cfg.fdtd.air_xy;
    o.air_z = cfg.fdtd.air_z;
    o.cpml_layers = cfg.fdtd.cpml_layers;
    o.workers = workers;
    return fdtd::antenna_grid(scene, o);
}

AntennaOutcome simulate_antenna(const RunConfig& cfg, Structure structure, double z_s, int workers) {
    const VoxelGrid grid = antenna_voxels(cfg, structure, z_s, workers);

    fdtd::SimulationConfig sc = solver_config(cfg);
    sc.workers = workers;
    sc.ntff_frequencies = gain_frequencies(cfg);
    const fdtd::RunResult r = fdtd::simulate(grid, sc);
    require(r.port.has_value() && r.ntff.has_value(), "antenna run produced no port or far-field record");

    AntennaOutcome out;
    out.label = run_label(structure, z_s);
    out.s11 = fdtd::s11_spectrum(*r.port, sc.band);
    out.powers = fdtd::port_powers(*r.port, sc.band);
    out.resonance = fdtd::min_s11_frequency(out.s11);
    out.bands = fdtd::bandwidth_minus10dB(out.s11);
    out.steps = r.steps;
    out.converged = r.converged;
    out.wall_seconds = r.wall_seconds;
    out.cells = r.cells;
    out.isa = std::string(simd::isa_name(r.isa));

    fdtd::FarFieldOptions fo;
    fo.step_deg = cfg.fdtd.farfield_step_deg;
    out.peak_gain_dbi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.ntff->frequencies.size(); ++k) {
        out.farfields.push_back(fdtd::ntff_farfield(*r.ntff, k, fo));
        const fdtd::FarField& ff = out.farfields.back();
        const std::size_t i = band_index(sc.band, ff.frequency);
        const double accepted = out.powers.accepted[i];
        const double eta = accepted > 0 ? std::min(1.0, ff.radiated_power / accepted) : 0.0;
        const double g = fdtd::realized_gain(ff.peak_directivity, std::abs(out.s11.values[i]), eta);
        out.realized_gain_dbi.push_back(g);
        if (g > out.peak_gain_dbi) {
            out.peak_gain_dbi = g;
            out.peak_gain_frequency = ff.frequency;
            out.peak_index = k;
        }
    }
    return out;
}

std::string summary_text(const RunConfig& cfg, const AntennaOutcome& r) {
    const std::vector<double> db = r.s11.magnitude_db();
    std::ostringstream os;
    os << config_header(cfg, "simulate") << "[summary]\n"
       << "label = " << r.label << "\n"
       << "resonance_Hz = " << num(r.resonance) << "\n"
       << "min_s11_dB = " << num(*std::min_element(db.begin(), db.end())) << "\n"
       << "bands_minus10dB_Hz = " << format_bands(r.bands) << "\n";
    double width = 0;
    for (const auto& b : r.bands) width += b.width();
    os << "bandwidth_Hz = " << num(width) << "\n"
       << "peak_realized_gain_dBi = " << num(r.peak_gain_dbi) << "\n"
       << "peak_gain_frequency_Hz = " << num(r.peak_gain_frequency) << "\n";
    if (!r.farfields.empty()) {
        const auto& ff = r.farfields[r.peak_index];
        const std::size_t i = band_index(r.s11.axis, ff.frequency);
        os << "peak_directivity_dBi = " << num(fdtd::FarField::to_dbi(ff.peak_directivity)) << "\n"
           << "radiation_efficiency = " << num(ff.radiated_power / r.powers.accepted[i]) << "\n";
    }
    os << "steps = " << r.steps << "\n"
       << "converged = " << (r.converged ? "true" : "false") << "\n"
       << "wall_seconds = " << num(r.wall_seconds) << "\n"
       << "cells = " << r.cells << "\n"
       << "isa = " << r.isa << "\n";
    return os.str();
}

void write_farfield_csv(std::ostream& os, const fdtd::FarField& ff, const std::string& header) {
    os << header << "angle_deg,e_plane_dBi,h_plane_dBi\n";
    char buf[96];
    for (std::size_t i = 0; i < ff.angles_deg.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g,%.10g,%.10g\n", ff.angles_deg[i], fdtd::FarField::to_dbi(ff.e_plane[i]),
                      fdtd::FarField::to_dbi(ff.h_plane[i]));
        os << buf;
    }
}

void write_antenna_outputs(const std::string& dir, const RunConfig& cfg, const AntennaOutcome& r, bool all_farfields) {
    ensure_dir(dir);
    const std::string header = config_header(cfg, "simulate " + r.label);
    {
        std::ostringstream os;
        write_s11_csv(os, r.s11, header);
        write_file(dir + "/s11.csv", os.str());
    }
    if (!r.farfields.empty()) {
        std::ostringstream os;
        write_farfield_csv(os, r.farfields[r.peak_index],
                           header + "# far field at " + num(r.farfields[r.peak_index].frequency) + " Hz\n");
        write_file(dir + "/farfield.csv", os.str());
    }
    if (all_farfields)
        for (const auto& ff : r.farfields) {
            std::ostringstream os;
            write_farfield_csv(os, ff, header + "# far field at " + num(ff.frequency) + " Hz\n");
            write_file(dir + "/farfield_" + num(ff.frequency * 1e-9) + "GHz.csv", os.str());
        }
    write_file(dir + "/summary.txt", summary_text(cfg, r));
}

// ---- sweep -------------------------------------------------------------------

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& dir) {
    cfg.validate();
    ensure_dir(dir);
    const std::size_t n = cfg.z_s.size();
    std::vector<SweepRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i].z_s = cfg.z_s[i];
    const std::string header = config_header(cfg, "sweep-zs");

    if (cfg.model == SweepModel::tmm) {
        const UnitCellOutcome cell = run_unitcell(cfg);
        const LayerStack stack = prs_stack(cfg, cell);
        const Sheet ground{sheet_material_named(cfg.ground, cfg)};
        const FrequencyAxis axis = cfg.band();
        parallel_for(n, cfg.workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                SweepRow& row = rows[i];
                try {
                    const Spectrum s = prs::sweep_cavity(stack, {row.z_s}, axis, ground).front();
                    std::ostringstream os;
                    write_gamma_csv(os, s, header + "# round-trip cavity reflection, z_s = " + num(row.z_s) + " m\n");
                    write_file(dir + "/" + zs_file(row.z_s), os.str());
                    row.phase_zero = prs::phase_zero_crossing(s);
                    if (!row.phase_zero.empty()) {
                        row.resonance = row.phase_zero.front();
                        const double mag = std::abs(s.values[band_index(axis, row.resonance)]);
                        row.gain_db = prs::trentini_directivity(std::min(mag, 1.0 - 1e-12)).db;
                    }
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
        });
    } else {
        const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n);
        const int inner = std::max(1, cfg.workers / static_cast<int>(std::max<std::size_t>(parts, 1)));
        parallel_for(n, static_cast<int>(parts), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                SweepRow& row = rows[i];
                try {
                    const AntennaOutcome r = simulate_antenna(cfg, Structure::cavity, row.z_s, inner);
                    std::ostringstream os;
                    write_gamma_csv(os, r.s11, header + "# port S11, z_s = " + num(row.z_s) + " m\n");
                    write_file(dir + "/" + zs_file(row.z_s), os.str());
                    row.resonance = r.resonance;
                    row.bands = r.bands;
                    row.phase_zero = prs::phase_zero_crossing(r.s11);
                    row.gain_db = r.peak_gain_dbi;
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
        });
    }
    std::ostringstream os;
    write_sweep_summary(os, rows, cfg.model, header);
    write_file(dir + "/summary.csv", os.str());
    return rows;
}

void write_sweep_summary(std::ostream& os, const std::vector<SweepRow>& rows, SweepModel model,
                         const std::string& header) {
    os << header << "z_s_m,status,resonance_Hz,bands_minus10dB_Hz,bandwidth_Hz,phase_zero_Hz,"
       << (model == SweepModel::fdtd ? "peak_realized_gain_dBi" : "ray_enhancement_dB") << "\n";
    for (const auto& r : rows) {
        if (!r.ok) {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            os << num(r.z_s) << ",error: " << msg << ",,,,,\n";
            continue;
        }
        double width = 0;
        for (const auto& b : r.bands) width += b.width();
        std::string zeros;
        for (std::size_t i = 0; i < r.phase_zero.size(); ++i) zeros += (i ? "; " : "") + num(r.phase_zero[i]);
        os << num(r.z_s) << ",ok," << (r.resonance > 0 ? num(r.resonance) : std::string()) << ","
           << (r.bands.empty() ? std::string("none") : format_bands(r.bands)) << "," << num(width) << ","
           << (zeros.empty() ? std::string("none") : zeros) << "," << num(r.gain_db) << "\n";
    }
}

// ---- compare / report ----------------------------------------------------------

RunSummary load_run(const std::string& dir) {
    RunSummary s;
    s.dir = dir;
    const IniSections ini = read_ini(read_file(dir + "/summary.txt"));
    const auto sec = ini.find("summary");
    if (sec == ini.end()) throw ValidationError("'" + dir + "/summary.txt' has no [summary] section");
    auto value = [&](const std::string& key) {
        const auto it = sec->second.find(key);
        if (it == sec->second.end()) throw ValidationError("'" + dir + "/summary.txt' lacks " + key);
        return std::stod(it->second);
    };
    s.resonance = value("resonance_Hz");
    s.bandwidth = value("bandwidth_Hz");
    s.peak_gain_dbi = value("peak_realized_gain_dBi");
    std::ifstream in(dir + "/s11.csv");
    if (!in) throw IoError("cannot read '" + dir + "/s11.csv'");
    s.axis = read_spectrum_csv(in).axis;
    return s;
}

Comparison compare_runs(const RunSummary& a, const RunSummary& b) {
    require(a.axis.same_grid(b.axis), "runs do not share a frequency axis: " + a.dir + " vs " + b.dir);
    return {b.resonance - a.resonance, b.bandwidth - a.bandwidth, b.peak_gain_dbi - a.peak_gain_dbi};
}

std::string comparison_text(const RunSummary& a, const RunSummary& b, const Comparison& c) {
    std::ostringstream os;
    os << "[compare]\n"
       << "run_a = " << a.dir << "\n"
       << "run_b = " << b.dir << "\n"
       << "resonance_a_Hz = " << num(a.resonance) << "\n"
       << "resonance_b_Hz = " << num(b.resonance) << "\n"
       << "resonance_shift_Hz = " << num(c.resonance_shift) << "\n"
       << "bandwidth_delta_Hz = " << num(c.bandwidth_delta) << "\n"
       << "peak_gain_delta_dB = " << num(c.gain_delta) << "\n";
    return os.str();
}

std::string build_report(const std::string& out_dir) {
    std::ostringstream os;
    os << "gprs report for " << out_dir << "\n";
    auto section = [&](const std::string& title, const std::string& path) {
        if (!fs::exists(path)) return;
        os << "\n== " << title << " (" << path << ")\n";
        std::istringstream in(read_file(path));
        for (std::string line; std::getline(in, line);)
            if (line.rfind("# ", 0) != 0 && line != "#") os << line << "\n";
    };
    section("design", out_dir + "/design.txt");
    section("unit cell", out_dir + "/unitcell/fit.txt");
    section("z_s sweep", out_dir + "/sweep/summary.csv");
    std::vector<std::string> runs;
    if (fs::is_directory(out_dir + "/simulate"))
        for (const auto& e : fs::directory_iterator(out_dir + "/simulate"))
            if (fs::exists(e.path() / "summary.txt")) runs.push_back(e.path().string());
    std::sort(runs.begin(), runs.end());
    for (const auto& r : runs) section("run " + fs::path(r).filename().string(), r + "/summary.txt");
    const std::string patch = out_dir + "/simulate/patch";
    for (const auto& r : runs) {
        if (r == patch || !fs::exists(patch + "/summary.txt")) continue;
        try {
            const RunSummary a = load_run(patch), b = load_run(r);
            os << "\n== patch vs " << fs::path(r).filename().string() << "\n" << comparison_text(a, b, compare_runs(a, b));
        } catch (const Error& e) {
            os << "\n== patch vs " << fs::path(r).filename().string() << ": " << e.what() << "\n";
        }
    }
    section("comparison", out_dir + "/compare.txt");
    return os.str();
}

}  // namespace gprs::app
