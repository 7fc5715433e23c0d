// gprs command-line front end.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gprs/config.hpp"
#include "gprs/error.hpp"
#include "gprs/pipeline.hpp"
#include "gprs/voxel.hpp"

using namespace gprs;

namespace {

struct Globals {
    std::string config_path;
    std::string out;
    int workers = 0;
    double resolution = 0;
};

RunConfig load_config(const Globals& g) {
    RunConfig cfg = g.config_path.empty() ? RunConfig{} : RunConfig::load(g.config_path);
    if (!g.out.empty()) cfg.out = g.out;
    if (g.workers > 0) cfg.workers = g.workers;
    if (g.resolution > 0) cfg.fdtd.resolution = g.resolution;
    cfg.resolve();
    cfg.validate();
    return cfg;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int cmd_design(const Globals& g) {
    const RunConfig cfg = load_config(g);
    const std::string text = app::design_report(cfg);
    std::cout << text;
    app::ensure_dir(cfg.out);
    app::write_file(cfg.out + "/design.txt", app::config_header(cfg, "design") + text);
    return 0;
}

int cmd_unitcell(const Globals& g) {
    const RunConfig cfg = load_config(g);
    const app::UnitCellOutcome r = app::run_unitcell(cfg);
    const std::string dir = cfg.out + "/unitcell";
    app::ensure_dir(dir);
    const std::string header = app::config_header(cfg, "unitcell");
    {
        std::ostringstream os;
        write_gamma_csv(os, r.gamma, header);
        app::write_file(dir + "/gamma.csv", os.str());
    }
    {
        std::ostringstream os;
        os << header << "f_Hz,re_zs,im_zs\n";
        char buf[96];
        for (std::size_t i = 0; i < r.sheet_impedance.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", r.gamma.freq(i), r.sheet_impedance[i].real(),
                          r.sheet_impedance[i].imag());
            os << buf;
        }
        app::write_file(dir + "/sheet_impedance.csv", os.str());
    }
    std::ostringstream fit;
    fit << "[unitcell]\n"
        << "steps = " << r.steps << "\n"
        << "wall_seconds = " << fmt(r.wall_seconds) << "\n"
        << "reactance_zero_crossings_Hz = ";
    if (r.crossings.empty()) fit << "none";
    for (std::size_t i = 0; i < r.crossings.size(); ++i)
        fit << (i ? "; " : "") << fmt(r.crossings[i].f) << (r.crossings[i].rising ? " (rising)" : " (falling)");
    fit << "\n";
    if (r.fit) {
        fit << "fit_status = ok\n"
            << "L_H = " << fmt(r.fit->sheet.inductance) << "\n"
            << "C_F = " << fmt(r.fit->sheet.capacitance) << "\n"
            << "R_ohm = " << fmt(r.fit->sheet.resistance) << "\n"
            << "resonance_Hz = " << fmt(r.fit->resonance) << "\n"
            << "max_residual = " << fmt(r.fit->max_residual) << "\n"
            << "resonance_consistent = " << (r.fit->resonance_consistent ? "true" : "false") << "\n";
    } else {
        fit << "fit_status = failed: " << r.fit_error << "\n";
    }
    std::cout << fit.str();
    app::write_file(dir + "/fit.txt", header + fit.str());
    if (!r.fit) {
        std::cerr << "gprs: series-LC fit failed: " << r.fit_error << "\n";
        return 2;
    }
    return 0;
}

int cmd_sweep(const Globals& g, const std::string& model) {
    RunConfig cfg = load_config(g);
    if (model == "tmm") cfg.model = SweepModel::tmm;
    if (model == "fdtd") cfg.model = SweepModel::fdtd;
    const auto rows = app::run_sweep(cfg, cfg.out + "/sweep");
    app::write_sweep_summary(std::cout, rows, cfg.model, "");
    int failed = 0;
    for (const auto& r : rows) failed += r.ok ? 0 : 1;
    if (failed) {
        std::cerr << "gprs: " << failed << " of " << rows.size() << " sweep entries failed\n";
        return 2;
    }
    return 0;
}

int cmd_simulate(const Globals& g, const std::string& structure, double z_s, bool all_farfields, bool dump) {
    RunConfig cfg = load_config(g);
    if (structure == "patch") cfg.structure = Structure::patch;
    if (structure == "cavity") cfg.structure = Structure::cavity;
    const double zs = z_s > 0 ? z_s : cfg.z_s_optimal;
    const std::string dir = cfg.out + "/simulate/" + app::run_label(cfg.structure, zs);
    if (dump) {
        app::ensure_dir(dir);
        std::ofstream os(dir + "/grid.vox", std::ios::binary);
        write_voxel_dump(os, app::antenna_voxels(cfg, cfg.structure, zs, cfg.workers));
        if (!os) throw IoError("cannot write '" + dir + "/grid.vox'");
    }
    const app::AntennaOutcome r = app::simulate_antenna(cfg, cfg.structure, zs, cfg.workers);
    app::write_antenna_outputs(dir, cfg, r, all_farfields);
    const std::string summary = app::summary_text(cfg, r);
    std::cout << summary.substr(summary.find("[summary]"));
    return 0;
}

int cmd_compare(const Globals& g, const std::string& a, const std::string& b) {
    const app::RunSummary ra = app::load_run(a), rb = app::load_run(b);
    const app::Comparison c = app::compare_runs(ra, rb);
    const std::string text = app::comparison_text(ra, rb, c);
    std::cout << text;
    if (!g.out.empty() || !g.config_path.empty()) {
        const RunConfig cfg = load_config(g);
        app::ensure_dir(cfg.out);
        app::write_file(cfg.out + "/compare.txt", text);
    }
    return 0;
}

int cmd_report(const Globals& g) {
    const RunConfig cfg = load_config(g);
    const std::string text = app::build_report(cfg.out);
    std::cout << text;
    app::ensure_dir(cfg.out);
    app::write_file(cfg.out + "/report.txt", text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graphene patch / PRS cavity antenna toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Globals g;
    app.add_option("--config", g.config_path, "INI configuration file");
    app.add_option("--out", g.out, "output directory (overrides run.out)");
    app.add_option("--workers", g.workers, "worker threads (overrides run.workers)")->check(CLI::PositiveNumber);
    app.add_option("--resolution", g.resolution, "lateral FDTD cells per micrometre")->check(CLI::PositiveNumber);

    auto* design = app.add_subcommand("design", "closed-form patch design and geometry table");
    auto* unitcell = app.add_subcommand("unitcell", "periodic PRS unit-cell reflection and LC fit");
    auto* sweep = app.add_subcommand("sweep-zs", "antenna-PRS separation sweep");
    std::string model;
    sweep->add_option("--model", model, "fdtd (full assembly) or tmm (1D cavity)")
        ->check(CLI::IsMember({"fdtd", "tmm"}));
    std::string structure;
    double z_s = 0;
    bool dump = false;
    auto* simulate = app.add_subcommand("simulate", "full-wave antenna run: S11, far field, summary");
    auto* farfield = app.add_subcommand("farfield", "like simulate, with one pattern file per gain frequency");
    for (auto* sub : {simulate, farfield}) {
        sub->add_option("--structure", structure, "patch or cavity")->check(CLI::IsMember({"patch", "cavity"}));
        sub->add_option("--z-s", z_s, "antenna-PRS separation in m (cavity; default prs_cavity.z_s_optimal)")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--dump-voxels", dump, "also write the voxel grid as grid.vox");
    }
    auto* compare = app.add_subcommand("compare", "deltas between two simulate output directories");
    std::string run_a, run_b;
    compare->add_option("run_a", run_a, "reference run directory")->required();
    compare->add_option("run_b", run_b, "compared run directory")->required();
    auto* report = app.add_subcommand("report", "collect outputs under --out into report.txt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (design->parsed()) return cmd_design(g);
        if (unitcell->parsed()) return cmd_unitcell(g);
        if (sweep->parsed()) return cmd_sweep(g, model);
        if (simulate->parsed()) return cmd_simulate(g, structure, z_s, false, dump);
        if (farfield->parsed()) return cmd_simulate(g, structure, z_s, true, dump);
        if (compare->parsed()) return cmd_compare(g, run_a, run_b);
        if (report->parsed()) return cmd_report(g);
    } catch (const Error& e) {
        std::cerr << "gprs: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "gprs: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
