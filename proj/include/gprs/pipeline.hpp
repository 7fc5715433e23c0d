#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gprs/config.hpp"
#include "gprs/fdtd/ntff.hpp"
#include "gprs/fdtd/port.hpp"
#include "gprs/fdtd/solver.hpp"
#include "gprs/prs_cavity.hpp"

// Command implementations shared by the CLI and the acceptance suite.
namespace gprs::app {

std::string design_report(const RunConfig& cfg);

fdtd::SimulationConfig solver_config(const RunConfig& cfg);

struct UnitCellOutcome {
    Spectrum gamma;                     // referred to the ring plane
    std::vector<cplx> sheet_impedance;  // de-embedded from the substrate
    std::optional<prs::SheetFit> fit;
    std::string fit_error;
    std::vector<prs::PhaseCrossing> crossings;  // of the normalised sheet reflection
    int steps = 0;
    double wall_seconds = 0;
};

LayerStack prs_backing(const RunConfig& cfg);
UnitCellOutcome run_unitcell(const RunConfig& cfg);
/// PRS stack for the 1D cavity model: the fitted LC sheet when the fit succeeded,
/// otherwise the measured impedance table.
LayerStack prs_stack(const RunConfig& cfg, const UnitCellOutcome& cell);

struct AntennaOutcome {
    std::string label;
    Spectrum s11;
    fdtd::PortPowers powers;
    std::vector<fdtd::FarField> farfields;  // one per gain frequency
    std::vector<double> realized_gain_dbi;
    double resonance = 0;
    std::vector<fdtd::Band> bands;
    double peak_gain_dbi = 0;
    double peak_gain_frequency = 0;
    std::size_t peak_index = 0;
    int steps = 0;
    bool converged = false;
    double wall_seconds = 0;
    std::size_t cells = 0;
    std::string isa;
};

VoxelGrid antenna_voxels(const RunConfig& cfg, Structure structure, double z_s, int workers);

/// Full-wave run of the bare patch (z_s ignored) or of the PRS cavity at z_s.
AntennaOutcome simulate_antenna(const RunConfig& cfg, Structure structure, double z_s, int workers);

std::string run_label(Structure structure, double z_s);
std::string summary_text(const RunConfig& cfg, const AntennaOutcome& r);
void write_farfield_csv(std::ostream& os, const fdtd::FarField& ff, const std::string& header);

/// Writes s11.csv, farfield.csv and summary.txt (and, with all_farfields, one
/// farfield_<GHz>GHz.csv per gain frequency) into `dir`.
void write_antenna_outputs(const std::string& dir, const RunConfig& cfg, const AntennaOutcome& r, bool all_farfields);

struct SweepRow {
    double z_s = 0;
    bool ok = false;
    std::string error;
    double resonance = 0;
    std::vector<fdtd::Band> bands;
    std::vector<double> phase_zero;
    double gain_db = 0;  // fdtd: peak realized gain; tmm: ray-model enhancement at resonance
};

/// Runs every z_s entry (concurrently up to cfg.workers), writing one CSV per
/// entry and summary.csv into `dir`. Entry failures are recorded, not thrown.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& dir);
void write_sweep_summary(std::ostream& os, const std::vector<SweepRow>& rows, SweepModel model,
                         const std::string& header);

/// Parsed summary.txt plus the S11 axis of a simulate output directory.
struct RunSummary {
    std::string dir;
    FrequencyAxis axis;
    double resonance = 0;
    double bandwidth = 0;  // total -10 dB width
    double peak_gain_dbi = 0;
};
RunSummary load_run(const std::string& dir);

struct Comparison {
    double resonance_shift = 0;  // b - a
    double bandwidth_delta = 0;
    double gain_delta = 0;
};
Comparison compare_runs(const RunSummary& a, const RunSummary& b);
std::string comparison_text(const RunSummary& a, const RunSummary& b, const Comparison& c);

/// Collects whatever the other commands left in `out_dir` into one text report.
std::string build_report(const std::string& out_dir);

std::string format_bands(const std::vector<fdtd::Band>& bands);
std::string config_header(const RunConfig& cfg, const std::string& command);
void ensure_dir(const std::string& dir);
void write_file(const std::string& path, const std::string& content);

}  // namespace gprs::app
