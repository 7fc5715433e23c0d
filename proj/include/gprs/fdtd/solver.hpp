#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "gprs/fdtd/ntff.hpp"
#include "gprs/fdtd/port.hpp"
#include "gprs/fdtd/source.hpp"
#include "gprs/simd/kernels.hpp"
#include "gprs/spectrum.hpp"
#include "gprs/voxel.hpp"

namespace gprs::fdtd {

enum class Boundary { pec, cpml, periodic };

/// Faces in the order x-, x+, y-, y+, z-, z+.
using Boundaries = std::array<Boundary, 6>;

inline constexpr Boundaries open_boundaries{Boundary::cpml, Boundary::cpml, Boundary::cpml,
                                            Boundary::cpml, Boundary::cpml, Boundary::cpml};

struct CpmlSpec {
    int layers = 10;
    double grading = 3.0;
    double sigma_max = 0.0;      // S/m; 0 selects 0.8 (m + 1) / (eta0 d) per axis
    double kappa_max = 1.0;
    double alpha_max = 0.28;     // S/m, ~ 2 pi 50 GHz eps0

    void validate() const;
};

/// Soft current on one edge; `component` is 0/1/2 for x/y/z, amplitude in A.
struct PointCurrent {
    int component = 2;
    int i = 0, j = 0, k = 0;
};

/// x-directed current sheet over a whole z-plane of a laterally periodic domain.
struct PlaneSource {
    int k = 0;
};

/// Plane-averaged tangential field sampled at every step.
struct PlaneProbe {
    int component = 0;  // 0 = Ex, 1 = Ey
    int k = 0;
};

struct SimulationConfig {
    double dt = 0.0;                 // 0 selects courant_fraction * limit
    double courant_fraction = 0.99;
    SourceSpec source;
    double port_impedance = 50.0;
    std::vector<PointCurrent> currents;
    std::optional<PlaneSource> plane_source;
    std::vector<PlaneProbe> probes;
    Boundaries boundaries = open_boundaries;
    CpmlSpec cpml;
    int max_steps = 200000;
    int min_steps = 0;               // floor on top of the source duration
    double energy_threshold = 1e-8;
    int energy_stride = 10;
    double loss_frequency = 800e9;   // dielectric loss tangent is matched here
    FrequencyAxis band;              // DFT axis for port and probes
    std::vector<double> ntff_frequencies;
    int ntff_gap = 3;                // cells between the CPML and the NTFF box
    bool record_series = true;
    int workers = 1;
    std::optional<simd::Isa> isa;    // default: runtime choice

    void validate() const;
};

double courant_limit(double dx, double dy, double dz);

struct ProbeRecord {
    PlaneProbe probe;
    std::vector<double> series;  // sampled at t = (n + 1) dt
    std::vector<cplx> dft;       // on SimulationConfig::band
};

struct CurrentRecord {
    PointCurrent where;
    std::vector<cplx> field_dft;    // edge E averaged to half steps
    std::vector<cplx> current_dft;  // source current
};

struct RunResult {
    double dt = 0;
    int steps = 0;
    bool converged = false;          // energy fell below the threshold
    double peak_energy = 0;
    double final_energy = 0;
    std::vector<double> energy;      // sampled every energy_stride steps
    int energy_stride = 1;
    std::optional<PortRecord> port;
    std::vector<ProbeRecord> probes;
    std::vector<CurrentRecord> currents;
    std::optional<NtffSurface> ntff;
    double wall_seconds = 0;
    std::size_t cells = 0;
    simd::Isa isa = simd::Isa::scalar;
};

class Solver {
public:
    Solver(const VoxelGrid& grid, const SimulationConfig& cfg);
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    /// Runs to the stop criterion. Throws NumericalError on NaN/Inf.
    RunResult run();

    /// Advances one step (sources, sampling and energy bookkeeping included).
    void step();
    int steps_taken() const;
    double dt() const;
    /// Discrete electromagnetic energy (J) at the last energy evaluation.
    double energy_now();
    double max_abs_field() const;
    RunResult result() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: Solver(grid, cfg).run().
RunResult simulate(const VoxelGrid& grid, const SimulationConfig& cfg);

}  // namespace gprs::fdtd
