#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sastirap/dynamics.hpp"

namespace sastirap {

// Registry of sweepable parameters. Values follow the config-file unit
// conventions: frequencies in MHz, phases in units of pi, times in ns,
// scales dimensionless.
enum class SweepParameter {
    sigma,          // pulse width, ns
    ts_over_sigma,  // signed separation ratio; t_s = value * sigma
    phi01,          // pi units
    phi12,
    phi_2ph,
    a_scale,        // multiplies both STIRAP peak amplitudes
    a02_scale,      // multiplies the counterdiabatic scale
    omega_peaks,    // sets both STIRAP peaks, MHz
    phi_loop,       // loop phase Phi, pi units (maps onto phi_2ph)
};

SweepParameter parse_sweep_parameter(const std::string& name);
std::string sweep_parameter_name(SweepParameter p);
void apply_sweep_parameter(ProtocolConfig& cfg, SweepParameter p, double value);

struct SweepAxis {
    SweepParameter param;
    std::vector<double> values;
};

struct SweepGrid {
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    ProtocolConfig base;
    std::vector<std::string> outputs;  // column registry below; empty -> p0,p1,p2
    double dt_out = 0.5;               // ns, trajectory emission for the metrics
};

// Output columns: p0, p1, p2, max_p1, max_p2, t_transfer_09_ns, t_qsl_ns,
// max_adiabaticity_ratio, a_rad, a02_rad.
const std::vector<std::string>& sweep_output_registry();

struct ResultTable {
    std::string preamble;  // '#'-prefixed lines echoing the resolved config
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // |axis1| * |axis2| rows, axis1-major
    std::vector<std::string> errors;        // per-row tag, empty when the run succeeded

    void write_csv(std::ostream& os) const;
};

// Evaluates every grid point independently (worker pool; workers <= 0 picks
// the hardware concurrency). Identical results regardless of worker count.
ResultTable run_sweep(const SweepGrid& grid, int workers = 0);

enum class FigurePreset { fig2, fig3a, fig3b, fig4, fig5, fig6 };

FigurePreset parse_figure_preset(const std::string& name);

struct FigureOverrides {
    std::optional<bool> decoherence;  // presets fig3-fig5 default on, fig6 off
    std::optional<CdMode> mode;
    std::optional<int> grid_n;        // default 41 per axis
    std::optional<double> dt_out;
};

// Preset scans:
//   fig2  - population traces for STIRAP/saSTIRAP with and without decoherence
//   fig3a - STIRAP p2 over (sigma, |ts|/sigma)
//   fig3b - saSTIRAP p2 and transfer metrics over the same plane
//   fig4  - p2 over the three drive-phase planes, measured at t = +20 ns
//   fig5  - p2 over (counterdiabatic area, phi_2ph), two-photon drive
//   fig6  - p2 over (STIRAP area, counterdiabatic area)
ResultTable run_figure(FigurePreset preset, const FigureOverrides& ov = {}, int workers = 0);

}  // namespace sastirap
