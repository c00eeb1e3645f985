// Command-line front end: single protocol runs, parameter sweeps, figure
// presets, waveform export, and tomography fitting.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sastirap/adiabatic.hpp"
#include "sastirap/config.hpp"
#include "sastirap/sweep.hpp"
#include "sastirap/tomography.hpp"
#include "sastirap/waveform.hpp"

namespace {

using namespace sastirap;

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    return f;
}

ProtocolConfig default_protocol() {
    ProtocolConfig p;
    p.stirap.omega01_peak = rabi_from_mhz(25.5);
    p.stirap.omega12_peak = rabi_from_mhz(25.5);
    p.stirap.sigma = 20.0;
    p.stirap.t_s = -30.0;
    return p;
}

ProtocolConfig load_protocol(const std::string& config_path, bool no_decoherence,
                             const std::string& mode) {
    ProtocolConfig p = config_path.empty() ? default_protocol()
                                           : protocol_from_config(ConfigFile::load(config_path));
    if (no_decoherence) p.rates = DecoherenceRates{};
    if (mode == "ideal")
        p.cd.mode = CdMode::ideal_effective;
    else if (mode == "two-photon")
        p.cd.mode = CdMode::two_photon;
    else if (!mode.empty())
        throw std::runtime_error("--mode must be ideal or two-photon");
    return p;
}

CalibrationTraces load_calibrations(const std::string& c0, const std::string& c1,
                                    const std::string& c2) {
    CalibrationTraces cal;
    auto [r0, step0] = read_trace_csv_file(c0);
    auto [r1, step1] = read_trace_csv_file(c1);
    auto [r2, step2] = read_trace_csv_file(c2);
    cal.r0 = std::move(r0);
    cal.r1 = std::move(r1);
    cal.r2 = std::move(r2);
    cal.tau_step = step0;
    (void)step1;
    (void)step2;
    cal.validate();
    return cal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"saSTIRAP qutrit protocol simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, mode;
    bool no_decoherence = false;
    int workers = 0;
    unsigned long long seed = 1;

    // run: single protocol -> trajectory csv
    auto* cmd_run = app.add_subcommand("run", "integrate one protocol and write the trajectory");
    double dt_out = 0.5;
    bool stirap_only = false;
    cmd_run->add_option("--config", config_path, "protocol config file");
    cmd_run->add_option("--out", out_path, "output csv path")->required();
    cmd_run->add_option("--dt-out", dt_out, "output sample spacing, ns");
    cmd_run->add_flag("--no-decoherence", no_decoherence, "zero all decay rates");
    cmd_run->add_option("--mode", mode, "counterdiabatic mode: ideal | two-photon");
    cmd_run->add_flag("--stirap-only", stirap_only, "disable the counterdiabatic drive");

    // sweep: grid from the [sweep] config section
    auto* cmd_sweep = app.add_subcommand("sweep", "run a 1D/2D parameter sweep");
    cmd_sweep->add_option("--config", config_path, "config file with a [sweep] section")
        ->required();
    cmd_sweep->add_option("--out", out_path, "output csv path")->required();
    cmd_sweep->add_option("--workers", workers, "worker threads (default: all cores)");
    cmd_sweep->add_flag("--no-decoherence", no_decoherence, "zero all decay rates");
    cmd_sweep->add_option("--mode", mode, "counterdiabatic mode: ideal | two-photon");

    // figure: canned scans
    auto* cmd_fig = app.add_subcommand("figure", "run a preset scan");
    std::string figure_name;
    int grid_n = 0;
    cmd_fig->add_option("name", figure_name, "fig2 | fig3a | fig3b | fig4 | fig5 | fig6")
        ->required();
    cmd_fig->add_option("--out", out_path, "output csv path")->required();
    cmd_fig->add_option("--workers", workers, "worker threads");
    cmd_fig->add_option("--grid", grid_n, "grid points per axis (default 41)");
    cmd_fig->add_flag("--no-decoherence", no_decoherence, "zero all decay rates");
    cmd_fig->add_option("--mode", mode, "counterdiabatic mode: ideal | two-photon");

    // waveform export
    auto* cmd_wf = app.add_subcommand("waveform", "waveform synthesis");
    auto* cmd_wf_export = cmd_wf->add_subcommand("export", "write sampled IF waveforms");
    std::string out_prefix = "waveform";
    double full_scale = 1.0;
    bool wf_csv = false;
    cmd_wf_export->add_option("--config", config_path, "protocol + [waveform] config file");
    cmd_wf_export->add_option("--out-prefix", out_prefix, "output path prefix");
    cmd_wf_export->add_option("--full-scale", full_scale, "int16 full-scale amplitude, volts");
    cmd_wf_export->add_flag("--csv", wf_csv, "also write csv debug files");

    // tomography
    auto* cmd_tomo = app.add_subcommand("tomo", "three-level readout emulation and fitting");
    std::string cal0, cal1, cal2, meas_path;
    double zeta01 = 0.0, zeta12 = 0.0, zeta02 = 0.0;
    bool unconstrained = false;
    auto* cmd_fit = cmd_tomo->add_subcommand("fit", "fit populations to a measured trace");
    cmd_fit->add_option("--cal0", cal0, "state |0> calibration trace csv")->required();
    cmd_fit->add_option("--cal1", cal1, "state |1> calibration trace csv")->required();
    cmd_fit->add_option("--cal2", cal2, "state |2> calibration trace csv")->required();
    cmd_fit->add_option("--meas", meas_path, "measured trace csv")->required();
    cmd_fit->add_option("--zeta01", zeta01, "leakage correction 0-1");
    cmd_fit->add_option("--zeta12", zeta12, "leakage correction 1-2");
    cmd_fit->add_option("--zeta02", zeta02, "leakage correction 0-2");
    cmd_fit->add_flag("--unconstrained", unconstrained, "plain least squares, no simplex");

    auto* cmd_synth = cmd_tomo->add_subcommand("synth", "synthesize a measured trace");
    double sp0 = 1.0, sp1 = 0.0, sp2 = 0.0, noise = 0.0;
    cmd_synth->add_option("--cal0", cal0)->required();
    cmd_synth->add_option("--cal1", cal1)->required();
    cmd_synth->add_option("--cal2", cal2)->required();
    cmd_synth->add_option("--p0", sp0, "population of |0>");
    cmd_synth->add_option("--p1", sp1, "population of |1>");
    cmd_synth->add_option("--p2", sp2, "population of |2>");
    cmd_synth->add_option("--noise", noise, "gaussian noise sigma, trace units");
    cmd_synth->add_option("--seed", seed, "noise seed");
    cmd_synth->add_option("--out", out_path, "output trace csv")->required();

    auto* cmd_calgen = cmd_tomo->add_subcommand("calgen", "write model calibration traces");
    size_t cal_n = 200;
    double cal_step = 4.0;
    cmd_calgen->add_option("--samples", cal_n, "samples per trace");
    cmd_calgen->add_option("--tau-step", cal_step, "sample spacing, ns");
    cmd_calgen->add_option("--out-prefix", out_prefix, "output path prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            ProtocolConfig p = load_protocol(config_path, no_decoherence, mode);
            if (stirap_only) p.cd_enabled = false;
            const Trajectory traj = evolve(p, QutritState::ground(), dt_out);
            auto f = open_out(out_path);
            f << echo_protocol(p);
            write_trajectory_csv(f, traj);
            const Populations pops = traj.final_populations();
            std::cout << "final populations: " << pops.p0 << " " << pops.p1 << " " << pops.p2
                      << "\n";
        } else if (cmd_sweep->parsed()) {
            const ConfigFile cfg = ConfigFile::load(config_path);
            SweepGrid grid;
            grid.base = load_protocol(config_path, no_decoherence, mode);
            const std::string ax1 = cfg.get_str("sweep", "axis1", "");
            if (ax1.empty()) throw std::runtime_error("config: [sweep] axis1 is required");
            grid.axis1 = {parse_sweep_parameter(ax1), cfg.get_values("sweep", "axis1_values")};
            const std::string ax2 = cfg.get_str("sweep", "axis2", "");
            if (!ax2.empty())
                grid.axis2 =
                    SweepAxis{parse_sweep_parameter(ax2), cfg.get_values("sweep", "axis2_values")};
            const std::string outs = cfg.get_str("sweep", "outputs", "");
            if (!outs.empty()) {
                std::istringstream is(outs);
                std::string tok;
                while (std::getline(is, tok, ',')) {
                    tok.erase(0, tok.find_first_not_of(" \t"));
                    tok.erase(tok.find_last_not_of(" \t") + 1);
                    if (!tok.empty()) grid.outputs.push_back(tok);
                }
            }
            grid.dt_out = cfg.get_double("protocol", "dt_out_ns", 0.5);
            const ResultTable table = run_sweep(grid, workers);
            auto f = open_out(out_path);
            table.write_csv(f);
            std::cout << table.rows.size() << " grid points written to " << out_path << "\n";
        } else if (cmd_fig->parsed()) {
            FigureOverrides ov;
            if (no_decoherence) ov.decoherence = false;
            if (grid_n > 0) ov.grid_n = grid_n;
            if (mode == "ideal") ov.mode = CdMode::ideal_effective;
            else if (mode == "two-photon") ov.mode = CdMode::two_photon;
            const ResultTable table = run_figure(parse_figure_preset(figure_name), ov, workers);
            auto f = open_out(out_path);
            table.write_csv(f);
            std::cout << table.rows.size() << " rows written to " << out_path << "\n";
        } else if (cmd_wf_export->parsed()) {
            const ConfigFile cfg =
                config_path.empty() ? ConfigFile::parse("") : ConfigFile::load(config_path);
            ProtocolConfig proto = config_path.empty()
                                       ? load_protocol("", false, "")
                                       : protocol_from_config(cfg);
            WaveformConfig wcfg = waveform_from_config(cfg);
            if (wcfg.cal01 > 0 && wcfg.cal12 > 0 && wcfg.cal2ph > 0)
                wcfg = with_amplitudes_from(wcfg, proto);
            const WaveformSet set = synth_waveforms(wcfg, proto);
            const struct {
                const SampledWaveform* wf;
                const char* tag;
            } items[3] = {{&set.w01, "01"}, {&set.w12, "12"}, {&set.w2ph, "2ph"}};
            for (const auto& item : items) {
                write_awg_file(out_prefix + "_" + item.tag + ".awg", *item.wf, full_scale);
                if (wf_csv) {
                    auto f = open_out(out_prefix + "_" + item.tag + ".csv");
                    write_waveform_csv(f, *item.wf);
                }
            }
            std::cout << "wrote " << out_prefix << "_{01,12,2ph}.awg ("
                      << set.w01.i_samples.size() << " samples)\n";
        } else if (cmd_fit->parsed()) {
            CalibrationTraces cal = load_calibrations(cal0, cal1, cal2);
            if (zeta01 > 0 || zeta12 > 0 || zeta02 > 0)
                cal = correct_calibrations(cal, {zeta01, zeta12, zeta02});
            auto [meas, step] = read_trace_csv_file(meas_path);
            (void)step;
            const Eigen::Vector3d p = unconstrained ? fit_populations_unconstrained(meas, cal)
                                                    : fit_populations(meas, cal);
            std::cout << "p0 " << p(0) << "\np1 " << p(1) << "\np2 " << p(2) << "\n";
        } else if (cmd_synth->parsed()) {
            const CalibrationTraces cal = load_calibrations(cal0, cal1, cal2);
            const auto trace =
                synthesize_trace(Eigen::Vector3d(sp0, sp1, sp2), cal, noise, seed);
            write_trace_csv_file(out_path, trace, cal.tau_step);
            std::cout << "wrote " << out_path << "\n";
        } else if (cmd_calgen->parsed()) {
            const CalibrationTraces cal = make_calibration_traces(cal_n, cal_step);
            write_trace_csv_file(out_prefix + "_r0.csv", cal.r0, cal.tau_step);
            write_trace_csv_file(out_prefix + "_r1.csv", cal.r1, cal.tau_step);
            write_trace_csv_file(out_prefix + "_r2.csv", cal.r2, cal.tau_step);
            std::cout << "wrote " << out_prefix << "_r{0,1,2}.csv\n";
        } else {
            std::cerr << "no subcommand action\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
