#include "sastirap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sastirap/adiabatic.hpp"
#include "sastirap/config.hpp"
#include "sastirap/gauge.hpp"

namespace sastirap {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

void run_pool(size_t n_tasks, int workers, const std::function<void(size_t)>& task) {
    int n = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(1, std::min<int>(n, static_cast<int>(n_tasks)));
    if (n == 1) {
        for (size_t i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) task(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "sigma") return SweepParameter::sigma;
    if (name == "ts_over_sigma") return SweepParameter::ts_over_sigma;
    if (name == "phi01") return SweepParameter::phi01;
    if (name == "phi12") return SweepParameter::phi12;
    if (name == "phi_2ph") return SweepParameter::phi_2ph;
    if (name == "A_scale") return SweepParameter::a_scale;
    if (name == "A02_scale") return SweepParameter::a02_scale;
    if (name == "omega_peaks") return SweepParameter::omega_peaks;
    if (name == "Phi") return SweepParameter::phi_loop;
    throw std::invalid_argument("unknown sweep parameter: " + name);
}

std::string sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::sigma: return "sigma";
        case SweepParameter::ts_over_sigma: return "ts_over_sigma";
        case SweepParameter::phi01: return "phi01";
        case SweepParameter::phi12: return "phi12";
        case SweepParameter::phi_2ph: return "phi_2ph";
        case SweepParameter::a_scale: return "A_scale";
        case SweepParameter::a02_scale: return "A02_scale";
        case SweepParameter::omega_peaks: return "omega_peaks";
        case SweepParameter::phi_loop: return "Phi";
    }
    return "?";
}

void apply_sweep_parameter(ProtocolConfig& cfg, SweepParameter p, double value) {
    switch (p) {
        case SweepParameter::sigma:
            cfg.stirap.sigma = value;
            return;
        case SweepParameter::ts_over_sigma:
            cfg.stirap.t_s = value * cfg.stirap.sigma;
            return;
        case SweepParameter::phi01:
            cfg.stirap.phi01 = rad_from_pi_units(value);
            return;
        case SweepParameter::phi12:
            cfg.stirap.phi12 = rad_from_pi_units(value);
            return;
        case SweepParameter::phi_2ph:
            cfg.cd.phi_2ph = rad_from_pi_units(value);
            return;
        case SweepParameter::a_scale:
            cfg.stirap.omega01_peak *= value;
            cfg.stirap.omega12_peak *= value;
            return;
        case SweepParameter::a02_scale:
            cfg.cd.scale *= value;
            return;
        case SweepParameter::omega_peaks:
            cfg.stirap.omega01_peak = rabi_from_mhz(value);
            cfg.stirap.omega12_peak = rabi_from_mhz(value);
            return;
        case SweepParameter::phi_loop:
            // Phi = phi01 + phi12 + phi20, phi20 = -2 phi_2ph - pi
            cfg.cd.phi_2ph = two_photon_for_phi20(
                rad_from_pi_units(value) - cfg.stirap.phi01 - cfg.stirap.phi12);
            return;
    }
    throw std::logic_error("apply_sweep_parameter: unhandled parameter");
}

const std::vector<std::string>& sweep_output_registry() {
    static const std::vector<std::string> reg = {
        "p0",        "p1",       "p2",          "max_p1",  "max_p2",
        "t_transfer_09_ns", "t_qsl_ns", "max_adiabaticity_ratio", "a_rad", "a02_rad"};
    return reg;
}

namespace {

double evaluate_output(const std::string& name, const ProtocolConfig& cfg, const Trajectory& traj) {
    if (name == "p0") return traj.final_populations().p0;
    if (name == "p1") return traj.final_populations().p1;
    if (name == "p2") return traj.final_populations().p2;
    if (name == "max_p1") return traj.max_p1();
    if (name == "max_p2") return traj.max_p2();
    if (name == "t_transfer_09_ns" || name == "t_qsl_ns") {
        if (!cfg.cd_enabled && name == "t_qsl_ns") return kNan;
        const double peak = cfg.cd_enabled ? effective_cd_peak(cfg.stirap, cfg.cd) : 0.0;
        if (peak <= 0.0) {
            if (name == "t_qsl_ns") return kNan;
            const TransferMetrics m = transfer_metrics(traj, 1.0);
            return m.t_transfer_09 ? *m.t_transfer_09 : kNan;
        }
        const TransferMetrics m = transfer_metrics(traj, peak);
        if (name == "t_qsl_ns") return m.t_qsl;
        return m.t_transfer_09 ? *m.t_transfer_09 : kNan;
    }
    if (name == "max_adiabaticity_ratio") return max_adiabaticity_ratio(cfg.stirap);
    if (name == "a_rad") return pulse_areas(cfg.stirap, cfg.cd).a;
    if (name == "a02_rad")
        return cfg.cd_enabled ? pulse_areas(cfg.stirap, cfg.cd).a02 : 0.0;
    throw std::invalid_argument("unknown sweep output: " + name);
}

}  // namespace

void ResultTable::write_csv(std::ostream& os) const {
    os << preamble;
    for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << ",error\n";
    os.precision(12);
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < rows[r].size(); ++c) {
            if (c) os << ',';
            if (std::isnan(rows[r][c]))
                os << "nan";
            else
                os << rows[r][c];
        }
        os << ',' << errors[r] << '\n';
    }
}

ResultTable run_sweep(const SweepGrid& grid, int workers) {
    grid.base.validate();
    if (grid.axis1.values.empty()) throw std::invalid_argument("run_sweep: empty axis1");
    if (grid.axis2 && grid.axis2->values.empty())
        throw std::invalid_argument("run_sweep: empty axis2");
    std::vector<std::string> outputs = grid.outputs;
    if (outputs.empty()) outputs = {"p0", "p1", "p2"};
    for (const auto& o : outputs)
        if (std::find(sweep_output_registry().begin(), sweep_output_registry().end(), o) ==
            sweep_output_registry().end())
            throw std::invalid_argument("unknown sweep output: " + o);

    const size_t n1 = grid.axis1.values.size();
    const size_t n2 = grid.axis2 ? grid.axis2->values.size() : 1;

    ResultTable table;
    table.preamble = echo_protocol(grid.base);
    table.columns.push_back(sweep_parameter_name(grid.axis1.param));
    if (grid.axis2) table.columns.push_back(sweep_parameter_name(grid.axis2->param));
    for (const auto& o : outputs) table.columns.push_back(o);
    table.rows.assign(n1 * n2, {});
    table.errors.assign(n1 * n2, "");

    run_pool(n1 * n2, workers, [&](size_t idx) {
        const size_t i1 = idx / n2, i2 = idx % n2;
        std::vector<double>& row = table.rows[idx];
        row.push_back(grid.axis1.values[i1]);
        if (grid.axis2) row.push_back(grid.axis2->values[i2]);
        try {
            ProtocolConfig cfg = grid.base;
            apply_sweep_parameter(cfg, grid.axis1.param, grid.axis1.values[i1]);
            if (grid.axis2) apply_sweep_parameter(cfg, grid.axis2->param, grid.axis2->values[i2]);
            cfg.validate();
            const Trajectory traj = evolve(cfg, QutritState::ground(), grid.dt_out);
            for (const auto& o : outputs) row.push_back(evaluate_output(o, cfg, traj));
        } catch (const std::exception& e) {
            while (row.size() < table.columns.size()) row.push_back(kNan);
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            table.errors[idx] = msg;
        }
    });
    return table;
}

FigurePreset parse_figure_preset(const std::string& name) {
    if (name == "fig2") return FigurePreset::fig2;
    if (name == "fig3a") return FigurePreset::fig3a;
    if (name == "fig3b") return FigurePreset::fig3b;
    if (name == "fig4") return FigurePreset::fig4;
    if (name == "fig5") return FigurePreset::fig5;
    if (name == "fig6") return FigurePreset::fig6;
    throw std::invalid_argument("unknown figure preset: " + name);
}

namespace {

ProtocolConfig default_operating_point(bool decoherence) {
    ProtocolConfig p;
    p.stirap.omega01_peak = rabi_from_mhz(25.5);
    p.stirap.omega12_peak = rabi_from_mhz(25.5);
    p.stirap.sigma = 20.0;
    p.stirap.t_s = -30.0;
    p.cd.mode = CdMode::ideal_effective;
    p.cd.phi_2ph = -kPi / 4.0;
    p.cd.delta = rabi_from_mhz(185.0);
    if (decoherence) {
        p.rates.gamma01 = rate_from_mhz(0.6);
        p.rates.gamma12 = rate_from_mhz(0.83);
    }
    return p;
}

ResultTable figure2(const FigureOverrides& ov) {
    const double dt = ov.dt_out.value_or(0.5);
    ProtocolConfig dec = default_operating_point(ov.decoherence.value_or(true));
    if (ov.mode) dec.cd.mode = *ov.mode;
    ProtocolConfig nodec = dec;
    nodec.rates = DecoherenceRates{};

    const Trajectory tr_st = run_stirap(dec, QutritState::ground(), dt);
    const Trajectory tr_sa = evolve(dec, QutritState::ground(), dt);
    const Trajectory tr_st0 = run_stirap(nodec, QutritState::ground(), dt);
    const Trajectory tr_sa0 = evolve(nodec, QutritState::ground(), dt);

    ResultTable t;
    t.preamble = echo_protocol(dec);
    t.columns = {"t_ns",
                 "p0_stirap", "p1_stirap", "p2_stirap",
                 "p0_sastirap", "p1_sastirap", "p2_sastirap",
                 "p0_stirap_nodec", "p1_stirap_nodec", "p2_stirap_nodec",
                 "p0_sastirap_nodec", "p1_sastirap_nodec", "p2_sastirap_nodec"};
    for (size_t i = 0; i < tr_st.times.size(); ++i) {
        std::vector<double> row{tr_st.times[i]};
        for (const Trajectory* tr : {&tr_st, &tr_sa, &tr_st0, &tr_sa0}) {
            const Populations p = populations(tr->states[i]);
            row.push_back(p.p0);
            row.push_back(p.p1);
            row.push_back(p.p2);
        }
        t.rows.push_back(std::move(row));
        t.errors.emplace_back();
    }
    return t;
}

ResultTable figure3(bool with_cd, const FigureOverrides& ov, int workers) {
    const int n = ov.grid_n.value_or(41);
    SweepGrid g;
    g.base = default_operating_point(ov.decoherence.value_or(true));
    if (ov.mode) g.base.cd.mode = *ov.mode;
    g.base.cd_enabled = with_cd;
    g.axis1 = {SweepParameter::sigma, linspace(10.0, 40.0, n)};
    SweepAxis ax2{SweepParameter::ts_over_sigma, linspace(-3.0, -1.0, n)};
    g.axis2 = ax2;
    g.outputs = with_cd ? std::vector<std::string>{"p2", "t_transfer_09_ns", "t_qsl_ns",
                                                   "max_adiabaticity_ratio"}
                        : std::vector<std::string>{"p2", "max_adiabaticity_ratio"};
    g.dt_out = ov.dt_out.value_or(0.25);
    return run_sweep(g, workers);
}

ResultTable figure4(const FigureOverrides& ov, int workers) {
    const int n = ov.grid_n.value_or(41);
    ProtocolConfig base = default_operating_point(ov.decoherence.value_or(true));
    if (ov.mode) base.cd.mode = *ov.mode;
    base.t_end = 20.0;  // readout 20 ns after the 0-1 pulse maximum

    const auto vals = linspace(-1.0, 1.0, n);
    struct Plane {
        SweepParameter a, b;
    };
    const Plane planes[3] = {{SweepParameter::phi12, SweepParameter::phi_2ph},
                             {SweepParameter::phi01, SweepParameter::phi_2ph},
                             {SweepParameter::phi12, SweepParameter::phi01}};

    ResultTable t;
    t.preamble = echo_protocol(base);
    t.columns = {"plane", "phi_a_pi", "phi_b_pi", "p2"};
    const size_t per = static_cast<size_t>(n) * n;
    t.rows.assign(3 * per, {});
    t.errors.assign(3 * per, "");
    run_pool(3 * per, workers, [&](size_t idx) {
        const size_t pl = idx / per;
        const size_t i = (idx % per) / n, j = (idx % per) % n;
        auto& row = t.rows[idx];
        row = {static_cast<double>(pl), vals[i], vals[j], kNan};
        try {
            ProtocolConfig cfg = base;
            apply_sweep_parameter(cfg, planes[pl].a, vals[i]);
            apply_sweep_parameter(cfg, planes[pl].b, vals[j]);
            row[3] = evolve(cfg, QutritState::ground(), 5.0).final_populations().p2;
        } catch (const std::exception& e) {
            t.errors[idx] = e.what();
        }
    });
    return t;
}

ResultTable figure5(const FigureOverrides& ov, int workers) {
    const int n = ov.grid_n.value_or(41);
    SweepGrid g;
    g.base = default_operating_point(ov.decoherence.value_or(true));
    g.base.cd.mode = ov.mode.value_or(CdMode::two_photon);
    g.axis1 = {SweepParameter::a02_scale, linspace(0.0, 2.0, n)};
    g.axis2 = SweepAxis{SweepParameter::phi_2ph, linspace(-1.0, 1.0, n)};
    g.outputs = {"p2", "a02_rad"};
    return run_sweep(g, workers);
}

ResultTable figure6(const FigureOverrides& ov, int workers) {
    const int n = ov.grid_n.value_or(41);
    SweepGrid g;
    g.base = default_operating_point(ov.decoherence.value_or(false));
    g.base.cd.mode = ov.mode.value_or(CdMode::ideal_effective);
    // peak sweep up to 40 MHz; cd scale up to the 77 MHz two-photon amplitude
    const double scale_max = effective_two_photon(rabi_from_mhz(77.0), g.base.cd.delta) /
                             (std::abs(g.base.stirap.t_s) /
                              (g.base.stirap.sigma * g.base.stirap.sigma));
    g.axis1 = {SweepParameter::omega_peaks, linspace(0.0, 40.0, n)};
    g.axis2 = SweepAxis{SweepParameter::a02_scale, linspace(0.0, scale_max, n)};
    g.outputs = {"p2", "a_rad", "a02_rad"};
    return run_sweep(g, workers);
}

}  // namespace

ResultTable run_figure(FigurePreset preset, const FigureOverrides& ov, int workers) {
    switch (preset) {
        case FigurePreset::fig2: return figure2(ov);
        case FigurePreset::fig3a: return figure3(false, ov, workers);
        case FigurePreset::fig3b: return figure3(true, ov, workers);
        case FigurePreset::fig4: return figure4(ov, workers);
        case FigurePreset::fig5: return figure5(ov, workers);
        case FigurePreset::fig6: return figure6(ov, workers);
    }
    throw std::logic_error("run_figure: unhandled preset");
}

}  // namespace sastirap
