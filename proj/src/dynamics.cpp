#include "sastirap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sastirap/rk45.hpp"

namespace sastirap {

namespace {

using State = Eigen::Matrix<Complex, 10, 1>;  // rho (row-major 9) + stark integral

State pack(const Matrix3c& rho, double s) {
    State y;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) y[3 * r + c] = rho(r, c);
    y[9] = Complex(s, 0.0);
    return y;
}

Matrix3c unpack_rho(const State& y) {
    Matrix3c rho;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rho(r, c) = y[3 * r + c];
    return rho;
}

// two-photon tone phase at time t given the accumulated integral
// s = int Omega2ph^2 dt'; the transition corrections are proportional to it.
PhaseCorrections corrections_from_integral(double s, double delta) {
    PhaseCorrections c;
    c.phi01 = s / delta;
    c.phi12 = -1.25 * s / delta;
    c.phi02 = -0.25 * s / delta;
    return c;
}

bool stark_active(const ProtocolConfig& cfg) {
    return cfg.cd_enabled && cfg.stark_correction && cfg.cd.mode == CdMode::two_photon;
}

Matrix3c assemble_h(double t, const ProtocolConfig& cfg, double stark_integral) {
    const Complex i(0.0, 1.0);
    const Envelopes env = stirap_envelopes(t, cfg.stirap);
    PhaseCorrections corr;
    if (stark_active(cfg)) corr = corrections_from_integral(stark_integral, cfg.cd.delta);

    Matrix3c h = Matrix3c::Zero();
    h(0, 1) = 0.5 * env.omega01 * std::exp(i * (cfg.stirap.phi01 + corr.phi01));
    h(1, 2) = 0.5 * env.omega12 * std::exp(i * (cfg.stirap.phi12 + corr.phi12));

    if (cfg.cd_enabled) {
        if (cfg.cd.mode == CdMode::two_photon) {
            const double w = two_photon_envelope(t, cfg.stirap, cfg.cd);
            if (w != 0.0) {
                // loop-phase offset maps onto the tone as -offset/2
                const double p = cfg.cd.phi_2ph - 0.5 * cfg.phase_offset + 0.5 * corr.phi02;
                h(0, 1) += 0.5 * w * std::exp(i * (p - cfg.cd.delta * t));
                h(1, 2) += 0.5 * std::numbers::sqrt2 * w * std::exp(i * (p + cfg.cd.delta * t));
            }
        } else {
            const double w = effective_cd_envelope(t, cfg.stirap, cfg.cd);
            if (w != 0.0) {
                const double phi20 = -2.0 * cfg.cd.phi_2ph - kPi + cfg.phase_offset;
                h(0, 2) = 0.5 * w * std::exp(-i * phi20);
            }
        }
    }
    h(1, 0) = std::conj(h(0, 1));
    h(2, 1) = std::conj(h(1, 2));
    h(2, 0) = std::conj(h(0, 2));
    return h;
}

double stark_integrand(double t, const ProtocolConfig& cfg) {
    if (!stark_active(cfg)) return 0.0;
    const double w = two_photon_envelope(t, cfg.stirap, cfg.cd);
    return w * w;
}

std::vector<double> emission_times(double t0, double t1, double dt_out) {
    if (dt_out < 1e-6) throw std::invalid_argument("evolve: dt_out must be >= 1e-6 ns");
    std::vector<double> out;
    for (long k = 0;; ++k) {
        const double t = t0 + static_cast<double>(k) * dt_out;
        if (t >= t1 - 1e-9) break;
        out.push_back(t);
    }
    out.push_back(t1);
    return out;
}

// sorted union of cut points, entries closer than 1e-9 merged
std::vector<double> merge_cuts(std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts)
        if (out.empty() || p - out.back() > 1e-9) out.push_back(p);
    return out;
}

}  // namespace

std::pair<double, double> ProtocolConfig::window() const {
    const double lo = std::min(-3.0 * stirap.sigma, stirap.t_s - 3.0 * stirap.sigma) - 1.0;
    const double hi = std::max(3.0 * stirap.sigma, stirap.t_s + 3.0 * stirap.sigma) + 1.0;
    return {t_start.value_or(lo), t_end.value_or(hi)};
}

void ProtocolConfig::validate() const {
    stirap.validate();
    cd.validate();
    rates.validate();
    const auto [a, b] = window();
    if (!(a < b)) throw std::invalid_argument("ProtocolConfig: t_start must be < t_end");
    if (abs_tol <= 0.0 || rel_tol <= 0.0)
        throw std::invalid_argument("ProtocolConfig: tolerances must be > 0");
}

Populations Trajectory::final_populations() const {
    if (states.empty()) throw std::logic_error("Trajectory: empty");
    return populations(states.back());
}

double Trajectory::max_p1() const {
    double m = 0.0;
    for (const auto& s : states) m = std::max(m, s.rho(1, 1).real());
    return m;
}

double Trajectory::max_p2() const {
    double m = 0.0;
    for (const auto& s : states) m = std::max(m, s.rho(2, 2).real());
    return m;
}

Matrix3c hamiltonian_at(double t, const ProtocolConfig& cfg) {
    cfg.validate();
    double s = 0.0;
    if (stark_active(cfg)) {
        const auto [t0, te] = cfg.window();
        const double hi = std::min(t, te);
        if (hi > t0) {
            const auto bp = support_breakpoints(cfg.stirap, t0, hi);
            for (size_t i = 0; i + 1 < bp.size(); ++i)
                s += adaptive_simpson([&](double u) { return stark_integrand(u, cfg); }, bp[i],
                                      bp[i + 1], 1e-10);
        }
    }
    return assemble_h(t, cfg, s);
}

std::vector<PhaseCorrections> dynamic_phase_series(const std::vector<double>& times,
                                                   const ProtocolConfig& cfg) {
    cfg.validate();
    std::vector<PhaseCorrections> out(times.size());
    if (!stark_active(cfg)) return out;
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("dynamic_phase_series: times must be increasing");

    const auto [t0, te] = cfg.window();
    using S1 = Eigen::Matrix<Complex, 1, 1>;
    Rk45<S1> stepper(cfg.abs_tol, cfg.rel_tol);
    S1 y;
    y[0] = 0.0;
    auto rhs = [&](double t, const S1&) {
        S1 d;
        d[0] = Complex(stark_integrand(t, cfg), 0.0);
        return d;
    };
    double t = t0;
    for (size_t i = 0; i < times.size(); ++i) {
        const double target = std::min(times[i], te);
        if (target > t) {
            const auto bp = support_breakpoints(cfg.stirap, t, target);
            for (size_t k = 0; k + 1 < bp.size(); ++k) stepper.integrate(y, bp[k], bp[k + 1], rhs);
            t = target;
        }
        out[i] = corrections_from_integral(y[0].real(), cfg.cd.delta);
    }
    return out;
}

PhaseCorrections dynamic_phase(double t, const ProtocolConfig& cfg) {
    return dynamic_phase_series({t}, cfg).front();
}

namespace {

Trajectory integrate_master(const ProtocolConfig* cfg, const std::function<Matrix3c(double)>* hfun,
                            const DecoherenceRates& rates, const QutritState& rho0, double t0,
                            double t1, double dt_out, std::vector<double> breakpoints,
                            double abs_tol, double rel_tol) {
    rho0.validate();
    rates.validate();
    if (!(t0 < t1)) throw std::invalid_argument("evolve: t_start must be < t_end");

    auto rhs = [&](double t, const State& y) {
        const Matrix3c rho = unpack_rho(y);
        const Matrix3c h = cfg ? assemble_h(t, *cfg, y[9].real()) : (*hfun)(t);
        State d = pack(lindblad_rhs(h, rho, rates), cfg ? stark_integrand(t, *cfg) : 0.0);
        return d;
    };

    const std::vector<double> emit = emission_times(t0, t1, dt_out);
    std::vector<double> all_cuts = breakpoints;
    all_cuts.insert(all_cuts.end(), emit.begin(), emit.end());
    const std::vector<double> cuts = merge_cuts(std::move(all_cuts));

    Trajectory traj;
    traj.two_photon = cfg && cfg->cd_enabled && cfg->cd.mode == CdMode::two_photon;
    size_t next_emit = 0;

    auto record = [&](double t, const State& y) {
        QutritState s;
        const Matrix3c rho = unpack_rho(y);
        s.rho = 0.5 * (rho + rho.adjoint());
        traj.times.push_back(t);
        traj.states.push_back(s);
        EnvelopeSample e{0, 0, 0, 0};
        if (cfg) {
            const Envelopes env = stirap_envelopes(t, cfg->stirap);
            e.omega01 = env.omega01;
            e.omega12 = env.omega12;
            if (cfg->cd_enabled) {
                e.omega02 = effective_cd_envelope(t, cfg->stirap, cfg->cd);
                if (traj.two_photon) e.omega_2ph = two_photon_envelope(t, cfg->stirap, cfg->cd);
            }
        }
        traj.envelopes.push_back(e);
    };

    Rk45<State> stepper(abs_tol, rel_tol);
    State y = pack(rho0.rho, 0.0);
    record(t0, y);
    ++next_emit;

    double t = t0;
    for (double cut : cuts) {
        if (cut <= t0 + 1e-12) continue;
        if (cut > t1 + 1e-12) break;
        stepper.integrate(y, t, cut, rhs);
        t = cut;
        if (next_emit < emit.size() && std::abs(emit[next_emit] - t) < 1e-6) {
            record(t, y);
            ++next_emit;
        }
    }
    return traj;
}

}  // namespace

Trajectory evolve(const ProtocolConfig& cfg, const QutritState& rho0, double dt_out) {
    cfg.validate();
    const auto [t0, t1] = cfg.window();
    std::vector<double> cuts = support_breakpoints(cfg.stirap, t0, t1);
    return integrate_master(&cfg, nullptr, cfg.rates, rho0, t0, t1, dt_out, cuts, cfg.abs_tol,
                            cfg.rel_tol);
}

Trajectory run_stirap(ProtocolConfig cfg, const QutritState& rho0, double dt_out) {
    cfg.cd_enabled = false;
    return evolve(cfg, rho0, dt_out);
}

Trajectory evolve_custom(const std::function<Matrix3c(double)>& h, const DecoherenceRates& rates,
                         const QutritState& rho0, double t_start, double t_end, double dt_out,
                         const std::vector<double>& breakpoints, double abs_tol, double rel_tol) {
    return integrate_master(nullptr, &h, rates, rho0, t_start, t_end, dt_out, breakpoints,
                            abs_tol, rel_tol);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t_ns,p0,p1,p2,re01,im01,re02,im02,re12,im12,omega01,omega12,omega02";
    if (traj.two_photon) os << ",omega_2ph";
    os << "\n";
    os.precision(12);
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const Matrix3c& r = traj.states[i].rho;
        const EnvelopeSample& e = traj.envelopes[i];
        os << traj.times[i] << ',' << r(0, 0).real() << ',' << r(1, 1).real() << ','
           << r(2, 2).real() << ',' << r(0, 1).real() << ',' << r(0, 1).imag() << ','
           << r(0, 2).real() << ',' << r(0, 2).imag() << ',' << r(1, 2).real() << ','
           << r(1, 2).imag() << ',' << e.omega01 << ',' << e.omega12 << ',' << e.omega02;
        if (traj.two_photon) os << ',' << e.omega_2ph;
        os << "\n";
    }
}

}  // namespace sastirap
