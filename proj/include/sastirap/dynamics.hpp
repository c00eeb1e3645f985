#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sastirap/pulses.hpp"
#include "sastirap/qutrit.hpp"

namespace sastirap {

// Full protocol description in the frame rotating with the STIRAP drives.
struct ProtocolConfig {
    StirapParams stirap;
    CounterdiabaticParams cd;
    DecoherenceRates rates;
    bool cd_enabled = true;
    double phase_offset = 0.0;  // constant mixer-imbalance shift added to the loop phase, rad
    std::optional<double> t_start;  // ns; absent -> auto window
    std::optional<double> t_end;
    bool stark_correction = true;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;

    // [min(-3 sigma, t_s - 3 sigma), max(3 sigma, t_s + 3 sigma)] plus 1 ns guards
    std::pair<double, double> window() const;
    void validate() const;
};

struct EnvelopeSample {
    double omega01;    // rad/ns
    double omega12;
    double omega02;    // effective 0-2 coupling
    double omega_2ph;  // physical two-photon tone (0 in ideal_effective mode)
};

struct Trajectory {
    std::vector<double> times;  // strictly increasing, ns
    std::vector<QutritState> states;
    std::vector<EnvelopeSample> envelopes;
    bool two_photon = false;

    Populations final_populations() const;
    double max_p1() const;
    double max_p2() const;
};

// Cumulative ac-Stark phase corrections phi~nk(t) = int_{-inf}^t eps_nk dt'.
// The 0-2 value is the raw integral; the tone correction applied in the
// Hamiltonian is phi02/2.
struct PhaseCorrections {
    double phi01 = 0.0;
    double phi12 = 0.0;
    double phi02 = 0.0;
};

// Rotating-frame Hamiltonian at time t. In two_photon mode the drive enters
// through the off-resonant 0-1 and 1-2 elements with the sqrt(2) coupling
// ratio and phases phi2ph(t) -+ delta t; in ideal_effective mode the
// effective 0-2 coupling is applied directly with phase -phi20,
// phi20 = -2 phi_2ph - pi + phase_offset.
Matrix3c hamiltonian_at(double t, const ProtocolConfig& cfg);

// Stark corrections at time t, integrated by the same embedded RK45 scheme
// used for the state evolution (single call; for many times prefer the
// series version, which integrates once).
PhaseCorrections dynamic_phase(double t, const ProtocolConfig& cfg);
std::vector<PhaseCorrections> dynamic_phase_series(const std::vector<double>& times,
                                                   const ProtocolConfig& cfg);

// Integrates drho/dt = -i[H(t), rho] + D(rho) from the window start to end,
// emitting states every dt_out ns (the window end is always emitted). Emitted
// states are re-symmetrized, so they satisfy the QutritState invariants.
// Throws IntegratorError on step underflow.
Trajectory evolve(const ProtocolConfig& cfg, const QutritState& rho0, double dt_out);

// Same with the counterdiabatic drive disabled.
Trajectory run_stirap(ProtocolConfig cfg, const QutritState& rho0, double dt_out);

// Evolution under an arbitrary Hamiltonian h(t) (used by the reverse-
// engineering checks). `breakpoints` marks discontinuities of h.
Trajectory evolve_custom(const std::function<Matrix3c(double)>& h, const DecoherenceRates& rates,
                         const QutritState& rho0, double t_start, double t_end, double dt_out,
                         const std::vector<double>& breakpoints = {}, double abs_tol = 1e-10,
                         double rel_tol = 1e-10);

// columns: t_ns, p0, p1, p2, re01, im01, re02, im02, re12, im12,
//          omega01, omega12, omega02 [, omega_2ph]
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace sastirap
