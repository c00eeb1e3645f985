#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sastirap/units.hpp"

namespace sastirap {

// Gaussian STIRAP drive pair. The 0-1 pulse peaks at t = 0, the 1-2 pulse at
// t = t_s; counter-intuitive ordering means t_s < 0. Hard-zeroed outside
// +-3 sigma of each maximum.
struct StirapParams {
    double omega01_peak = 0.0;  // rad/ns
    double omega12_peak = 0.0;  // rad/ns
    double sigma = 1.0;         // ns
    double t_s = 0.0;           // ns
    double phi01 = 0.0;         // rad
    double phi12 = 0.0;         // rad

    void validate() const;  // sigma > 0, peaks >= 0

    bool in_01_support(double t) const { return std::abs(t) <= 3.0 * sigma; }
    bool in_12_support(double t) const { return std::abs(t - t_s) <= 3.0 * sigma; }
    bool in_cd_support(double t) const { return in_01_support(t) || in_12_support(t); }
};

enum class CdMode { ideal_effective, two_photon };

// Counterdiabatic drive. In ideal_effective mode the 0-2 coupling is applied
// directly with the sech envelope; in two_photon mode the off-resonant tone at
// detuning +-delta from the 0-1 / 1-2 transitions is simulated and the
// effective coupling Omega02 = sqrt(2) Omega2ph^2 / (2 delta) emerges
// dynamically. `scale` multiplies the effective Omega02 envelope in both
// modes. omega_2ph_peak = 0 requests the amplitude that realizes the ideal
// counterdiabatic peak.
struct CounterdiabaticParams {
    CdMode mode = CdMode::ideal_effective;
    double omega_2ph_peak = 0.0;  // rad/ns
    double phi_2ph = -kPi / 4.0;  // rad
    double delta = rabi_from_mhz(185.0);  // rad/ns, > 0
    double scale = 1.0;

    void validate() const;  // delta != 0 in two_photon mode
};

struct AcStarkShifts {
    double eps01;  // rad/ns
    double eps12;
    double eps02;
};

struct Envelopes {
    double omega01;  // rad/ns
    double omega12;
};

Envelopes stirap_envelopes(double t, const StirapParams& p);

// Sech-shaped counterdiabatic coupling |t_s|/sigma^2 * sech[(t_s/sigma^2)(t - t_s/2)],
// exact for equal STIRAP peaks. Zero only where both STIRAP envelopes are zero.
double counterdiabatic_envelope(double t, double sigma, double t_s);
double counterdiabatic_envelope_untruncated(double t, double sigma, double t_s);

// Effective 0-2 coupling of the two-photon drive and its inverse.
double effective_two_photon(double omega_2ph, double delta);
double invert_two_photon(double omega02, double delta);  // throws if omega02*delta < 0

// Resolved peak of the physical two-photon tone (scale included).
double two_photon_peak(const StirapParams& p, const CounterdiabaticParams& cd);
// Omega2ph(t) = peak * sech^{1/2}, truncated like the counterdiabatic envelope.
double two_photon_envelope(double t, const StirapParams& p, const CounterdiabaticParams& cd);

// Effective Omega02(t) including `scale`, identical between the two modes
// when omega_2ph_peak is left at 0.
double effective_cd_envelope(double t, const StirapParams& p, const CounterdiabaticParams& cd);
double effective_cd_peak(const StirapParams& p, const CounterdiabaticParams& cd);

AcStarkShifts ac_stark(double omega_2ph, double delta);

struct PulseAreas {
    double a;    // integral of sqrt(Omega01^2 + Omega12^2), rad
    double a02;  // integral of the effective Omega02 envelope, rad
};

// Areas of the truncated envelopes, adaptive Simpson with rel. tolerance 1e-8.
PulseAreas pulse_areas(const StirapParams& p, const CounterdiabaticParams& cd);

// Adaptive Simpson quadrature used for all pulse-area integrals.
template <class F>
double adaptive_simpson(F f, double a, double b, double rel_tol = 1e-8);

// Envelope discontinuity locations (support edges) inside [a, b], sorted,
// including a and b. Integrations and ODE solves are split on these.
std::vector<double> support_breakpoints(const StirapParams& p, double a, double b);

// --- implementation of the quadrature template ---

namespace detail {
template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double adaptive_simpson(F f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // coarse scale estimate for the absolute tolerance floor
    const double scale = std::max(std::abs(whole), 1e-30);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

}  // namespace sastirap
