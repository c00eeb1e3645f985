#include "sastirap/pulses.hpp"

#include <set>
#include <stdexcept>

namespace sastirap {

void StirapParams::validate() const {
    if (sigma <= 0.0) throw std::invalid_argument("StirapParams: sigma must be > 0");
    if (omega01_peak < 0.0 || omega12_peak < 0.0)
        throw std::invalid_argument("StirapParams: peak amplitudes must be >= 0");
}

void CounterdiabaticParams::validate() const {
    if (mode == CdMode::two_photon && delta == 0.0)
        throw std::invalid_argument("CounterdiabaticParams: delta must be nonzero in two_photon mode");
    if (scale < 0.0) throw std::invalid_argument("CounterdiabaticParams: scale must be >= 0");
    if (omega_2ph_peak < 0.0)
        throw std::invalid_argument("CounterdiabaticParams: omega_2ph_peak must be >= 0");
}

Envelopes stirap_envelopes(double t, const StirapParams& p) {
    Envelopes e{0.0, 0.0};
    const double s2 = 2.0 * p.sigma * p.sigma;
    if (p.in_01_support(t)) e.omega01 = p.omega01_peak * std::exp(-t * t / s2);
    if (p.in_12_support(t)) {
        const double u = t - p.t_s;
        e.omega12 = p.omega12_peak * std::exp(-u * u / s2);
    }
    return e;
}

double counterdiabatic_envelope_untruncated(double t, double sigma, double t_s) {
    const double a = t_s / (sigma * sigma);
    return std::abs(t_s) / (sigma * sigma) / std::cosh(a * (t - 0.5 * t_s));
}

double counterdiabatic_envelope(double t, double sigma, double t_s) {
    const bool in01 = std::abs(t) <= 3.0 * sigma;
    const bool in12 = std::abs(t - t_s) <= 3.0 * sigma;
    if (!in01 && !in12) return 0.0;
    return counterdiabatic_envelope_untruncated(t, sigma, t_s);
}

double effective_two_photon(double omega_2ph, double delta) {
    if (delta == 0.0) throw std::invalid_argument("effective_two_photon: delta must be nonzero");
    return std::numbers::sqrt2 * omega_2ph * omega_2ph / (2.0 * delta);
}

double invert_two_photon(double omega02, double delta) {
    if (delta == 0.0) throw std::invalid_argument("invert_two_photon: delta must be nonzero");
    const double arg = std::numbers::sqrt2 * delta * omega02;
    if (arg < 0.0)
        throw std::domain_error("invert_two_photon: omega02 and delta have opposite signs");
    return std::sqrt(arg);
}

double two_photon_peak(const StirapParams& p, const CounterdiabaticParams& cd) {
    const double base = cd.omega_2ph_peak > 0.0
                            ? cd.omega_2ph_peak
                            : invert_two_photon(std::abs(p.t_s) / (p.sigma * p.sigma), cd.delta);
    return std::sqrt(cd.scale) * base;
}

double two_photon_envelope(double t, const StirapParams& p, const CounterdiabaticParams& cd) {
    if (!p.in_cd_support(t)) return 0.0;
    const double a = p.t_s / (p.sigma * p.sigma);
    return two_photon_peak(p, cd) / std::sqrt(std::cosh(a * (t - 0.5 * p.t_s)));
}

double effective_cd_envelope(double t, const StirapParams& p, const CounterdiabaticParams& cd) {
    if (cd.mode == CdMode::two_photon) {
        const double w = two_photon_envelope(t, p, cd);
        return effective_two_photon(w, cd.delta);
    }
    return cd.scale * counterdiabatic_envelope(t, p.sigma, p.t_s);
}

double effective_cd_peak(const StirapParams& p, const CounterdiabaticParams& cd) {
    if (cd.mode == CdMode::two_photon)
        return effective_two_photon(two_photon_peak(p, cd), cd.delta);
    return cd.scale * std::abs(p.t_s) / (p.sigma * p.sigma);
}

AcStarkShifts ac_stark(double omega_2ph, double delta) {
    if (delta == 0.0) throw std::invalid_argument("ac_stark: delta must be nonzero");
    const double w2 = omega_2ph * omega_2ph / delta;
    return {w2, -1.25 * w2, -0.25 * w2};
}

std::vector<double> support_breakpoints(const StirapParams& p, double a, double b) {
    std::set<double> pts{a, b};
    for (double e : {-3.0 * p.sigma, 3.0 * p.sigma, p.t_s - 3.0 * p.sigma, p.t_s + 3.0 * p.sigma})
        if (e > a && e < b) pts.insert(e);
    return {pts.begin(), pts.end()};
}

PulseAreas pulse_areas(const StirapParams& p, const CounterdiabaticParams& cd) {
    p.validate();
    cd.validate();
    const double a = std::min(-3.0 * p.sigma, p.t_s - 3.0 * p.sigma);
    const double b = std::max(3.0 * p.sigma, p.t_s + 3.0 * p.sigma);
    const auto pieces = support_breakpoints(p, a, b);
    PulseAreas out{0.0, 0.0};
    for (size_t i = 0; i + 1 < pieces.size(); ++i) {
        out.a += adaptive_simpson(
            [&](double t) {
                const auto e = stirap_envelopes(t, p);
                return std::hypot(e.omega01, e.omega12);
            },
            pieces[i], pieces[i + 1]);
        out.a02 += adaptive_simpson(
            [&](double t) { return effective_cd_envelope(t, p, cd); }, pieces[i], pieces[i + 1]);
    }
    return out;
}

}  // namespace sastirap
