#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "sastirap/dynamics.hpp"
#include "sastirap/units.hpp"

namespace sastirap {

// Intermediate-frequency synthesis setup. All three tones share one LO; the
// programmed IF carriers are |LO - omega_jk| (the LO sits below the 0-1
// transition, so the wanted tones come out on the LO + IF sideband there).
struct WaveformConfig {
    double lo_freq = kTwoPi * 6.92;       // rad/ns
    double omega01_freq = kTwoPi * 6.99;  // rad/ns
    double omega12_freq = kTwoPi * 6.62;  // rad/ns
    double omega_2ph_override = 0.0;      // rad/ns; 0 -> (omega01 + omega12)/2
    double sample_rate = 2.4;             // samples/ns
    double a01 = 1.0, a12 = 1.0, a2ph = 1.0;  // IF amplitudes, volts
    double cal01 = 0.0, cal12 = 0.0, cal2ph = 0.0;  // rad/ns per volt

    double omega_2ph_freq() const;
    double if01() const { return std::abs(lo_freq - omega01_freq); }
    double if12() const { return std::abs(lo_freq - omega12_freq); }
    double if02() const { return std::abs(lo_freq - omega_2ph_freq()); }

    void validate() const;  // IFs positive and below Nyquist (pi * sample_rate)
};

// One sampled channel pair. q_samples carry the same envelope with the
// carrier phase advanced by pi/2.
struct SampledWaveform {
    std::vector<double> samples;  // volts (same content as i_samples)
    std::vector<double> i_samples;
    std::vector<double> q_samples;
    double t0 = 0.0;          // ns, time of the first sample
    double sample_rate = 1.0; // samples/ns
};

struct WaveformSet {
    SampledWaveform w01, w12, w2ph;
};

// Sampled IF waveforms for the full protocol window:
//   A01  exp(-t^2/2sigma^2)            sin(IF01 t + phi01 + corr01(t))
//   A12  exp(-(t-ts)^2/2sigma^2)       sin(IF12 t + phi12 + corr12(t))
//   A2ph cosh(ts(t-ts/2)/sigma^2)^-1/2 sin(IF02 t + phi2ph + corr02(t)/2)
// with the truncation rules of the Rabi envelopes and the ac-Stark phase
// corrections when proto.stark_correction is set.
WaveformSet synth_waveforms(const WaveformConfig& cfg, const ProtocolConfig& proto);

// Fills the voltage amplitudes from the protocol Rabi peaks through the
// volts->rad/ns calibration coefficients.
WaveformConfig with_amplitudes_from(WaveformConfig cfg, const ProtocolConfig& proto);

// Phase difference between twice the two-photon tone and the summed STIRAP
// tones, [2 omega02 (t - t_ref) + 2 phi2ph] - [(omega01 + omega12)(t - t_ref)
// + phi01 + phi12]. Constant in t exactly when 2 omega02 = omega01 + omega12.
double phase_lock_offset(const WaveformConfig& cfg, double phi01, double phi12, double phi_2ph,
                         double t_ref, double t);
// Same, but throws std::domain_error when the offset drifts by more than
// 1e-12 rad between t_ref and t.
double phase_lock_check(const WaveformConfig& cfg, double phi01, double phi12, double phi_2ph,
                        double t_ref, double t);

// AWG export: plain-text header followed by little-endian int16 I/Q pairs.
void write_awg_file(const std::string& path, const SampledWaveform& wf, double full_scale_volts);
SampledWaveform read_awg_file(const std::string& path, double* full_scale_out = nullptr);

// csv debug format: t_ns, i_volts, q_volts
void write_waveform_csv(std::ostream& os, const SampledWaveform& wf);

// Ideal IQ mixer model: i(t) cos(lo t) - q(t) sin(lo t), sampled.
std::vector<double> mix_with_lo(const SampledWaveform& wf, double lo_freq);

// Spectral amplitude |sum s_k exp(-i w t_k)| dt of a sampled signal.
double tone_amplitude(const std::vector<double>& s, double t0, double dt, double omega);

}  // namespace sastirap
