#include "sastirap/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sastirap {

double WaveformConfig::omega_2ph_freq() const {
    return omega_2ph_override != 0.0 ? omega_2ph_override : 0.5 * (omega01_freq + omega12_freq);
}

void WaveformConfig::validate() const {
    if (sample_rate <= 0.0) throw std::invalid_argument("WaveformConfig: sample_rate must be > 0");
    const double nyquist = kPi * sample_rate;
    for (double f : {if01(), if12(), if02()}) {
        if (f <= 0.0) throw std::invalid_argument("WaveformConfig: IF frequency is zero");
        if (f >= nyquist)
            throw std::invalid_argument("WaveformConfig: IF frequency exceeds Nyquist");
    }
    if (a01 < 0 || a12 < 0 || a2ph < 0)
        throw std::invalid_argument("WaveformConfig: amplitudes must be >= 0");
}

WaveformConfig with_amplitudes_from(WaveformConfig cfg, const ProtocolConfig& proto) {
    if (cfg.cal01 <= 0 || cfg.cal12 <= 0 || cfg.cal2ph <= 0)
        throw std::invalid_argument("with_amplitudes_from: calibration coefficients must be > 0");
    cfg.a01 = proto.stirap.omega01_peak / cfg.cal01;
    cfg.a12 = proto.stirap.omega12_peak / cfg.cal12;
    cfg.a2ph = two_photon_peak(proto.stirap, proto.cd) / cfg.cal2ph;
    return cfg;
}

WaveformSet synth_waveforms(const WaveformConfig& cfg, const ProtocolConfig& proto) {
    cfg.validate();
    proto.validate();
    const auto [t0, t1] = proto.window();
    const double dt = 1.0 / cfg.sample_rate;
    const size_t n = static_cast<size_t>(std::floor((t1 - t0) * cfg.sample_rate)) + 1;

    std::vector<double> times(n);
    for (size_t k = 0; k < n; ++k) times[k] = t0 + dt * static_cast<double>(k);

    // cumulative ac-Stark corrections on the sample grid (zero when disabled
    // or when the protocol carries no two-photon drive)
    std::vector<PhaseCorrections> corr(n);
    ProtocolConfig pc = proto;
    pc.cd.mode = CdMode::two_photon;  // waveforms always realize the physical tone
    if (proto.stark_correction) corr = dynamic_phase_series(times, pc);

    WaveformSet set;
    for (SampledWaveform* w : {&set.w01, &set.w12, &set.w2ph}) {
        w->t0 = t0;
        w->sample_rate = cfg.sample_rate;
        w->samples.resize(n);
        w->i_samples.resize(n);
        w->q_samples.resize(n);
    }

    const StirapParams& sp = proto.stirap;
    const double s2 = 2.0 * sp.sigma * sp.sigma;
    const double a = sp.t_s / (sp.sigma * sp.sigma);
    for (size_t k = 0; k < n; ++k) {
        const double t = times[k];
        const double env01 = sp.in_01_support(t) ? cfg.a01 * std::exp(-t * t / s2) : 0.0;
        const double env12 =
            sp.in_12_support(t)
                ? cfg.a12 * std::exp(-(t - sp.t_s) * (t - sp.t_s) / s2)
                : 0.0;
        const double env2ph =
            sp.in_cd_support(t) ? cfg.a2ph / std::sqrt(std::cosh(a * (t - 0.5 * sp.t_s))) : 0.0;

        const double ph01 = cfg.if01() * t + sp.phi01 + corr[k].phi01;
        const double ph12 = cfg.if12() * t + sp.phi12 + corr[k].phi12;
        const double ph2 = cfg.if02() * t + proto.cd.phi_2ph + 0.5 * corr[k].phi02;

        set.w01.i_samples[k] = env01 * std::sin(ph01);
        set.w01.q_samples[k] = env01 * std::sin(ph01 + kPi / 2.0);
        set.w12.i_samples[k] = env12 * std::sin(ph12);
        set.w12.q_samples[k] = env12 * std::sin(ph12 + kPi / 2.0);
        set.w2ph.i_samples[k] = env2ph * std::sin(ph2);
        set.w2ph.q_samples[k] = env2ph * std::sin(ph2 + kPi / 2.0);
    }
    set.w01.samples = set.w01.i_samples;
    set.w12.samples = set.w12.i_samples;
    set.w2ph.samples = set.w2ph.i_samples;
    return set;
}

double phase_lock_offset(const WaveformConfig& cfg, double phi01, double phi12, double phi_2ph,
                         double t_ref, double t) {
    // the difference frequency is formed first so the on-resonance value is
    // time-independent to machine precision
    const double diff = 2.0 * cfg.omega_2ph_freq() - cfg.omega01_freq - cfg.omega12_freq;
    return diff * (t - t_ref) + 2.0 * phi_2ph - phi01 - phi12;
}

double phase_lock_check(const WaveformConfig& cfg, double phi01, double phi12, double phi_2ph,
                        double t_ref, double t) {
    const double v0 = phase_lock_offset(cfg, phi01, phi12, phi_2ph, t_ref, t_ref);
    const double v1 = phase_lock_offset(cfg, phi01, phi12, phi_2ph, t_ref, t);
    const double drift = v1 - v0;
    if (std::abs(drift) > 1e-12) {
        std::ostringstream os;
        os << "phase_lock_check: two-photon resonance violated, drift " << drift << " rad over "
           << (t - t_ref) << " ns";
        throw std::domain_error(os.str());
    }
    return v1;
}

namespace {

int16_t quantize(double v, double full_scale) {
    const double x = std::round(v / full_scale * 32767.0);
    return static_cast<int16_t>(std::clamp(x, -32768.0, 32767.0));
}

}  // namespace

void write_awg_file(const std::string& path, const SampledWaveform& wf, double full_scale) {
    if (full_scale <= 0.0) throw std::invalid_argument("write_awg_file: full_scale must be > 0");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f.precision(17);
    f << "sastirap-awg 1\n"
      << "sample_rate " << wf.sample_rate << " samples_per_ns\n"
      << "t0 " << wf.t0 << " ns\n"
      << "full_scale " << full_scale << " volts\n"
      << "n " << wf.i_samples.size() << "\n";
    for (size_t k = 0; k < wf.i_samples.size(); ++k) {
        const int16_t iv = quantize(wf.i_samples[k], full_scale);
        const int16_t qv = quantize(wf.q_samples[k], full_scale);
        const unsigned char bytes[4] = {
            static_cast<unsigned char>(iv & 0xff), static_cast<unsigned char>((iv >> 8) & 0xff),
            static_cast<unsigned char>(qv & 0xff), static_cast<unsigned char>((qv >> 8) & 0xff)};
        f.write(reinterpret_cast<const char*>(bytes), 4);
    }
}

SampledWaveform read_awg_file(const std::string& path, double* full_scale_out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string magic;
    int version = 0;
    f >> magic >> version;
    if (magic != "sastirap-awg" || version != 1)
        throw std::runtime_error("read_awg_file: bad header in " + path);
    SampledWaveform wf;
    double full_scale = 1.0;
    size_t n = 0;
    std::string key, unit;
    for (int i = 0; i < 4; ++i) {
        f >> key;
        if (key == "sample_rate") f >> wf.sample_rate >> unit;
        else if (key == "t0") f >> wf.t0 >> unit;
        else if (key == "full_scale") f >> full_scale >> unit;
        else if (key == "n") f >> n;
        else throw std::runtime_error("read_awg_file: unexpected key " + key);
    }
    f.get();  // newline before the binary block
    wf.i_samples.resize(n);
    wf.q_samples.resize(n);
    for (size_t k = 0; k < n; ++k) {
        unsigned char bytes[4];
        f.read(reinterpret_cast<char*>(bytes), 4);
        if (!f) throw std::runtime_error("read_awg_file: truncated sample data");
        const int16_t iv = static_cast<int16_t>(bytes[0] | (bytes[1] << 8));
        const int16_t qv = static_cast<int16_t>(bytes[2] | (bytes[3] << 8));
        wf.i_samples[k] = static_cast<double>(iv) / 32767.0 * full_scale;
        wf.q_samples[k] = static_cast<double>(qv) / 32767.0 * full_scale;
    }
    wf.samples = wf.i_samples;
    if (full_scale_out) *full_scale_out = full_scale;
    return wf;
}

void write_waveform_csv(std::ostream& os, const SampledWaveform& wf) {
    os << "t_ns,i_volts,q_volts\n";
    os.precision(17);
    const double dt = 1.0 / wf.sample_rate;
    for (size_t k = 0; k < wf.i_samples.size(); ++k)
        os << wf.t0 + dt * static_cast<double>(k) << ',' << wf.i_samples[k] << ','
           << wf.q_samples[k] << '\n';
}

std::vector<double> mix_with_lo(const SampledWaveform& wf, double lo_freq) {
    std::vector<double> out(wf.i_samples.size());
    const double dt = 1.0 / wf.sample_rate;
    for (size_t k = 0; k < out.size(); ++k) {
        const double t = wf.t0 + dt * static_cast<double>(k);
        out[k] = wf.i_samples[k] * std::cos(lo_freq * t) - wf.q_samples[k] * std::sin(lo_freq * t);
    }
    return out;
}

double tone_amplitude(const std::vector<double>& s, double t0, double dt, double omega) {
    std::complex<double> acc(0.0, 0.0);
    const std::complex<double> i(0.0, 1.0);
    for (size_t k = 0; k < s.size(); ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        acc += s[k] * std::exp(-i * omega * t);
    }
    return std::abs(acc) * dt;
}

}  // namespace sastirap
