#include "sastirap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sastirap {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void check_known_keys(const ConfigFile& cfg, const std::string& section,
                      const std::set<std::string>& known) {
    for (const auto& k : cfg.keys(section))
        if (!known.count(k))
            throw std::invalid_argument("config: unknown key [" + section + "] " + k);
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: bad section header at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
        cfg.sections_[section][key] = val;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse(os.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get_str(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_str(section, key, "");
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config: [" + section + "] " + key + " is not a number: " + v);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get_str(section, key, "");
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: [" + section + "] " + key + " is not a boolean: " + v);
}

std::vector<double> ConfigFile::get_values(const std::string& section,
                                           const std::string& key) const {
    const std::string v = get_str(section, key, "");
    if (v.empty()) return {};
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        double a = 0, b = 0;
        long n = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(v);
        if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
            throw std::invalid_argument("config: bad range '" + v + "' (want start:stop:count)");
        for (long k = 0; k < n; ++k)
            out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(k) / (n - 1));
        return out;
    }
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("config: empty value list for " + key);
    return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
    std::vector<std::string> out;
    const auto s = sections_.find(section);
    if (s == sections_.end()) return out;
    for (const auto& [k, _] : s->second) out.push_back(k);
    return out;
}

ProtocolConfig protocol_from_config(const ConfigFile& cfg) {
    check_known_keys(cfg, "stirap",
                     {"omega01_mhz", "omega12_mhz", "sigma_ns", "t_s_ns", "ts_over_sigma",
                      "phi01_pi", "phi12_pi"});
    check_known_keys(cfg, "cd", {"mode", "omega_2ph_mhz", "phi_2ph_pi", "delta_mhz", "scale"});
    check_known_keys(cfg, "rates",
                     {"gamma01_mhz", "gamma12_mhz", "gamma_phi01_mhz", "gamma_phi12_mhz"});
    check_known_keys(cfg, "protocol",
                     {"t_start_ns", "t_end_ns", "phase_offset_pi", "stark_correction", "abs_tol",
                      "rel_tol", "dt_out_ns"});

    ProtocolConfig p;
    p.stirap.omega01_peak = rabi_from_mhz(cfg.get_double("stirap", "omega01_mhz", 25.5));
    p.stirap.omega12_peak = rabi_from_mhz(cfg.get_double("stirap", "omega12_mhz", 25.5));
    p.stirap.sigma = cfg.get_double("stirap", "sigma_ns", 20.0);
    if (cfg.has("stirap", "ts_over_sigma"))
        p.stirap.t_s = cfg.get_double("stirap", "ts_over_sigma", -1.5) * p.stirap.sigma;
    else
        p.stirap.t_s = cfg.get_double("stirap", "t_s_ns", -30.0);
    p.stirap.phi01 = rad_from_pi_units(cfg.get_double("stirap", "phi01_pi", 0.0));
    p.stirap.phi12 = rad_from_pi_units(cfg.get_double("stirap", "phi12_pi", 0.0));

    const std::string mode = cfg.get_str("cd", "mode", "ideal");
    if (mode == "ideal") {
        p.cd.mode = CdMode::ideal_effective;
    } else if (mode == "two-photon" || mode == "two_photon") {
        p.cd.mode = CdMode::two_photon;
    } else if (mode == "off") {
        p.cd_enabled = false;
    } else {
        throw std::invalid_argument("config: [cd] mode must be ideal, two-photon, or off");
    }
    p.cd.omega_2ph_peak = rabi_from_mhz(cfg.get_double("cd", "omega_2ph_mhz", 0.0));
    p.cd.phi_2ph = rad_from_pi_units(cfg.get_double("cd", "phi_2ph_pi", -0.25));
    p.cd.delta = rabi_from_mhz(cfg.get_double("cd", "delta_mhz", 185.0));
    p.cd.scale = cfg.get_double("cd", "scale", 1.0);

    p.rates.gamma01 = rate_from_mhz(cfg.get_double("rates", "gamma01_mhz", 0.0));
    p.rates.gamma12 = rate_from_mhz(cfg.get_double("rates", "gamma12_mhz", 0.0));
    p.rates.gamma_phi01 = rate_from_mhz(cfg.get_double("rates", "gamma_phi01_mhz", 0.0));
    p.rates.gamma_phi12 = rate_from_mhz(cfg.get_double("rates", "gamma_phi12_mhz", 0.0));

    if (cfg.has("protocol", "t_start_ns")) {
        const std::string v = cfg.get_str("protocol", "t_start_ns", "auto");
        if (v != "auto") p.t_start = cfg.get_double("protocol", "t_start_ns", 0.0);
    }
    if (cfg.has("protocol", "t_end_ns")) {
        const std::string v = cfg.get_str("protocol", "t_end_ns", "auto");
        if (v != "auto") p.t_end = cfg.get_double("protocol", "t_end_ns", 0.0);
    }
    p.phase_offset = rad_from_pi_units(cfg.get_double("protocol", "phase_offset_pi", 0.0));
    p.stark_correction = cfg.get_bool("protocol", "stark_correction", true);
    p.abs_tol = cfg.get_double("protocol", "abs_tol", 1e-10);
    p.rel_tol = cfg.get_double("protocol", "rel_tol", 1e-10);
    p.validate();
    return p;
}

WaveformConfig waveform_from_config(const ConfigFile& cfg) {
    check_known_keys(cfg, "waveform",
                     {"lo_ghz", "omega01_ghz", "omega12_ghz", "omega_2ph_ghz",
                      "sample_rate_per_ns", "a01_volts", "a12_volts", "a2ph_volts",
                      "cal01_mhz_per_volt", "cal12_mhz_per_volt", "cal2ph_mhz_per_volt"});
    WaveformConfig w;
    w.lo_freq = kTwoPi * cfg.get_double("waveform", "lo_ghz", 6.92);
    w.omega01_freq = kTwoPi * cfg.get_double("waveform", "omega01_ghz", 6.99);
    w.omega12_freq = kTwoPi * cfg.get_double("waveform", "omega12_ghz", 6.62);
    if (cfg.has("waveform", "omega_2ph_ghz"))
        w.omega_2ph_override = kTwoPi * cfg.get_double("waveform", "omega_2ph_ghz", 0.0);
    w.sample_rate = cfg.get_double("waveform", "sample_rate_per_ns", 2.4);
    w.a01 = cfg.get_double("waveform", "a01_volts", 1.0);
    w.a12 = cfg.get_double("waveform", "a12_volts", 1.0);
    w.a2ph = cfg.get_double("waveform", "a2ph_volts", 1.0);
    w.cal01 = rabi_from_mhz(cfg.get_double("waveform", "cal01_mhz_per_volt", 0.0));
    w.cal12 = rabi_from_mhz(cfg.get_double("waveform", "cal12_mhz_per_volt", 0.0));
    w.cal2ph = rabi_from_mhz(cfg.get_double("waveform", "cal2ph_mhz_per_volt", 0.0));
    return w;
}

std::string echo_protocol(const ProtocolConfig& p) {
    std::ostringstream os;
    os.precision(12);
    const auto [t0, t1] = p.window();
    os << "# omega01_mhz = " << mhz_from_rabi(p.stirap.omega01_peak) << "\n"
       << "# omega12_mhz = " << mhz_from_rabi(p.stirap.omega12_peak) << "\n"
       << "# sigma_ns = " << p.stirap.sigma << "\n"
       << "# t_s_ns = " << p.stirap.t_s << "\n"
       << "# phi01_pi = " << pi_units_from_rad(p.stirap.phi01) << "\n"
       << "# phi12_pi = " << pi_units_from_rad(p.stirap.phi12) << "\n"
       << "# cd_mode = "
       << (!p.cd_enabled ? "off"
                         : (p.cd.mode == CdMode::two_photon ? "two-photon" : "ideal"))
       << "\n"
       << "# omega_2ph_mhz = " << mhz_from_rabi(p.cd.omega_2ph_peak) << "\n"
       << "# phi_2ph_pi = " << pi_units_from_rad(p.cd.phi_2ph) << "\n"
       << "# delta_mhz = " << mhz_from_rabi(p.cd.delta) << "\n"
       << "# cd_scale = " << p.cd.scale << "\n"
       << "# gamma01_mhz = " << mhz_from_rate(p.rates.gamma01) << "\n"
       << "# gamma12_mhz = " << mhz_from_rate(p.rates.gamma12) << "\n"
       << "# gamma_phi01_mhz = " << mhz_from_rate(p.rates.gamma_phi01) << "\n"
       << "# gamma_phi12_mhz = " << mhz_from_rate(p.rates.gamma_phi12) << "\n"
       << "# phase_offset_pi = " << pi_units_from_rad(p.phase_offset) << "\n"
       << "# stark_correction = " << (p.stark_correction ? "true" : "false") << "\n"
       << "# t_start_ns = " << t0 << "\n"
       << "# t_end_ns = " << t1 << "\n";
    return os.str();
}

}  // namespace sastirap
