#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sastirap/dynamics.hpp"
#include "sastirap/waveform.hpp"

namespace sastirap {

// Sectioned key = value text format. '#' and ';' start comments; keys are
// case-sensitive; unknown keys are rejected by the domain mappers so typos
// do not pass silently.
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_str(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    // "a,b,c" or "start:stop:count"
    std::vector<double> get_values(const std::string& section, const std::string& key) const;

    std::vector<std::string> keys(const std::string& section) const;
    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Frequencies are entered as MHz (meaning omega/2pi), decay rates as MHz
// (meaning Gamma = x e-3 / ns), times as ns, phases in units of pi.
ProtocolConfig protocol_from_config(const ConfigFile& cfg);
WaveformConfig waveform_from_config(const ConfigFile& cfg);

// Canonical "# key = value" echo of a resolved protocol (sweep CSV preamble).
std::string echo_protocol(const ProtocolConfig& cfg);

}  // namespace sastirap
