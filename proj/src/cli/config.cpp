#include "wgqed/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace wgqed::cli {

ShiftWindow RunConfig::shift_window() const {
    ShiftWindow w;
    w.nu_min = shift_nu_min > 0.0 ? shift_nu_min : 0.05 * atom.omega;
    w.nu_max = shift_nu_max > 0.0 ? shift_nu_max : 3.0 * atom.omega;
    w.half_width = shift_half_width;
    return w;
}

DosModel parse_dos(const std::string& s) {
    if (s == "paper") return DosModel::PaperLiteral;
    if (s == "dispersion") return DosModel::WaveguideDispersion;
    throw ConfigError("unknown DoS model '" + s + "' (expected paper or dispersion)");
}

RadicandModel parse_radicand(const std::string& s) {
    if (s == "paper") return RadicandModel::PaperLiteral;
    if (s == "consistent") return RadicandModel::ConsistentDispersion;
    throw ConfigError("unknown radicand model '" + s + "' (expected paper or consistent)");
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

std::string to_string(OmegaTildeMode mode) {
    switch (mode) {
        case OmegaTildeMode::Bare:
            return "bare";
        case OmegaTildeMode::Shifted:
            return "shifted";
        case OmegaTildeMode::Target:
            return "target";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigError("expected a finite real number, got '" + v + "'");
    }
    return out;
}

int to_int(const std::string& v) {
    int out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError("expected an integer, got '" + v + "'");
    return out;
}

int to_count(const std::string& v) {
    const int n = to_int(v);
    if (n < 1) throw ConfigError("expected a positive count, got '" + v + "'");
    return n;
}

CVec3 to_dipole(const std::string& v) {
    std::string spaced = v;
    for (char& c : spaced) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(spaced);
    std::vector<double> parts;
    std::string token;
    while (in >> token) parts.push_back(to_double(token));
    if (parts.size() != 6) {
        throw ConfigError("dipole needs six reals (re im for x, y, z), got " +
                          std::to_string(parts.size()));
    }
    return {{parts[0], parts[1]}, {parts[2], parts[3]}, {parts[4], parts[5]}};
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"waveguide.a", [](RunConfig& c, const std::string& v) { c.waveguide.a = to_double(v); }},
        {"waveguide.b", [](RunConfig& c, const std::string& v) { c.waveguide.b = to_double(v); }},
        {"waveguide.eps",
         [](RunConfig& c, const std::string& v) { c.waveguide.eps = to_double(v); }},
        {"waveguide.mu", [](RunConfig& c, const std::string& v) { c.waveguide.mu = to_double(v); }},
        {"atom.x0", [](RunConfig& c, const std::string& v) { c.atom.r0.x = to_double(v); }},
        {"atom.y0", [](RunConfig& c, const std::string& v) { c.atom.r0.y = to_double(v); }},
        {"atom.z0", [](RunConfig& c, const std::string& v) { c.atom.r0.z = to_double(v); }},
        {"atom.omega", [](RunConfig& c, const std::string& v) { c.atom.omega = to_double(v); }},
        {"atom.dipole", [](RunConfig& c, const std::string& v) { c.atom.dipole = to_dipole(v); }},
        {"models.dos", [](RunConfig& c, const std::string& v) { c.dos = parse_dos(v); }},
        {"models.radicand",
         [](RunConfig& c, const std::string& v) { c.radicand = parse_radicand(v); }},
        {"models.normalization",
         [](RunConfig& c, const std::string& v) {
             if (v == "energy-exact") {
                 c.normalization = Normalization::EnergyExact;
             } else if (v == "printed") {
                 c.normalization = Normalization::PrintedClosedForm;
             } else {
                 throw ConfigError("unknown normalization '" + v +
                                   "' (expected energy-exact or printed)");
             }
         }},
        {"modes.max_mn", [](RunConfig& c, const std::string& v) { c.max_mn = to_count(v); }},
        {"quantize.L", [](RunConfig& c, const std::string& v) { c.L = to_double(v); }},
        {"shift.nu_min", [](RunConfig& c, const std::string& v) { c.shift_nu_min = to_double(v); }},
        {"shift.nu_max", [](RunConfig& c, const std::string& v) { c.shift_nu_max = to_double(v); }},
        {"shift.half_width",
         [](RunConfig& c, const std::string& v) { c.shift_half_width = to_double(v); }},
        {"corr.x_count", [](RunConfig& c, const std::string& v) { c.corr_x_count = to_count(v); }},
        {"corr.y", [](RunConfig& c, const std::string& v) { c.corr_y = to_double(v); }},
        {"corr.z_span", [](RunConfig& c, const std::string& v) { c.corr_z_span = to_double(v); }},
        {"corr.z_count", [](RunConfig& c, const std::string& v) { c.corr_z_count = to_count(v); }},
        {"corr.t_span", [](RunConfig& c, const std::string& v) { c.corr_t_span = to_double(v); }},
        {"corr.t_count", [](RunConfig& c, const std::string& v) { c.corr_t_count = to_count(v); }},
        {"corr.omega_tilde",
         [](RunConfig& c, const std::string& v) {
             if (v == "bare") {
                 c.corr_omega_tilde = OmegaTildeMode::Bare;
             } else if (v == "shifted") {
                 c.corr_omega_tilde = OmegaTildeMode::Shifted;
             } else if (v == "target") {
                 c.corr_omega_tilde = OmegaTildeMode::Target;
             } else {
                 throw ConfigError("unknown omega_tilde mode '" + v +
                                   "' (expected bare, shifted or target)");
             }
         }},
        {"corr.target_ratio",
         [](RunConfig& c, const std::string& v) { c.corr_target_ratio = to_double(v); }},
        {"omegad.scan_lo",
         [](RunConfig& c, const std::string& v) { c.omegad_scan_lo = to_double(v); }},
        {"omegad.scan_hi",
         [](RunConfig& c, const std::string& v) { c.omegad_scan_hi = to_double(v); }},
        {"omegad.scan_points",
         [](RunConfig& c, const std::string& v) { c.omegad_scan_points = to_count(v); }},
        {"omegad.gamma_eff",
         [](RunConfig& c, const std::string& v) { c.omegad_gamma_eff = to_double(v); }},
        {"output.format", [](RunConfig& c, const std::string& v) { c.format = parse_format(v); }},
        {"output.path", [](RunConfig& c, const std::string& v) { c.out = v; }},
        {"output.precision",
         [](RunConfig& c, const std::string& v) {
             c.precision = to_int(v);
             if (c.precision < 1 || c.precision > 17) {
                 throw ConfigError("precision must be between 1 and 17");
             }
         }},
    };
    return table;
}

const std::vector<std::string>& mandatory() {
    static const std::vector<std::string> keys = {
        "waveguide.a", "waveguide.b", "waveguide.eps", "waveguide.mu", "atom.x0",
        "atom.y0",     "atom.z0",     "atom.omega",    "atom.dipole"};
    return keys;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no) + ": ";
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(where + "key '" + key + "' repeated");
        if (value.empty()) throw ConfigError(where + "key '" + key + "' has no value");
        try {
            it->second(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + "key '" + key + "': " + e.what());
        }
    }
    for (const std::string& key : mandatory()) {
        if (!seen.count(key)) throw ConfigError(origin + ": missing mandatory key '" + key + "'");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace wgqed::cli
