#include "wgqed/cli/report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

namespace wgqed::cli {

std::string format_number(double value, int precision) {
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    return buf;
}

double round_significant(double value, int precision) {
    return std::strtod(format_number(value, precision).c_str(), nullptr);
}

Json round_numbers(const Json& doc, int precision) {
    if (doc.is_number_float()) return round_significant(doc.get<double>(), precision);
    if (doc.is_array()) {
        Json out = Json::array();
        for (const auto& v : doc) out.push_back(round_numbers(v, precision));
        return out;
    }
    if (doc.is_object()) {
        Json out = Json::object();
        for (const auto& [k, v] : doc.items()) out[k] = round_numbers(v, precision);
        return out;
    }
    return doc;
}

Json config_echo(const RunConfig& cfg) {
    const auto& d = cfg.atom.dipole;
    const ShiftWindow w = cfg.shift_window();
    Json j;
    j["waveguide"] = {{"a", cfg.waveguide.a},
                      {"b", cfg.waveguide.b},
                      {"eps", cfg.waveguide.eps},
                      {"mu", cfg.waveguide.mu}};
    j["atom"] = {{"x0", cfg.atom.r0.x},
                 {"y0", cfg.atom.r0.y},
                 {"z0", cfg.atom.r0.z},
                 {"omega", cfg.atom.omega},
                 {"dipole", {d.x.real(), d.x.imag(), d.y.real(), d.y.imag(), d.z.real(), d.z.imag()}}};
    j["modes"] = {{"max_mn", cfg.max_mn}};
    j["quantize"] = {{"L", cfg.L}};
    j["shift"] = {{"nu_min", w.nu_min}, {"nu_max", w.nu_max}, {"half_width", w.half_width}};
    j["corr"] = {{"x_count", cfg.corr_x_count},
                 {"y", cfg.corr_y ? Json(*cfg.corr_y) : Json(0.5 * cfg.waveguide.b)},
                 {"z_span", cfg.corr_z_span},
                 {"z_count", cfg.corr_z_count},
                 {"t_span", cfg.corr_t_span},
                 {"t_count", cfg.corr_t_count},
                 {"omega_tilde", to_string(cfg.corr_omega_tilde)},
                 {"target_ratio", cfg.corr_target_ratio}};
    j["omegad"] = {{"scan_lo", cfg.omegad_scan_lo},
                   {"scan_hi", cfg.omegad_scan_hi},
                   {"scan_points", cfg.omegad_scan_points},
                   {"gamma_eff", cfg.omegad_gamma_eff}};
    j["output"] = {{"format", cfg.format == Format::Csv ? "csv" : "json"},
                   {"precision", cfg.precision}};
    return j;
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Json make_envelope(const Artifact& artifact, const RunConfig& cfg, bool reproducible) {
    Json e;
    e["tool"] = kToolName;
    e["version"] = kToolVersion;
    e["command"] = artifact.command;
    e["models"] = {{"dos", to_string(cfg.dos)},
                   {"radicand", to_string(cfg.radicand)},
                   {"normalization", to_string(cfg.normalization)},
                   {"direction_multiplicity", 2}};
    e["config"] = config_echo(cfg);
    e["oracle"] = artifact.oracle;
    if (!reproducible) e["timestamp"] = utc_timestamp();
    return e;
}

std::string render_csv(const Artifact& artifact, const Json& envelope, int precision) {
    std::string out = "# envelope: " + round_numbers(envelope, precision).dump() + "\n";
    for (std::size_t i = 0; i < artifact.columns.size(); ++i) {
        if (i) out += ',';
        out += artifact.columns[i];
    }
    out += '\n';
    for (const auto& row : artifact.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out += format_number(v, precision);
                    } else if constexpr (std::is_same_v<T, long long>) {
                        out += std::to_string(v);
                    } else {
                        out += v;
                    }
                },
                row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Artifact& artifact, const Json& envelope, int precision) {
    Json doc;
    doc["envelope"] = envelope;
    doc["data"] = artifact.data;
    return round_numbers(doc, precision).dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw Error("failed to write '" + path + "'");
}

}  // namespace wgqed::cli
