#pragma once

// Run configuration read from a plain-text `key = value` file. Keys are
// dotted (`waveguide.a`), `#` starts a comment. The waveguide and atom
// sections are mandatory; everything else has a default.

#include <optional>
#include <string>

#include "wgqed/detection.hpp"
#include "wgqed/emission.hpp"
#include "wgqed/errors.hpp"

namespace wgqed::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class OmegaTildeMode { Bare, Shifted, Target };
enum class Format { Csv, Json };

struct RunConfig {
    WaveguideSpec waveguide;
    Atom atom;

    DosModel dos = DosModel::PaperLiteral;
    RadicandModel radicand = RadicandModel::PaperLiteral;
    Normalization normalization = Normalization::EnergyExact;
    int max_mn = 3;
    double L = 1.0;

    // level shift window; zero means "derive from omega"
    double shift_nu_min = 0.0;
    double shift_nu_max = 0.0;
    double shift_half_width = 1e-2;

    // correlation grid; spans of zero are derived from Gamma_eff
    int corr_x_count = 1;
    std::optional<double> corr_y;
    double corr_z_span = 0.0;
    int corr_z_count = 200;
    double corr_t_span = 0.0;
    int corr_t_count = 200;
    OmegaTildeMode corr_omega_tilde = OmegaTildeMode::Bare;
    double corr_target_ratio = 0.8;

    // omega_d scan in units of pi/a; gamma_eff of zero means decay_rate
    double omegad_scan_lo = 1e-3;
    double omegad_scan_hi = 1e4;
    int omegad_scan_points = 2000;
    double omegad_gamma_eff = 0.0;

    Format format = Format::Csv;
    std::string out = "-";
    int precision = 12;

    EmissionOptions emission_options() const { return {{L}, dos, normalization}; }
    ShiftWindow shift_window() const;
};

/// Parses configuration text. `origin` names the source in error messages.
/// Throws ConfigError naming the line and key for syntax errors, unknown or
/// repeated keys, bad values and missing mandatory keys. Physical validity is
/// checked by validate(waveguide, atom).
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::string& path);

DosModel parse_dos(const std::string& s);
RadicandModel parse_radicand(const std::string& s);
Format parse_format(const std::string& s);
std::string to_string(OmegaTildeMode mode);

}  // namespace wgqed::cli
