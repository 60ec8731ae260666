#pragma once

// Artifact rendering. Every artifact carries an envelope with the tool
// version, the resolved configuration, model tags, oracle discrepancies and
// (unless reproducible output is requested) a UTC timestamp. Column names and
// field names are listed in docs/schema.md.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wgqed/cli/config.hpp"

namespace wgqed::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "wgqed";
inline constexpr const char* kToolVersion = "1.0.0";

using Cell = std::variant<double, long long, std::string>;

struct Artifact {
    std::string command;
    Json data = Json::object();          // JSON payload
    std::vector<std::string> columns;    // CSV layout
    std::vector<std::vector<Cell>> rows;
    Json oracle = Json::object();        // discrepancy fields for the envelope
    std::optional<Json> sidecar;         // written next to the CSV as <out>.fits.json
};

/// %.{precision}g
std::string format_number(double value, int precision);

/// value rounded to `precision` significant digits.
double round_significant(double value, int precision);

/// Rounds every floating-point number inside a JSON document.
Json round_numbers(const Json& doc, int precision);

Json config_echo(const RunConfig& cfg);

Json make_envelope(const Artifact& artifact, const RunConfig& cfg, bool reproducible);

/// First line `# envelope: {...}`, then the header and rows.
std::string render_csv(const Artifact& artifact, const Json& envelope, int precision);

/// {"envelope": ..., "data": ...}
std::string render_json(const Artifact& artifact, const Json& envelope, int precision);

/// Writes to `path`, or stdout for "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace wgqed::cli
