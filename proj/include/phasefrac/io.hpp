#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "phasefrac/pipeline.hpp"

namespace phasefrac {

inline constexpr const char* kToolName = "phasefrac";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kScenarioSchema = 1;

/// Parses a scenario document (schema 1). Strict: unknown keys, missing required keys and
/// malformed values throw ParseError naming the field; Hermiticity and normalization are
/// validated with the numerics tolerances (NonHermitianInput / UnnormalizedState).
Scenario parse_scenario_json(std::string_view text, const std::string& default_name = "scenario");

Scenario load_scenario_file(const std::filesystem::path& path);

/// "builtin:NAME" or a path to a scenario file.
Scenario resolve_scenario(std::string_view spec);

/// Canonical schema-1 document; parse_scenario_json(scenario_to_json(s).dump()) reproduces s.
nlohmann::json scenario_to_json(const Scenario& scenario);

/// FNV-1a 64 of the canonical document, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

/// Column-major numeric table; NaN marks an undefined cell.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// %.17g, LF line endings, empty cells for NaN.
std::string to_csv(const Table& table);

/// {"meta": ..., "columns": [...], "rows": [[...]]}; NaN becomes null.
nlohmann::json table_to_json(const Table& table, const nlohmann::json& meta);

/// Inverse of table_to_json (null reads back as NaN).
Table table_from_json(const nlohmann::json& doc);

/// Tool name/version, scenario name and hash, step count and hbar.
nlohmann::json output_metadata(const Scenario& scenario, const Analysis& analysis,
                               std::string_view command);

/// t, re_i/im_i per amplitude, abs_c, arg_c, phi_total, node
Table evolve_table(const Analysis& analysis);

/// t, S0, Phi, PhiD, PhiG, PhiBar, f_g, eq9_res_d, eq9_res_g. Per-step residuals sit on the
/// row that ends the step; the first row has none.
Table phases_table(const Analysis& analysis);

/// t, dS, dS0, circuit, gamma, K, S_cum with per-step values on the row that ends the step.
/// circuit is the cumulative circuitousness.
Table geometry_table(const Analysis& analysis);

/// Every SpeedLimitReport field; infinities are written as null.
nlohmann::json speed_limit_json(const SpeedLimitReport& report);

nlohmann::json verify_json(const VerifyReport& report);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string format_double(double value);

}  // namespace phasefrac
