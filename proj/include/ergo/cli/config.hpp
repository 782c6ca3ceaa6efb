#pragma once

// Run configuration: one JSON document per run, overridable from the command line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/json_io.hpp"
#include "ergo/schedule.hpp"

namespace ergo::cli {

enum class Scenario { ergotropy, drive_synth, fig1, fig2, fig3, counterexample };

/// Accepts the subcommand names; "appendix-fig" is an alias of fig3.
Scenario parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario s);

/// Uniform grid of `points` values from lo to hi inclusive (lo only if points == 1).
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int points = 1;

  std::vector<double> values() const;
};

struct RunConfig {
  Scenario scenario = Scenario::ergotropy;
  json doc = json::object();  // scenario fields
  std::uint64_t seed = 0;
  std::optional<int> steps;
  int threads = 1;
  std::string out;  // empty: stdout
  Tolerances tolerances{};
};

/// Reads and parses the file; InvalidInput on unreadable or malformed JSON.
json read_json_file(const std::string& path);

/// Builds a config from a parsed document. Top-level keys "seed", "steps",
/// "threads" and "tolerances" are lifted out; the rest stays in doc.
RunConfig make_config(Scenario scenario, const json& doc);

// Typed accessors with defaults. InvalidInput on a wrong type or value.
double get_real(const json& doc, const char* key, double fallback);
int get_int(const json& doc, const char* key, int fallback);
std::int64_t get_int64(const json& doc, const char* key, std::int64_t fallback);
bool get_bool(const json& doc, const char* key, bool fallback);
std::string get_string(const json& doc, const char* key, const std::string& fallback);
/// {"lo": .., "hi": .., "points": ..}; points >= 1 and lo <= hi.
Axis get_axis(const json& doc, const char* key, Axis fallback);
/// Complex number as [re, im] or a plain real.
cplx get_complex(const json& doc, const char* key, cplx fallback);
CMatrix get_matrix(const json& doc, const char* key);
Ramp get_ramp(const json& doc);

}  // namespace ergo::cli
