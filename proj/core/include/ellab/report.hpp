#pragma once

#include "ellab/quadrature.hpp"
#include "ellab/verifier.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace ellab {

inline constexpr const char* kVersion = "0.1.0";

using ParamValue = std::variant<bool, double, std::string, std::vector<double>>;

/// Request parameters. Every lookup marks the key as used, so leftovers can be
/// reported as unknown parameters.
class Params {
 public:
  void set(const std::string& key, ParamValue value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key, double fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  /// Keys never looked up since construction.
  std::vector<std::string> unused() const;
  const std::map<std::string, ParamValue>& values() const { return values_; }

 private:
  const ParamValue* find(const std::string& key) const;
  std::map<std::string, ParamValue> values_;
  mutable std::set<std::string> used_;
};

struct ProblemSpec {
  std::string name;
  Params params;  // dimension, lambda, tau, boundary, backend
};

struct FunctionalRequest {
  std::string name;
  std::string kind;  // hardy | bloch | lipschitz | dirichlet | growth-profile
  Params params;
};

struct CheckRequest {
  std::string name;
  std::string theorem;
  Params params;
};

struct RunConfig {
  std::vector<ProblemSpec> problems;
  std::vector<FunctionalRequest> functionals;
  std::vector<CheckRequest> checks;
  QuadratureOrders orders;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string output_dir = "ellab-out";
};

enum class ConfigFormat { Auto, Toml, Json };

/// Auto picks JSON when the first non-blank character is '{'.
RunConfig parse_config(const std::string& text, ConfigFormat format = ConfigFormat::Auto);
/// Format from the extension (.json, otherwise TOML).
RunConfig load_config(const std::string& path);
/// Canonical JSON echo of a config.
std::string config_to_json(const RunConfig& config);
/// One check per theorem id over the shipped test families.
RunConfig default_config();
/// Theorem ids accepted in check requests.
const std::vector<std::string>& theorem_ids();

struct ReportItem {
  std::size_t index = 0;
  std::string kind;     // solve | norm | verify
  std::string name;
  std::string status;   // ok | error for solve and norm items, the verdict status for checks
  std::string message;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, double>> values;
  std::optional<Verdict> verdict;
  std::vector<Table> tables;
  double runtime_seconds = 0.0;  // volatile
};

struct Report {
  std::string config_json;
  std::uint64_t seed = 1;
  std::vector<ReportItem> items;
  std::string version = kVersion;
  std::string timestamp;  // volatile

  /// 0 when every item succeeded, 2 when a check did not pass, 1 when an item errored.
  int exit_code() const;
};

struct RunOptions {
  bool problems = true;
  bool functionals = true;
  bool checks = true;
  std::string theorem;  // empty: all checks
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
};

/// Executes the requested items, up to `workers` at a time. Item failures are
/// recorded in the item and never abort the batch.
Report run(const RunConfig& config, const RunOptions& options = {});

/// Ordered JSON; non-finite doubles become "inf", "-inf" or "nan". Timestamp and
/// runtimes live in a trailing "volatile" object that is omitted when asked.
std::string report_to_json(const Report& report, bool include_volatile = true);
Report report_from_json(const std::string& text);

std::string table_to_csv(const Table& table);
/// Line plot with one polyline per column after the first (x axis = first column).
std::string table_to_svg(const Table& table, const std::vector<std::string>& curves);

struct EmitOptions {
  bool tables = true;
  bool plots = true;
};
/// Writes report.json, tables/*.csv and plots/*.svg; returns the written paths.
std::vector<std::string> emit(const Report& report, const std::string& directory, const EmitOptions& options = {});

}  // namespace ellab
