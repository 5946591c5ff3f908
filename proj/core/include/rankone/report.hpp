#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rankone {

/// One named residual check against a tolerance.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
};

/// Collected results of one run. Partial failures are collected, never
/// fail-fast; the aggregate verdict is the conjunction.
struct RunReport {
  std::string subcommand;
  uint64_t seed = 0;
  std::vector<Check> checks;

  Check& add(const std::string& name, double residual, double tolerance);
  /// For identities checked exactly (bitwise or boolean), no residual scale.
  Check& add_exact(const std::string& name, bool pass);
  bool aggregate_pass() const;

  /// Deterministic JSON: fixed key order, shortest round-trip floats, no
  /// wall-clock content (runtimes go to the human-readable summary only).
  std::string to_json() const;
  /// One line per check plus the verdict, with runtimes.
  std::string summary() const;
};

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Deterministic CSV assembly (caller formats the cells).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_string() const;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rankone
