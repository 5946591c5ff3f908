#include "rankone/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rankone/errors.hpp"

namespace rankone {

Check& RunReport::add(const std::string& name, double residual,
                      double tolerance) {
  Check c;
  c.name = name;
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = std::isfinite(residual) && residual <= tolerance;
  checks.push_back(std::move(c));
  return checks.back();
}

Check& RunReport::add_exact(const std::string& name, bool pass) {
  Check c;
  c.name = name;
  c.residual = pass ? 0.0 : 1.0;
  c.tolerance = 0.0;
  c.pass = pass;
  checks.push_back(std::move(c));
  return checks.back();
}

bool RunReport::aggregate_pass() const {
  if (checks.empty()) return false;
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "rankone-report-v1";
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["residual"] = format_double(c.residual);
    item["tolerance"] = format_double(c.tolerance);
    item["pass"] = c.pass;
    j["checks"].push_back(std::move(item));
  }
  j["aggregate_pass"] = aggregate_pass();
  return j.dump(2) + "\n";
}

std::string RunReport::summary() const {
  std::ostringstream os;
  for (const Check& c : checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
       << "  residual=" << format_double(c.residual)
       << "  tol=" << format_double(c.tolerance);
    if (c.runtime_ms > 0.0) {
      os << "  (" << static_cast<long>(c.runtime_ms + 0.5) << " ms)";
    }
    os << "\n";
  }
  os << (aggregate_pass() ? "aggregate: PASS" : "aggregate: FAIL") << "\n";
  return os.str();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace rankone
