#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bdsiw {

// Versioned line-oriented key-value document, the machine-readable output
// format of the command-line tool. Layout:
//
//   bdsiw-report 1
//   <key> <value>
//   ...
//
// Keys contain no whitespace; a value is the rest of its line. Doubles are
// serialized with enough digits to round-trip, so parse(serialize(d)) == d.
struct ReportDocument {
  int version = 1;
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value);
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(std::string key, double value);
  void add(std::string key, std::int64_t value);
  void add(const std::string& key, int value) { add(key, static_cast<std::int64_t>(value)); }

  // first value stored under `key`, if any
  std::optional<std::string> find(const std::string& key) const;
  std::optional<double> find_double(const std::string& key) const;

  std::string serialize() const;
  static ReportDocument parse(const std::string& text);  // throws std::runtime_error

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

std::string format_double(double value);  // shortest form that round-trips

}  // namespace bdsiw
