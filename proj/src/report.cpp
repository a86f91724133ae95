#include "bdsiw/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bdsiw {

std::string format_double(double value) {
  // try increasing precision until the text parses back to the same bits
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == value) break;
  }
  return buf;
}

void ReportDocument::add(std::string key, std::string value) {
  if (key.empty() || key.find_first_of(" \t\n") != std::string::npos)
    throw std::invalid_argument("report keys must be nonempty and whitespace-free");
  if (value.find('\n') != std::string::npos)
    throw std::invalid_argument("report values must be single-line");
  entries.emplace_back(std::move(key), std::move(value));
}

void ReportDocument::add(std::string key, double value) {
  add(std::move(key), format_double(value));
}

void ReportDocument::add(std::string key, std::int64_t value) {
  add(std::move(key), std::to_string(value));
}

std::optional<std::string> ReportDocument::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

std::optional<double> ReportDocument::find_double(const std::string& key) const {
  const auto v = find(key);
  if (!v) return std::nullopt;
  double out = 0.0;
  if (std::sscanf(v->c_str(), "%lf", &out) != 1) return std::nullopt;
  return out;
}

std::string ReportDocument::serialize() const {
  std::ostringstream out;
  out << "bdsiw-report " << version << "\n";
  for (const auto& [k, v] : entries) out << k << ' ' << v << "\n";
  return out.str();
}

ReportDocument ReportDocument::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("bdsiw-report ", 0) != 0)
    throw std::runtime_error("not a bdsiw report document");
  ReportDocument doc;
  {
    const std::string ver = line.substr(13);
    const auto [ptr, ec] = std::from_chars(ver.data(), ver.data() + ver.size(), doc.version);
    if (ec != std::errc{} || ptr != ver.data() + ver.size())
      throw std::runtime_error("malformed report version");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    if (space == std::string::npos || space == 0)
      throw std::runtime_error("malformed report line: " + line);
    doc.entries.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  return doc;
}

}  // namespace bdsiw
