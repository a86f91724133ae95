#include "bdsiw/datasets.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bdsiw {

namespace {

Dataset make_embedded(std::string name, std::vector<PairObs> pairs) {
  Dataset d;
  d.name = std::move(name);
  d.pairs = PairedSample::from_pairs(std::move(pairs));
  d.provenance = "embedded";
  return d;
}

}  // namespace

const Dataset& football_dataset() {
  static const Dataset d = make_embedded(
      "football",
      {{1, 2}, {0, 0}, {1, 1}, {1, 2}, {1, 1}, {0, 1}, {1, 1}, {3, 2}, {1, 1},
       {1, 1}, {1, 2}, {3, 3}, {0, 1}, {1, 2}, {1, 1}, {1, 3}, {3, 3}, {0, 1},
       {1, 1}, {1, 2}, {1, 0}, {3, 0}, {1, 2}, {1, 1}, {0, 1}, {0, 1}});
  return d;
}

const Dataset& nasal_dataset() {
  static const Dataset d = make_embedded(
      "nasal",
      {{1, 1}, {0, 0}, {1, 1}, {1, 1}, {0, 2}, {2, 0}, {2, 2}, {1, 1}, {3, 2}, {2, 2},
       {1, 0}, {2, 3}, {1, 3}, {2, 1}, {2, 3}, {2, 1}, {1, 1}, {2, 2}, {3, 1}, {1, 1},
       {2, 1}, {2, 2}, {1, 1}, {2, 2}, {2, 0}, {1, 1}, {0, 1}, {1, 1}, {1, 1}, {3, 3}});
  return d;
}

std::vector<std::string> embedded_dataset_names() { return {"football", "nasal"}; }

const Dataset* find_embedded(const std::string& name) {
  if (name == "football") return &football_dataset();
  if (name == "nasal") return &nasal_dataset();
  return nullptr;
}

namespace {

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trimmed(line.substr(start)));
      break;
    }
    fields.push_back(trimmed(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_cell(std::string_view cell, std::int64_t& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

Dataset load_csv(const std::string& path, int col1, int col2) {
  if (col1 < 0 || col2 < 0) throw std::invalid_argument("column indices must be nonnegative");
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open file: " + path, 0, 0);

  Dataset d;
  d.name = path;
  d.provenance = path;

  std::vector<PairObs> pairs;
  std::string line;
  int row = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++row;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string_view> fields = split_fields(line);
    const int max_col = std::max(col1, col2);
    if (max_col >= static_cast<int>(fields.size())) {
      if (!seen_data && row == 1) {
        d.notes.push_back("skipped header row 1");
        continue;
      }
      throw CsvError("row " + std::to_string(row) + " has only " +
                         std::to_string(fields.size()) + " columns",
                     row, max_col + 1);
    }
    std::int64_t v1 = 0, v2 = 0;
    const bool ok1 = parse_cell(fields[static_cast<std::size_t>(col1)], v1);
    const bool ok2 = parse_cell(fields[static_cast<std::size_t>(col2)], v2);
    if (!ok1 || !ok2) {
      if (!seen_data && row == 1) {
        d.notes.push_back("skipped header row 1");
        continue;
      }
      const int bad_col = !ok1 ? col1 + 1 : col2 + 1;
      throw CsvError("cell at row " + std::to_string(row) + ", column " +
                         std::to_string(bad_col) + " is not an integer",
                     row, bad_col);
    }
    if (v1 < 0 || v2 < 0) {
      const int bad_col = v1 < 0 ? col1 + 1 : col2 + 1;
      throw CsvError("negative value at row " + std::to_string(row) + ", column " +
                         std::to_string(bad_col),
                     row, bad_col);
    }
    pairs.push_back({v1, v2});
    seen_data = true;
  }
  if (pairs.empty()) throw CsvError("no data rows in " + path, 0, 0);
  d.pairs = PairedSample::from_pairs(std::move(pairs));
  return d;
}

}  // namespace bdsiw
