#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bdsiw/inference.hpp"

namespace bdsiw {

struct Dataset {
  std::string name;
  PairedSample pairs;
  std::string provenance;          // "embedded" or the source file path
  std::vector<std::string> notes;  // e.g. a skipped header row
};

// Embedded example data shipped with the library:
//   "football": 26 full-time score pairs from a long-running fixture
//   "nasal":    30 day-1/day-2 symptom severity scores (0..3 scale)
const Dataset& football_dataset();
const Dataset& nasal_dataset();

std::vector<std::string> embedded_dataset_names();
const Dataset* find_embedded(const std::string& name);  // nullptr if unknown

class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& msg, int row, int column)
      : std::runtime_error(msg), row_(row), column_(column) {}
  int row() const { return row_; }        // 1-based, 0 when not cell-specific
  int column() const { return column_; }  // 1-based

 private:
  int row_;
  int column_;
};

// Two designated 0-based columns of a comma-separated file, parsed as
// nonnegative integers. A first row whose designated columns do not parse
// is taken as a header and skipped with a note; any later bad cell is an
// error naming its row and column.
Dataset load_csv(const std::string& path, int col1 = 0, int col2 = 1);

}  // namespace bdsiw
