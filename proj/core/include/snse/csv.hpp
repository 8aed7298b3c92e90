#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace snse {

// Deterministic CSV writer: header row mandatory, numbers formatted with
// %.17g so re-runs are byte-identical and values round-trip.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  // Mixed row where some columns are pre-rendered text (e.g. integers).
  void raw_row(const std::vector<std::string>& cells);

  static std::string format(double v);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace snse
