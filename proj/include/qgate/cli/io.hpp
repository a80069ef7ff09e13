#pragma once

// Plot-ready CSV and JSON artifacts. Numbers are written with full double
// precision in scientific notation so that files round-trip bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgate/dynamics.hpp"

namespace qgate::cli {

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  /// Mixed row: cells are written verbatim.
  void row(const std::vector<std::string>& cells);

 private:
  std::FILE* file_;
  std::size_t columns_;
};

std::string format_double(double v);

/// Columns t (interval midpoint) and C.
void write_field_csv(const std::filesystem::path& path, const PiecewiseField& field);

/// Reads a field written by write_field_csv and checks it against `grid`.
/// Throws std::runtime_error on malformed input or grid mismatch.
PiecewiseField read_field_csv(const std::filesystem::path& path, const TimeGrid& grid);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Splits one CSV line; no quoting support.
std::vector<std::string> split_csv(const std::string& line);

}  // namespace qgate::cli
