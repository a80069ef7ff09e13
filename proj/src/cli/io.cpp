#include "qgate/cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qgate::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : file_(std::fopen(path.c_str(), "w")), columns_(header.size()) {
  if (!file_) throw std::runtime_error("cannot write " + path.string());
  row(header);
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::logic_error("csv: row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) std::fputc(',', file_);
    std::fputs(cells[i].c_str(), file_);
  }
  std::fputc('\n', file_);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void write_field_csv(const std::filesystem::path& path, const PiecewiseField& field) {
  CsvWriter out(path, {"t", "C"});
  for (int k = 0; k < field.grid.steps; ++k) {
    out.row(std::vector<double>{field.grid.midpoint(k),
                                field.values[static_cast<std::size_t>(k)]});
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

PiecewiseField read_field_csv(const std::filesystem::path& path, const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field file " + path.string());
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"t", "C"}) {
    throw std::runtime_error(path.string() + ": expected header 't,C'");
  }
  PiecewiseField field{grid, {}};
  field.values.reserve(static_cast<std::size_t>(grid.steps));
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 2 columns");
    }
    double t = 0.0, c = 0.0;
    try {
      t = std::stod(cells[0]);
      c = std::stod(cells[1]);
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": not a number");
    }
    const int k = static_cast<int>(field.values.size());
    if (k >= grid.steps || std::abs(t - grid.midpoint(k)) > 1e-9 * std::max(1.0, grid.t_final)) {
      throw std::runtime_error(path.string() + ": field does not match the grid (t_f = " +
                               format_double(grid.t_final) + ", steps = " +
                               std::to_string(grid.steps) + ")");
    }
    field.values.push_back(c);
  }
  if (static_cast<int>(field.values.size()) != grid.steps) {
    throw std::runtime_error(path.string() + ": field has " +
                             std::to_string(field.values.size()) +
                             " samples, grid has " + std::to_string(grid.steps));
  }
  field.validate();
  return field;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace qgate::cli
