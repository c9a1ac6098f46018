#include "beam/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beam {

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header)) {}

void CsvTable::AddRow(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::logic_error("CSV row has " + std::to_string(cells.size()) +
                           " cells, header has " +
                           std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

void CsvTable::AddRow(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(FormatDouble(v));
  AddRow(std::move(cells));
}

namespace {

void AppendLine(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

}  // namespace

std::string CsvTable::ToString() const {
  std::string out;
  AppendLine(out, header_);
  for (const auto& r : rows_) AppendLine(out, r);
  return out;
}

void CsvTable::Write(const std::filesystem::path& path) const {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << ToString();
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

CsvData ReadCsv(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot read " + path.string());
  CsvData data;
  std::string line;
  bool first = true;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      data.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != data.header.size()) {
        throw std::runtime_error(path.string() + ": ragged row");
      }
      data.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::runtime_error(path.string() + ": empty file");
  return data;
}

}  // namespace beam
