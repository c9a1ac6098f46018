#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace beam {

/// %.17g: enough digits to round-trip any double.
std::string FormatDouble(double x);

/// Accumulates rows in memory; Write() emits the file in one go.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void AddRow(std::vector<std::string> cells);
  void AddRow(std::span<const double> values);

  std::size_t rows() const { return rows_.size(); }
  std::string ToString() const;
  /// Throws std::runtime_error when the file cannot be written.
  void Write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parses a comma-separated file with a header line. Throws
/// std::runtime_error when the file cannot be read or rows are ragged.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvData ReadCsv(const std::filesystem::path& path);

}  // namespace beam
