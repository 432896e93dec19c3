#pragma once

#include <string>
#include <vector>

namespace frachc::io {

// Fixed numeric format for every CSV cell: %.16e, 17 significant digits, which
// round-trips binary64 exactly through strtod.
std::string format_number(double v);

class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  // Writes `path`.tmp, then renames it over `path`.
  void save(const std::string& path) const;
  std::string str() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
  double number(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);

// Dense row-major matrix without header.
void save_matrix(const std::string& path, const std::vector<double>& a, std::size_t rows,
                 std::size_t cols);
std::vector<double> load_matrix(const std::string& path, std::size_t& rows, std::size_t& cols);

}  // namespace frachc::io
