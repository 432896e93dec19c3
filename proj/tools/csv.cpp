#include "csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frachc::io {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("csv: row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string CsvWriter::str() const {
  std::ostringstream os;
  write_line(os, header_);
  for (const auto& r : rows_) write_line(os, r);
  return os.str();
}

void CsvWriter::save(const std::string& path) const { write_file(path, str()); }

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

double CsvTable::number(std::size_t row, int col) const {
  const std::string& s = rows.at(row).at(static_cast<std::size_t>(col));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw std::invalid_argument("csv: '" + s + "' is not a number");
  return v;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
  t.header = split(line);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
  }
  return t;
}

void save_matrix(const std::string& path, const std::vector<double>& a, std::size_t rows,
                 std::size_t cols) {
  if (a.size() != rows * cols) throw std::invalid_argument("save_matrix: size mismatch");
  std::ostringstream os;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) os << ',';
      os << format_number(a[i * cols + j]);
    }
    os << '\n';
  }
  write_file(path, os.str());
}

std::vector<double> load_matrix(const std::string& path, std::size_t& rows, std::size_t& cols) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<double> a;
  std::string line;
  rows = 0;
  cols = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (rows == 0) cols = cells.size();
    if (cells.size() != cols) throw std::runtime_error(path + ": ragged matrix");
    for (const auto& c : cells) {
      char* end = nullptr;
      a.push_back(std::strtod(c.c_str(), &end));
      if (*end != '\0') throw std::runtime_error(path + ": bad number '" + c + "'");
    }
    ++rows;
  }
  return a;
}

}  // namespace frachc::io
