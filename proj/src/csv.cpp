/*
 * Copyright 2026 The rkcca authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "rkcca/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rkcca::csv {

namespace {

bool parse_double(const std::string& cell, double* out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return false;
  *out = v;
  return true;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) {
    // trim surrounding spaces and a trailing CR
    size_t b = cell.find_first_not_of(" \t\r");
    size_t e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string()
                                           : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == delim) cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Table read_table(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  Table table;
  std::string line;
  int line_no = 0;
  size_t width = 0;
  bool first_data_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (delimiter == 0)
      delimiter = line.find('\t') != std::string::npos ? '\t' : ',';

    std::vector<std::string> cells = split(line, delimiter);
    if (first_data_line) {
      first_data_line = false;
      width = cells.size();
      // header detection: any cell that does not parse as a number
      bool numeric = true;
      double tmp;
      for (const auto& c : cells)
        if (!parse_double(c, &tmp)) numeric = false;
      if (!numeric) {
        table.header = std::move(cells);
        continue;
      }
    }
    if (cells.size() != width)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": ragged row (expected " +
                               std::to_string(width) + " cells, got " +
                               std::to_string(cells.size()) + ")");
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty() && table.header.empty())
    throw std::runtime_error(path + ": empty file");
  return table;
}

Matrix to_matrix(const Table& table, const std::string& path) {
  const Index rows = table.n_rows();
  const Index cols = table.n_cols();
  if (rows == 0) throw std::runtime_error(path + ": no data rows");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    const int line = table.line_numbers[static_cast<size_t>(i)];
    for (Index j = 0; j < cols; ++j) {
      double v;
      if (!parse_double(row[static_cast<size_t>(j)], &v))
        throw std::runtime_error(path + ":" + std::to_string(line) +
                                 ": non-numeric cell '" +
                                 row[static_cast<size_t>(j)] + "' in column " +
                                 std::to_string(j + 1));
      m(i, j) = v;
    }
  }
  return m;
}

void write_matrix(const std::string& path, const Eigen::Ref<const Matrix>& m,
                  const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  if (!header.empty()) {
    require(static_cast<Index>(header.size()) == m.cols(),
            "write_matrix: header width mismatch");
    for (size_t j = 0; j < header.size(); ++j)
      out << (j ? "," : "") << header[j];
    out << '\n';
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_rows(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  if (!header.empty()) {
    for (size_t j = 0; j < header.size(); ++j)
      out << (j ? "," : "") << header[j];
    out << '\n';
  }
  for (const auto& row : rows) {
    for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace rkcca::csv
