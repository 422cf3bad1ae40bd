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
#pragma once

#include <string>
#include <vector>

#include "rkcca/types.hpp"

namespace rkcca::csv {

/// Doubles are emitted with 17 significant digits, enough for an exact
/// round trip.
std::string format_double(double v);

/// Parsed delimited text: rows of string cells plus an optional header row.
/// line_numbers maps each data row back to its 1-based line in the file.
struct Table {
  std::vector<std::string> header;  // empty when the file had none
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;

  Index n_rows() const { return static_cast<Index>(rows.size()); }
  Index n_cols() const {
    return rows.empty() ? static_cast<Index>(header.size())
                        : static_cast<Index>(rows.front().size());
  }
};

/// Reads a delimited file. delimiter = 0 auto-detects comma vs tab from the
/// first line; a header row is detected by non-numeric cells in the first
/// line. Ragged rows raise an error naming the line.
Table read_table(const std::string& path, char delimiter = 0);

/// Numeric view of a parsed table; errors name the offending line and cell.
Matrix to_matrix(const Table& table, const std::string& path);

void write_matrix(const std::string& path, const Eigen::Ref<const Matrix>& m,
                  const std::vector<std::string>& header = {});

void write_rows(const std::string& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

}  // namespace rkcca::csv
