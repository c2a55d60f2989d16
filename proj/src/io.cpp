// Copyright 2026 The ktdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ktd/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "ktd/errors.hpp"

namespace ktd {
namespace {

double parse_double(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw InvalidArgument(fmt::format("CSV line {}: cannot parse '{}' as a number", line_no, field));
  }
  return v;
}

}  // namespace

PointMatrix read_points_csv(std::istream& in) {
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    Eigen::Index count = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_double(rest.substr(0, comma), line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols >= 0 && count != cols) {
      throw InvalidArgument(fmt::format("CSV line {}: expected {} columns, found {}", line_no, cols, count));
    }
    cols = count;
    ++rows;
  }
  if (rows == 0) {
    return PointMatrix(0, 0);
  }
  PointMatrix out(rows, cols);
  std::copy(values.begin(), values.end(), out.data());
  return out;
}

PointMatrix read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument(fmt::format("cannot open '{}'", path));
  }
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const PointMatrix& points) {
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      out << (j ? "," : "") << fmt::format("{}", points(i, j));
    }
    out << '\n';
  }
}

void write_points_csv(const std::string& path, const PointMatrix& points) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument(fmt::format("cannot write '{}'", path));
  }
  write_points_csv(out, points);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument(fmt::format("cannot write '{}'", path));
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << fmt::format("{}", m(i, j));
    }
    out << '\n';
  }
}

PointMatrix points_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw InvalidArgument("point cloud JSON must be a non-empty array");
  }
  if (j.front().is_number()) {
    PointMatrix out(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) {
      out(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
    }
    return out;
  }
  const auto d = j.front().size();
  PointMatrix out(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != d) {
      throw InvalidArgument("point cloud JSON rows must all have the same length");
    }
    for (std::size_t k = 0; k < d; ++k) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return out;
}

std::string format_scalar(double value) { return fmt::format("{:.10f}", value); }

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) {
    throw InvalidArgument("table header and column count differ");
  }
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument(fmt::format("cannot write '{}'", path));
  }
  out << fmt::format("{}\n", fmt::join(header, ","));
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << fmt::format("{}", columns[c].at(i));
    }
    out << '\n';
  }
}

}  // namespace ktd
