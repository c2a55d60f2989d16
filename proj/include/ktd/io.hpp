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

#ifndef KTD_IO_HPP
#define KTD_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ktd/types.hpp"

namespace ktd {

/// Point cloud CSV: one row per point, comma separated, '.' decimal, no header.
/// Blank lines are skipped; ragged rows are an error.
PointMatrix read_points_csv(std::istream& in);
PointMatrix read_points_csv(const std::string& path);
void write_points_csv(std::ostream& out, const PointMatrix& points);
void write_points_csv(const std::string& path, const PointMatrix& points);

/// Matrix (or vector as one column) without header, shortest round-trip digits.
void write_matrix_csv(const std::string& path, const Matrix& m);

/// JSON array of arrays (or flat array of numbers for 1-D data).
PointMatrix points_from_json(const nlohmann::json& j);

/// Fixed-point text with ten fractional digits, locale independent.
std::string format_scalar(double value);

/// Simple CSV table with a header row.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

}  // namespace ktd

#endif  // KTD_IO_HPP
