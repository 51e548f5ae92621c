// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rydsrc {

/// Output schema version written into manifests and CSV headers.
inline constexpr int kSchemaVersion = 1;

/// Fixed-precision scientific notation with 17 significant digits.
std::string sci(double value);

/// Writes one CSV row of numbers in `sci` format.
void write_csv_row(std::ostream& out, std::span<const double> values);
void write_csv_row(std::ostream& out, std::initializer_list<double> values);
void write_csv_header(std::ostream& out, std::initializer_list<std::string_view> columns);

/// JSON text with every floating-point number in `sci` format and object
/// keys sorted, so equal documents are byte-identical.
std::string dump_json_sci(const nlohmann::json& doc, int indent = 2);

/// Writes text to a file, creating parent directories. Throws on I/O error.
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace rydsrc
