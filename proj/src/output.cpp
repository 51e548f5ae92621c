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

#include "rydsrc/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rydsrc {

std::string sci(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

void write_csv_row(std::ostream& out, std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out << ',';
        out << sci(values[i]);
    }
    out << '\n';
}

void write_csv_row(std::ostream& out, std::initializer_list<double> values)
{
    write_csv_row(out, std::span<const double>(values.begin(), values.size()));
}

void write_csv_header(std::ostream& out, std::initializer_list<std::string_view> columns)
{
    bool first = true;
    for (auto c : columns) {
        if (!first)
            out << ',';
        out << c;
        first = false;
    }
    out << '\n';
}

namespace {

void indent_to(std::ostringstream& os, int indent, int depth)
{
    if (indent < 0)
        return;
    os << '\n';
    for (int i = 0; i < indent * depth; ++i)
        os << ' ';
}

void dump(std::ostringstream& os, const nlohmann::json& j, int indent, int depth)
{
    using nlohmann::json;
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                os << ',';
            first = false;
            indent_to(os, indent, depth + 1);
            os << json(it.key()).dump() << (indent >= 0 ? ": " : ":");
            dump(os, it.value(), indent, depth + 1);
        }
        indent_to(os, indent, depth);
        os << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first)
                os << ',';
            first = false;
            indent_to(os, indent, depth + 1);
            dump(os, v, indent, depth + 1);
        }
        indent_to(os, indent, depth);
        os << ']';
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (std::isfinite(v))
            os << sci(v);
        else
            os << "null";
        return;
    }
    default:
        os << j.dump();
    }
}

} // namespace

std::string dump_json_sci(const nlohmann::json& doc, int indent)
{
    std::ostringstream os;
    dump(os, doc, indent, 0);
    os << '\n';
    return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

} // namespace rydsrc
