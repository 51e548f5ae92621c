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

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rydsrc {

/// Invalid or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure during time integration (NaN, norm growth).
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the domain of a physics routine.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Emit a non-fatal warning. The default handler writes to stderr.
void warn(std::string_view message);

/// Replace the process-wide warning handler; returns the previous one.
/// Not synchronized with concurrent warn() calls: install before starting
/// worker threads.
WarningHandler set_warning_handler(WarningHandler handler);

/// Collects warnings for the lifetime of the object (tests, CLI summaries).
class WarningCapture {
public:
    WarningCapture();
    ~WarningCapture();
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    const std::vector<std::string>& messages() const { return messages_; }
    bool contains(std::string_view fragment) const;

private:
    std::vector<std::string> messages_;
    WarningHandler previous_;
};

} // namespace rydsrc
