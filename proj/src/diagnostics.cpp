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

#include "rydsrc/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace rydsrc {

namespace {

std::mutex& warn_mutex()
{
    static std::mutex m;
    return m;
}

WarningHandler& handler()
{
    static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

} // namespace

void warn(std::string_view message)
{
    std::lock_guard lock(warn_mutex());
    if (handler())
        handler()(message);
}

WarningHandler set_warning_handler(WarningHandler h)
{
    std::lock_guard lock(warn_mutex());
    auto previous = std::move(handler());
    handler() = std::move(h);
    return previous;
}

WarningCapture::WarningCapture()
{
    previous_ = set_warning_handler([this](std::string_view msg) { messages_.emplace_back(msg); });
}

WarningCapture::~WarningCapture() { set_warning_handler(std::move(previous_)); }

bool WarningCapture::contains(std::string_view fragment) const
{
    for (const auto& m : messages_)
        if (m.find(fragment) != std::string::npos)
            return true;
    return false;
}

} // namespace rydsrc
