// SPDX-License-Identifier: Apache-2.0
//
// beamlab - robust adaptive beamforming via preprocessing-based spatial sampling
// Copyright (C) 2026 The beamlab authors
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
// ------------------------------------------------------------------------

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace beamlab
{

/// Flat key/value document:
///
///     # comment
///     preset = "fig5"
///     trials = 100
///     sweep_values = [-10, 0, 10]
///     methods = ["ppbss", "optimal"]
///
/// Values are kept as text and converted on access. Duplicate keys and
/// malformed lines are config errors that name the offending line.
class FlatConfig
{
public:
    static FlatConfig parse(const std::string &text, const std::string &origin = "<string>");
    static FlatConfig load(const std::filesystem::path &path);

    bool has(const std::string &key) const { return values_.count(key) != 0; }
    std::vector<std::string> keys() const;

    std::string get_string(const std::string &key) const;
    double get_double(const std::string &key) const;
    long long get_int(const std::string &key) const;
    bool get_bool(const std::string &key) const;
    std::vector<double> get_double_list(const std::string &key) const;
    std::vector<std::string> get_string_list(const std::string &key) const;

    void set(const std::string &key, const std::string &raw_value);

private:
    std::string raw(const std::string &key) const;
    std::map<std::string, std::string> values_;
    std::string origin_;
};

// Shared number parsing for config values and CLI lists. Throws config on junk.
double parse_double(const std::string &text, const std::string &what);
long long parse_int(const std::string &text, const std::string &what);

} // namespace beamlab
