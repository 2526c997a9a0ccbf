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

#include "beamlab/config.hpp"

#include "beamlab/error.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace beamlab
{

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Drops a trailing comment, ignoring '#' inside double quotes.
std::string strip_comment(const std::string &line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        if (line[i] == '"')
            quoted = !quoted;
        else if (line[i] == '#' && !quoted)
            return line.substr(0, i);
    }
    return line;
}

bool valid_key(const std::string &k)
{
    if (k.empty())
        return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    return true;
}

std::string unquote(const std::string &v, const std::string &key)
{
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    if (!v.empty() && (v.front() == '"' || v.back() == '"'))
        throw Error(ErrorCode::config, "unbalanced quotes in value of '" + key + "'");
    return v;
}

std::vector<std::string> list_items(const std::string &v, const std::string &key)
{
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        return {unquote(v, key)};
    std::vector<std::string> items;
    std::string body = v.substr(1, v.size() - 2);
    std::istringstream in(body);
    std::string item;
    while (std::getline(in, item, ','))
    {
        item = trim(item);
        if (item.empty())
            continue;
        items.push_back(unquote(item, key));
    }
    return items;
}

} // namespace

double parse_double(const std::string &text, const std::string &what)
{
    const std::string t = trim(text);
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw Error(ErrorCode::config, "expected a number for " + what + ", got '" + text + "'");
    return v;
}

long long parse_int(const std::string &text, const std::string &what)
{
    const std::string t = trim(text);
    char *end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw Error(ErrorCode::config, "expected an integer for " + what + ", got '" + text + "'");
    return v;
}

FlatConfig FlatConfig::parse(const std::string &text, const std::string &origin)
{
    FlatConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty())
            continue;
        const auto where = origin + ":" + std::to_string(lineno);
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::config, where + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!valid_key(key))
            throw Error(ErrorCode::config, where + ": invalid key '" + key + "'");
        if (value.empty())
            throw Error(ErrorCode::config, where + ": empty value for '" + key + "'");
        if (cfg.values_.count(key))
            throw Error(ErrorCode::config, where + ": duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

FlatConfig FlatConfig::load(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::vector<std::string> FlatConfig::keys() const
{
    std::vector<std::string> out;
    for (const auto &kv : values_)
        out.push_back(kv.first);
    return out;
}

void FlatConfig::set(const std::string &key, const std::string &raw_value)
{
    if (!valid_key(key))
        throw Error(ErrorCode::config, "invalid key '" + key + "'");
    values_[key] = trim(raw_value);
}

std::string FlatConfig::raw(const std::string &key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw Error(ErrorCode::config, origin_ + ": missing key '" + key + "'");
    return it->second;
}

std::string FlatConfig::get_string(const std::string &key) const { return unquote(raw(key), key); }

double FlatConfig::get_double(const std::string &key) const { return parse_double(raw(key), "'" + key + "'"); }

long long FlatConfig::get_int(const std::string &key) const { return parse_int(raw(key), "'" + key + "'"); }

bool FlatConfig::get_bool(const std::string &key) const
{
    const std::string v = raw(key);
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    throw Error(ErrorCode::config, "expected true or false for '" + key + "'");
}

std::vector<double> FlatConfig::get_double_list(const std::string &key) const
{
    std::vector<double> out;
    for (const auto &item : list_items(raw(key), key))
        out.push_back(parse_double(item, "'" + key + "'"));
    return out;
}

std::vector<std::string> FlatConfig::get_string_list(const std::string &key) const
{
    return list_items(raw(key), key);
}

} // namespace beamlab
