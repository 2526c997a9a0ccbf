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

#include "beamlab/csv.hpp"

#include "beamlab/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace beamlab
{

std::string format_double(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::size_t CsvTable::column(const std::string &name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw Error(ErrorCode::io, "missing CSV column '" + name + "'");
}

namespace
{

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
    return out;
}

void write_row(std::ostream &out, const std::vector<std::string> &fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i)
            out << ',';
        out << fields[i];
    }
    out << '\n';
}

std::vector<std::string> split_line(const std::string &line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

} // namespace

void write_csv(const std::filesystem::path &path, const CsvTable &table)
{
    auto out = open_out(path);
    write_row(out, table.header);
    for (const auto &row : table.rows)
        write_row(out, row);
    if (!out)
        throw Error(ErrorCode::io, "write to '" + path.string() + "' failed");
}

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::io, "'" + path.string() + "' is empty");
    table.header = split_line(line);
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        auto row = split_line(line);
        if (row.size() != table.header.size())
            throw Error(ErrorCode::io, "ragged row in '" + path.string() + "'");
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_complex_matrix_csv(const std::filesystem::path &path, const CMatrix &m)
{
    CsvTable t;
    for (Index c = 0; c < m.cols(); ++c)
    {
        t.header.push_back("c" + std::to_string(c) + "_re");
        t.header.push_back("c" + std::to_string(c) + "_im");
    }
    for (Index r = 0; r < m.rows(); ++r)
    {
        std::vector<std::string> row;
        for (Index c = 0; c < m.cols(); ++c)
        {
            row.push_back(format_double(m(r, c).real()));
            row.push_back(format_double(m(r, c).imag()));
        }
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

void write_real_matrix_csv(const std::filesystem::path &path, const RMatrix &m)
{
    CsvTable t;
    for (Index c = 0; c < m.cols(); ++c)
        t.header.push_back("c" + std::to_string(c));
    for (Index r = 0; r < m.rows(); ++r)
    {
        std::vector<std::string> row;
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back(format_double(m(r, c)));
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

void write_beampattern_csv(const std::filesystem::path &path, const std::vector<double> &grid_deg,
                           const std::vector<double> &magnitude)
{
    if (grid_deg.size() != magnitude.size())
        throw Error(ErrorCode::dimension, "grid and beampattern lengths differ");
    CsvTable t{{"theta_deg", "gain_db"}, {}};
    for (std::size_t i = 0; i < grid_deg.size(); ++i)
        t.rows.push_back({format_double(grid_deg[i]), format_double(20.0 * std::log10(magnitude[i]))});
    write_csv(path, t);
}

void ensure_writable_directory(const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw Error(ErrorCode::io, "cannot create output directory '" + dir.string() + "'");
    const auto probe = dir / ".beamlab_write_probe";
    {
        std::ofstream out(probe);
        if (!out || !(out << "x"))
            throw Error(ErrorCode::io, "output directory '" + dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

} // namespace beamlab
