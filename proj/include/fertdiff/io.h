/*
* Copyright (C) 2026 fertdiff contributors
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
#ifndef FERTDIFF_IO_H
#define FERTDIFF_IO_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fertdiff
{

/// Header plus rows of raw cell strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or -1.
    int column(std::string_view name) const;
};

/// Reads a comma-separated file with a mandatory header row. Throws ParseError.
CsvTable read_csv(const std::filesystem::path& path);

/// Parses a full cell as a finite double. Throws ParseError naming row and column.
double parse_double(std::string_view cell, std::size_t row, std::string_view column);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Writes text to a file, creating parent directories. Throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

} // namespace fertdiff

#endif // FERTDIFF_IO_H
