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
#ifndef FERTDIFF_ERROR_H
#define FERTDIFF_ERROR_H

#include <stdexcept>
#include <string>

namespace fertdiff
{

/// Malformed input file (CSV row/column problems, unreadable files).
class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or incomplete configuration. Messages name the offending field.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical procedure could not produce a result (degenerate input, no convergence).
class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace fertdiff

#endif // FERTDIFF_ERROR_H
