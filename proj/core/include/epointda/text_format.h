/*
 * Copyright 2026 The epointda Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EPOINTDA_TEXT_FORMAT_H_
#define EPOINTDA_TEXT_FORMAT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epointda {

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);
// Fixed-point with `decimals` digits after the point.
std::string FormatFixed(double value, int decimals);

// Strict parsers; throw ContractError naming `what` on malformed input.
double ParseDouble(std::string_view text, std::string_view what);
int64_t ParseInt(std::string_view text, std::string_view what);
uint64_t ParseUint(std::string_view text, std::string_view what);
bool ParseBool(std::string_view text, std::string_view what);

// Flat "key=value" lines. Blank lines and lines starting with '#' are
// skipped; order and duplicates are preserved.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
std::string SerializeKeyValues(const KeyValues& entries);
KeyValues ParseKeyValues(std::string_view text);

std::vector<std::string> SplitString(std::string_view text, char sep);

}  // namespace epointda

#endif  // EPOINTDA_TEXT_FORMAT_H_
