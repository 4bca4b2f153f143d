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

#include "epointda/text_format.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "epointda/errors.h"

namespace epointda {
namespace {

[[noreturn]] void Malformed(std::string_view text, std::string_view what) {
  throw ContractError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
}

template <typename T>
T ParseNumber(std::string_view text, std::string_view what) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) Malformed(text, what);
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out(buf);
  if (out.starts_with("-") && std::stod(out) == 0.0) out.erase(0, 1);
  return out;
}

double ParseDouble(std::string_view text, std::string_view what) {
  return ParseNumber<double>(text, what);
}

int64_t ParseInt(std::string_view text, std::string_view what) {
  return ParseNumber<int64_t>(text, what);
}

uint64_t ParseUint(std::string_view text, std::string_view what) {
  return ParseNumber<uint64_t>(text, what);
}

bool ParseBool(std::string_view text, std::string_view what) {
  if (text == "1" || text == "true" || text == "on") return true;
  if (text == "0" || text == "false" || text == "off") return false;
  Malformed(text, what);
}

std::string SerializeKeyValues(const KeyValues& entries) {
  std::string out;
  for (const auto& [key, value] : entries) {
    if (key.empty() || key.find_first_of("=\n") != std::string::npos ||
        value.find('\n') != std::string::npos) {
      throw ContractError("key=value entry cannot be serialized: " + key);
    }
    out += key + "=" + value + "\n";
  }
  return out;
}

KeyValues ParseKeyValues(std::string_view text) {
  KeyValues out;
  size_t line_no = 0;
  for (const std::string& raw : SplitString(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ContractError("line " + std::to_string(line_no) + " is not key=value");
    }
    out.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> SplitString(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace epointda
