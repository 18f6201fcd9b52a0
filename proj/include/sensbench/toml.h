/*
 * Copyright 2026 The Sensbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SENSBENCH_TOML_H_
#define SENSBENCH_TOML_H_

#include <string_view>

#include "json.hpp"

namespace sensbench {

// Parses the TOML subset used by run configs into a JSON object:
// [table] and [table.sub] headers, [[array-of-tables]], bare / quoted /
// dotted keys, basic and literal strings, integers, floats (including
// inf/nan), booleans, arrays (may span lines) and inline tables.
// Dates, multi-line strings and other TOML extensions are rejected.
// Throws ConfigError with a line number on malformed input.
nlohmann::json parse_toml(std::string_view text);

}  // namespace sensbench

#endif  // SENSBENCH_TOML_H_
