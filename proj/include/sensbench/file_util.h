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

#ifndef SENSBENCH_FILE_UTIL_H_
#define SENSBENCH_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace sensbench {

// Writes to "<path>.tmp" then renames over `path`, so readers never observe
// a partially written file. Throws Error on I/O failure.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace sensbench

#endif  // SENSBENCH_FILE_UTIL_H_
