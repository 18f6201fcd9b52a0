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

#ifndef SENSBENCH_SUBPROCESS_H_
#define SENSBENCH_SUBPROCESS_H_

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sensbench {

// Child process with line-oriented pipes on its stdin/stdout. stderr is
// inherited. All failures surface as AdapterError.
class Subprocess {
 public:
  // argv[0] is resolved through PATH. A non-empty `working_dir` becomes the
  // child's current directory.
  explicit Subprocess(const std::vector<std::string>& argv,
                      const std::filesystem::path& working_dir = {});
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  // Writes `line` plus '\n'. Throws if the child closed its stdin.
  void write_line(std::string_view line);

  // Next '\n'-terminated line without the terminator; nullopt at EOF.
  // Throws AdapterError if nothing arrives within `timeout`.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  void close_stdin();

  // Exit code (128 + signal for signalled children) once the child has
  // exited, or nullopt if it is still running after `timeout`.
  std::optional<int> wait(std::chrono::milliseconds timeout);

  void kill();
  pid_t pid() const { return pid_; }

 private:
  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  std::optional<int> exit_code_;
  std::string buffer_;
};

}  // namespace sensbench

#endif  // SENSBENCH_SUBPROCESS_H_
