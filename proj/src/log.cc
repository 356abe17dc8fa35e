// Copyright 2026 The PIPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pipc/log.h"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace pipc {

namespace {

LogLevel ParseLevel(const char* value) {
  if (value == nullptr) return LogLevel::kWarn;
  const std::string v(value);
  if (v == "quiet" || v == "0") return LogLevel::kQuiet;
  if (v == "error" || v == "1") return LogLevel::kError;
  if (v == "warn" || v == "2") return LogLevel::kWarn;
  if (v == "info" || v == "3") return LogLevel::kInfo;
  if (v == "debug" || v == "4") return LogLevel::kDebug;
  return LogLevel::kWarn;
}

const char* LevelName(LogLevel level) {
  switch (level) {
    case LogLevel::kError:
      return "error";
    case LogLevel::kWarn:
      return "warn";
    case LogLevel::kInfo:
      return "info";
    case LogLevel::kDebug:
      return "debug";
    default:
      return "";
  }
}

}  // namespace

LogLevel CurrentLogLevel() {
  static const LogLevel level = ParseLevel(std::getenv("PIPC_LOG"));
  return level;
}

void Log(LogLevel level, const std::string& message) {
  if (level == LogLevel::kQuiet || level > CurrentLogLevel()) return;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  std::cerr << '[' << LevelName(level) << "] " << message << '\n';
}

}  // namespace pipc
