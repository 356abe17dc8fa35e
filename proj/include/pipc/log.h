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

#ifndef PIPC_LOG_H_
#define PIPC_LOG_H_

#include <string>

namespace pipc {

enum class LogLevel { kQuiet = 0, kError, kWarn, kInfo, kDebug };

// Read once from PIPC_LOG (quiet, error, warn, info, debug); warn if unset
// or unrecognised.
LogLevel CurrentLogLevel();
// Writes "[level] message" to stderr when the level is enabled.
void Log(LogLevel level, const std::string& message);

}  // namespace pipc

#endif  // PIPC_LOG_H_
