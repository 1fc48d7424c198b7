/**
 * Copyright 2026 The segaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string_view>

namespace segaug {

enum class LogLevel { Quiet = 0, Info = 1, Verbose = 2 };

void set_log_level(LogLevel level);
LogLevel log_level();

/// Writes one line to stderr when the current level is at least `level`.
void log_message(LogLevel level, std::string_view message);

}  // namespace segaug
