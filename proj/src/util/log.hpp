// Copyright 2026 The sdb Authors
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

#ifndef SDB_UTIL_LOG_HPP_
#define SDB_UTIL_LOG_HPP_

#include <memory>

#include <spdlog/spdlog.h>

namespace sdb::log {

// stderr logger; level from SDB_LOG_LEVEL (trace, debug, info, warn, error, off).
std::shared_ptr<spdlog::logger> Logger();

template <typename... Args>
void Info(fmt::format_string<Args...> fmt, Args&&... args) {
  Logger()->info(fmt, std::forward<Args>(args)...);
}

template <typename... Args>
void Warn(fmt::format_string<Args...> fmt, Args&&... args) {
  Logger()->warn(fmt, std::forward<Args>(args)...);
}

template <typename... Args>
void Debug(fmt::format_string<Args...> fmt, Args&&... args) {
  Logger()->debug(fmt, std::forward<Args>(args)...);
}

}  // namespace sdb::log

#endif  // SDB_UTIL_LOG_HPP_
