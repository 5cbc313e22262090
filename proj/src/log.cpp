/* Copyright (c) 2026 The hinforge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "hinforge/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace hinforge::log {

namespace {
std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;

const char* tag(Level l) {
  switch (l) {
    case Level::Debug: return "D";
    case Level::Info: return "I";
    case Level::Warn: return "W";
    case Level::Error: return "E";
    case Level::Off: return "";
  }
  return "";
}
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void write(Level l, std::string_view message) {
  if (l < g_level.load() || l == Level::Off) return;
  std::lock_guard lock(g_mutex);
  std::cerr << '[' << tag(l) << "] " << message << '\n';
}

}  // namespace hinforge::log
