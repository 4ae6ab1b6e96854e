// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace graphfi::log {

namespace {

Level parse_env_level() {
    const char* raw = std::getenv("GRAPHFI_LOG_LEVEL");
    if (!raw) return Level::Info;
    const std::string v(raw);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    std::cerr << "[graphfi] unknown GRAPHFI_LOG_LEVEL '" << v << "', using info\n";
    return Level::Info;
}

std::atomic<int>& level_slot() {
    static std::atomic<int> slot{static_cast<int>(parse_env_level())};
    return slot;
}

std::mutex& write_mutex() {
    static std::mutex m;
    return m;
}

const char* tag(Level lvl) {
    switch (lvl) {
    case Level::Error: return "error";
    case Level::Info: return "info";
    case Level::Debug: return "debug";
    }
    return "?";
}

} // namespace

Level level() { return static_cast<Level>(level_slot().load(std::memory_order_relaxed)); }

void set_level(Level lvl) { level_slot().store(static_cast<int>(lvl), std::memory_order_relaxed); }

bool enabled(Level lvl) { return static_cast<int>(lvl) <= static_cast<int>(level()); }

void write(Level lvl, const std::string& message) {
    std::lock_guard<std::mutex> lock(write_mutex());
    std::cerr << "[graphfi:" << tag(lvl) << "] " << message << '\n';
}

} // namespace graphfi::log
