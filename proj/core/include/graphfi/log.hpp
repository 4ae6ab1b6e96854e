// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sstream>
#include <string>

namespace graphfi::log {

enum class Level : int {
    Error = 0,
    Info = 1,
    Debug = 2,
};

/// Current level; initialized once from GRAPHFI_LOG_LEVEL (error|info|debug),
/// defaulting to info.
Level level();
void set_level(Level lvl);
bool enabled(Level lvl);

void write(Level lvl, const std::string& message);

template <typename... Args> void error(Args&&... args) {
    if (enabled(Level::Error)) {
        std::ostringstream os;
        (os << ... << args);
        write(Level::Error, os.str());
    }
}

template <typename... Args> void info(Args&&... args) {
    if (enabled(Level::Info)) {
        std::ostringstream os;
        (os << ... << args);
        write(Level::Info, os.str());
    }
}

template <typename... Args> void debug(Args&&... args) {
    if (enabled(Level::Debug)) {
        std::ostringstream os;
        (os << ... << args);
        write(Level::Debug, os.str());
    }
}

} // namespace graphfi::log
