// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/errors.hpp"
#include "graphfi/graph.hpp"

#include <string>

namespace graphfi::detail {

inline int64_t req_int(const Node& n, const std::string& key) {
    auto it = n.attrs.find(key);
    const int64_t* v = it == n.attrs.end() ? nullptr : std::get_if<int64_t>(&it->second);
    if (!v) {
        throw ValidationError("node '" + n.id + "' is missing integer attribute '" + key + "'");
    }
    return *v;
}

inline const std::vector<int64_t>& req_ints(const Node& n, const std::string& key) {
    auto it = n.attrs.find(key);
    const auto* v =
        it == n.attrs.end() ? nullptr : std::get_if<std::vector<int64_t>>(&it->second);
    if (!v) {
        throw ValidationError("node '" + n.id + "' is missing integer-list attribute '" + key +
                              "'");
    }
    return *v;
}

inline const std::string& req_str(const Node& n, const std::string& key) {
    auto it = n.attrs.find(key);
    const auto* v = it == n.attrs.end() ? nullptr : std::get_if<std::string>(&it->second);
    if (!v) {
        throw ValidationError("node '" + n.id + "' is missing string attribute '" + key + "'");
    }
    return *v;
}

} // namespace graphfi::detail
