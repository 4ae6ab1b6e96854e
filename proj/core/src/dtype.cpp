// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/dtype.hpp"

namespace graphfi {

const char* dtype_name(DType d) {
    switch (d) {
    case DType::F32: return "F32";
    case DType::F64: return "F64";
    case DType::I64: return "I64";
    case DType::Bool: return "Bool";
    }
    return "?";
}

std::optional<DType> dtype_from_name(std::string_view name) {
    if (name == "F32") return DType::F32;
    if (name == "F64") return DType::F64;
    if (name == "I64") return DType::I64;
    if (name == "Bool") return DType::Bool;
    return std::nullopt;
}

} // namespace graphfi
