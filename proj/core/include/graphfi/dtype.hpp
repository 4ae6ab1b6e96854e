// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace graphfi {

enum class DType : uint8_t {
    F32 = 0,
    F64 = 1,
    I64 = 2,
    Bool = 3, // one logical bit, stored as one byte (0 or 1)
};

constexpr int64_t dtype_size(DType d) {
    switch (d) {
    case DType::F32: return 4;
    case DType::F64: return 8;
    case DType::I64: return 8;
    case DType::Bool: return 1;
    }
    return 0;
}

constexpr uint32_t dtype_bit_width(DType d) {
    switch (d) {
    case DType::F32: return 32;
    case DType::F64: return 64;
    case DType::I64: return 64;
    case DType::Bool: return 1;
    }
    return 0;
}

constexpr bool dtype_is_float(DType d) {
    return d == DType::F32 || d == DType::F64;
}

const char* dtype_name(DType d);
std::optional<DType> dtype_from_name(std::string_view name);

} // namespace graphfi
