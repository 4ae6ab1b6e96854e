// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/rng.hpp"

#include "graphfi/errors.hpp"

#include <limits>

namespace graphfi {

uint64_t RngStream::uniform_index(uint64_t n) {
    if (n == 0) {
        throw BoundsError("uniform_index: n must be > 0");
    }
    // Rejection sampling over the top of the u64 range keeps the draw unbiased.
    const uint64_t max = std::numeric_limits<uint64_t>::max();
    uint64_t x = 0;
    uint64_t r = 0;
    do {
        x = next_u64();
        r = x % n;
    } while (x - r > max - (n - 1));
    return r;
}

} // namespace graphfi
