// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace graphfi {

/// Deterministic random stream. All randomness in the library flows through
/// explicitly passed RngStream objects; there is no global RNG state.
///
/// The engine is std::mt19937_64, which the standard pins bit-for-bit, and
/// the uniform helpers below avoid std::uniform_*_distribution on purpose:
/// their output is implementation-defined, and campaign results must be
/// reproducible across platforms and standard libraries.
class RngStream {
public:
    explicit RngStream(uint64_t seed) {
        std::seed_seq seq{
            static_cast<uint32_t>(seed),
            static_cast<uint32_t>(seed >> 32),
        };
        engine_.seed(seq);
    }

    /// Substream for one fault-injection run: derived from (root seed, run
    /// index) so parallel campaigns are schedule-independent.
    static RngStream for_run(uint64_t root_seed, uint64_t run_index) {
        return RngStream(root_seed, run_index);
    }

    uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [0,1) with 24 random bits.
    float uniform_float() {
        return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f;
    }

    /// Uniform integer on [0,n); unbiased via rejection. n must be > 0.
    uint64_t uniform_index(uint64_t n);

    /// True with probability p. p=0 never fires, p=1 always fires.
    bool bernoulli(double p) { return uniform_double() < p; }

private:
    RngStream(uint64_t root_seed, uint64_t run_index) {
        std::seed_seq seq{
            static_cast<uint32_t>(root_seed),
            static_cast<uint32_t>(root_seed >> 32),
            static_cast<uint32_t>(run_index),
            static_cast<uint32_t>(run_index >> 32),
        };
        engine_.seed(seq);
    }

    std::mt19937_64 engine_;
};

} // namespace graphfi
