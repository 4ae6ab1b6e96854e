// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graphfi {

/// The six supported fault types.
enum class FaultType : uint8_t {
    None,           // do not corrupt
    Zero,           // all elements zeroed
    Rand,           // every element replaced by a uniform [0,1) value
    RandElement,    // one element replaced by a uniform [0,1) value
    BitFlipElement, // single bit flip in one element
    BitFlipTensor,  // single bit flip in every element
};

/// The three injection modes.
enum class InjectMode : uint8_t {
    ErrorRate,       // per-invocation Bernoulli with per-operator probability
    DynamicInstance, // one random instance of each operator kind
    OneFaultPerRun,  // one random instance over all operators
};

const char* fault_type_name(FaultType t);
const char* inject_mode_name(InjectMode m);
std::optional<FaultType> fault_type_from_name(std::string_view name);
std::optional<InjectMode> inject_mode_from_name(std::string_view name);

/// One Ops entry: an operator kind or "ALL", with its injection probability.
struct OpProbability {
    std::string selector; // canonical OpKind name, or "ALL"
    double probability = 0.0;

    bool operator==(const OpProbability&) const = default;
};

/// Parsed campaign configuration.
struct FIConfig {
    std::optional<uint64_t> seed;
    FaultType scalar_fault_type = FaultType::None; // rank-0 outputs
    FaultType tensor_fault_type = FaultType::None; // rank >= 1 outputs
    InjectMode mode = InjectMode::ErrorRate;
    std::vector<OpProbability> ops;
    int64_t skip_count = 0; // skip the first n invocations of each operator node

    bool operator==(const FIConfig&) const = default;
};

struct ParsedConfig {
    FIConfig config;
    std::vector<std::string> warnings;
};

/// Parses and fully validates a YAML configuration document.
/// Recognized keys: Seed, ScalarFaultType, TensorFaultType, InjectMode, Ops,
/// SkipCount. Fault type and mode spellings are matched case-insensitively.
/// Throws ParseError on any problem; parsing is total — no partially valid
/// config is ever returned.
ParsedConfig parse_config(const std::string& yaml_text);

/// Canonical YAML serialization; parse_config(to_yaml(c)) == c.
std::string to_yaml(const FIConfig& cfg);

/// Injection probability for an op kind under ErrorRate mode: the per-op
/// entry if present, else the ALL entry, else 0. Calling this in any other
/// mode is a contract violation.
double effective_probability(const FIConfig& cfg, OpKind kind);

/// Pick the fault type for an output tensor: rank-0 uses the scalar type,
/// anything else the tensor type.
inline FaultType fault_type_for(const FIConfig& cfg, const Tensor& t) {
    return t.rank() == 0 ? cfg.scalar_fault_type : cfg.tensor_fault_type;
}

} // namespace graphfi
