// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/config.hpp"

#include "graphfi/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace graphfi {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

struct FaultTypeName {
    FaultType type;
    const char* name;
};

// Canonical spellings; matching is case-insensitive because the source
// material itself varies capitalization (bitFlip-element vs bitflip-Element).
constexpr FaultTypeName kFaultTypeNames[] = {
    {FaultType::None, "None"},
    {FaultType::Zero, "Zero"},
    {FaultType::Rand, "Rand"},
    {FaultType::RandElement, "Rand-element"},
    {FaultType::BitFlipElement, "bitFlip-element"},
    {FaultType::BitFlipTensor, "bitFlip-tensor"},
};

struct InjectModeName {
    InjectMode mode;
    const char* name;
};

constexpr InjectModeName kInjectModeNames[] = {
    {InjectMode::ErrorRate, "errorRate"},
    {InjectMode::DynamicInstance, "dynamicInstance"},
    {InjectMode::OneFaultPerRun, "oneFaultPerRun"},
};

} // namespace

const char* fault_type_name(FaultType t) {
    for (const auto& e : kFaultTypeNames) {
        if (e.type == t) return e.name;
    }
    return "?";
}

const char* inject_mode_name(InjectMode m) {
    for (const auto& e : kInjectModeNames) {
        if (e.mode == m) return e.name;
    }
    return "?";
}

std::optional<FaultType> fault_type_from_name(std::string_view name) {
    const std::string needle = lower(name);
    for (const auto& e : kFaultTypeNames) {
        if (needle == lower(e.name)) return e.type;
    }
    return std::nullopt;
}

std::optional<InjectMode> inject_mode_from_name(std::string_view name) {
    const std::string needle = lower(name);
    for (const auto& e : kInjectModeNames) {
        if (needle == lower(e.name)) return e.mode;
    }
    return std::nullopt;
}

namespace {

std::optional<OpKind> op_kind_from_selector(const std::string& sel) {
    const std::string needle = lower(sel);
    for (int i = 0; i < kOpKindCount; ++i) {
        const OpKind kind = static_cast<OpKind>(i);
        if (needle == lower(op_kind_name(kind))) return kind;
    }
    return std::nullopt;
}

[[noreturn]] void bail(const std::string& msg) { throw ParseError("config: " + msg); }

double parse_probability(const std::string& sel, const YAML::Node& node) {
    double p = 0.0;
    try {
        p = node.as<double>();
    } catch (const YAML::Exception&) {
        bail("Ops entry '" + sel + "' has a non-numeric probability");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << "Ops entry '" << sel << "' probability " << p << " outside [0,1]";
        bail(os.str());
    }
    return p;
}

OpProbability parse_ops_entry(const YAML::Node& item) {
    // Two accepted forms: the scalar "NAME = prob" and the map {NAME: prob}.
    if (item.IsScalar()) {
        const std::string raw = item.as<std::string>();
        const auto eq = raw.find('=');
        if (eq == std::string::npos) {
            bail("Ops entry '" + raw + "' is not of the form 'Name = probability'");
        }
        const std::string sel = trim(raw.substr(0, eq));
        const std::string prob = trim(raw.substr(eq + 1));
        if (sel.empty() || prob.empty()) {
            bail("Ops entry '" + raw + "' is not of the form 'Name = probability'");
        }
        return {sel, parse_probability(sel, YAML::Load(prob))};
    }
    if (item.IsMap() && item.size() == 1) {
        const auto it = item.begin();
        const std::string sel = it->first.as<std::string>();
        return {sel, parse_probability(sel, it->second)};
    }
    bail("Ops entries must be 'Name = probability' strings or single-key maps");
}

} // namespace

ParsedConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw ParseError(std::string("config: YAML parse error at line ") +
                         std::to_string(e.mark.line + 1) + ", column " +
                         std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    if (root.IsNull() || !root.IsDefined()) {
        bail("InjectMode is missing (empty document)");
    }
    if (!root.IsMap()) {
        bail("top level must be a mapping of configuration keys");
    }

    const std::set<std::string> known = {"Seed",       "ScalarFaultType", "TensorFaultType",
                                         "InjectMode", "Ops",             "SkipCount"};
    for (const auto& kv : root) {
        const std::string key = kv.first.as<std::string>();
        if (!known.count(key)) {
            bail("unknown key '" + key +
                 "' (expected Seed, ScalarFaultType, TensorFaultType, InjectMode, Ops, SkipCount)");
        }
    }

    ParsedConfig out;
    FIConfig& cfg = out.config;

    if (root["Seed"]) {
        int64_t seed = 0;
        try {
            seed = root["Seed"].as<int64_t>();
        } catch (const YAML::Exception&) {
            bail("Seed must be an integer");
        }
        if (seed < 0) {
            bail("Seed must be non-negative");
        }
        cfg.seed = static_cast<uint64_t>(seed);
    }

    auto parse_fault = [&](const char* key, FaultType& slot) {
        if (!root[key]) return; // defaults to None
        const std::string name = root[key].as<std::string>();
        const auto t = fault_type_from_name(name);
        if (!t) {
            bail(std::string(key) + " '" + name +
                 "' is not one of None, Zero, Rand, Rand-element, bitFlip-element, "
                 "bitFlip-tensor");
        }
        slot = *t;
    };
    parse_fault("ScalarFaultType", cfg.scalar_fault_type);
    parse_fault("TensorFaultType", cfg.tensor_fault_type);

    if (!root["InjectMode"]) {
        bail("InjectMode is missing");
    }
    {
        const std::string name = root["InjectMode"].as<std::string>();
        const auto m = inject_mode_from_name(name);
        if (!m) {
            bail("InjectMode '" + name +
                 "' is not one of errorRate, dynamicInstance, oneFaultPerRun");
        }
        cfg.mode = *m;
    }

    if (root["Ops"]) {
        const YAML::Node ops = root["Ops"];
        if (!ops.IsSequence()) {
            bail("Ops must be a sequence of 'Name = probability' entries");
        }
        std::set<std::string> seen;
        bool has_all = false;
        bool has_specific = false;
        for (const auto& item : ops) {
            OpProbability entry = parse_ops_entry(item);
            if (lower(entry.selector) == "all") {
                entry.selector = "ALL";
                has_all = true;
            } else {
                const auto kind = op_kind_from_selector(entry.selector);
                if (!kind) {
                    bail("Ops selector '" + entry.selector +
                         "' is neither ALL nor a known operator name");
                }
                entry.selector = op_kind_name(*kind);
                has_specific = true;
            }
            if (!seen.insert(entry.selector).second) {
                bail("duplicate Ops selector '" + entry.selector + "'");
            }
            cfg.ops.push_back(std::move(entry));
        }
        if (has_all && has_specific) {
            bail("Ops may not combine ALL with per-operator entries");
        }
    }

    if (root["SkipCount"]) {
        int64_t skip = 0;
        try {
            skip = root["SkipCount"].as<int64_t>();
        } catch (const YAML::Exception&) {
            bail("SkipCount must be an integer");
        }
        if (skip < 0) {
            bail("SkipCount must be non-negative");
        }
        cfg.skip_count = skip;
    }

    if (cfg.mode != InjectMode::ErrorRate && !cfg.ops.empty()) {
        out.warnings.push_back(std::string("Ops probabilities are ignored in mode ") +
                               inject_mode_name(cfg.mode));
    }
    if (cfg.mode == InjectMode::ErrorRate && cfg.ops.empty()) {
        out.warnings.push_back("ErrorRate mode with no Ops entries never injects");
    }

    return out;
}

std::string to_yaml(const FIConfig& cfg) {
    std::ostringstream os;
    if (cfg.seed) {
        os << "Seed: " << *cfg.seed << "\n";
    }
    os << "ScalarFaultType: " << fault_type_name(cfg.scalar_fault_type) << "\n";
    os << "TensorFaultType: " << fault_type_name(cfg.tensor_fault_type) << "\n";
    os << "InjectMode: " << inject_mode_name(cfg.mode) << "\n";
    os << "Ops:";
    if (cfg.ops.empty()) {
        os << " []\n";
    } else {
        os << "\n";
        for (const auto& entry : cfg.ops) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", entry.probability);
            os << "  - " << entry.selector << " = " << buf << "\n";
        }
    }
    os << "SkipCount: " << cfg.skip_count << "\n";
    return os.str();
}

double effective_probability(const FIConfig& cfg, OpKind kind) {
    if (cfg.mode != InjectMode::ErrorRate) {
        throw ContractError("effective_probability is only meaningful in errorRate mode");
    }
    double all = 0.0;
    bool has_all = false;
    for (const auto& entry : cfg.ops) {
        if (entry.selector == "ALL") {
            all = entry.probability;
            has_all = true;
        } else if (entry.selector == op_kind_name(kind)) {
            return entry.probability;
        }
    }
    return has_all ? all : 0.0;
}

} // namespace graphfi
