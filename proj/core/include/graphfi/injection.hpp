// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/config.hpp"
#include "graphfi/graph.hpp"
#include "graphfi/rng.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace graphfi {

/// Dynamic instance counts of injectable operators, from a golden run.
struct InstanceProfile {
    std::map<OpKind, int64_t> per_kind;
    int64_t total = 0;

    bool operator==(const InstanceProfile&) const = default;
};

/// Counts injectable instances by executing the graph once (golden).
InstanceProfile profile(const Graph& g, const Feeds& feeds);
InstanceProfile profile_from_trace(const ExecutionTrace& trace);

/// Per-run decision of where faults may land, fixed before execution.
struct InjectionPlan {
    InjectMode mode = InjectMode::ErrorRate;
    /// ErrorRate: per-kind Bernoulli probabilities (selection happens at
    /// runtime, one draw per injectable invocation).
    std::map<OpKind, double> error_rates;
    /// DynamicInstance: the chosen instance index for each injectable kind.
    std::map<OpKind, int64_t> chosen_instance;
    /// OneFaultPerRun: the single chosen (kind, instance) target.
    OpKind single_kind = OpKind::Const;
    int64_t single_instance = -1;
};

/// Draws a plan for one run. Instance-based modes require profile.total >= 1.
InjectionPlan plan(const FIConfig& cfg, const InstanceProfile& prof, RngStream& rng);

/// One element value, exact for every dtype (F32 widens losslessly).
using ScalarValue = std::variant<double, int64_t, bool>;

/// Audit record of one corruption; carries enough to replay it exactly.
struct FaultRecord {
    std::string node_id;
    OpKind kind = OpKind::Const;
    int64_t instance_index = 0;
    FaultType fault = FaultType::None;
    std::optional<int64_t> element;  // element-granular faults
    std::vector<uint32_t> bits;      // bit flips: one entry, or one per element
    std::vector<ScalarValue> original;
    std::vector<ScalarValue> corrupted;
};

std::string fault_record_to_json(const FaultRecord& rec);
FaultRecord fault_record_from_json(const std::string& text);

/// Mutable per-run state: invocation counters for SkipCount, the
/// faults-applied counter, and per-kind instance counters. Reset at the
/// start of every run — faults are transient and never persist across runs.
struct InjectionState {
    std::map<std::string, int64_t> invocations;
    std::map<OpKind, int64_t> next_instance;
    int64_t faults_applied = 0;
};

/// Decides whether this invocation of `node` receives a fault. Counts the
/// invocation against the node's SkipCount counter as a side effect.
bool should_inject(InjectionState& state, const InjectionPlan& plan, const FIConfig& cfg,
                   const Node& node, int64_t instance_index, RngStream& rng);

/// Corrupts a freshly computed operator output according to the configured
/// fault type (rank-0 -> scalar type, otherwise tensor type). FaultType None
/// returns the input unchanged with no record. Throws UnsupportedDtypeError
/// when the fault type cannot apply to the tensor's dtype.
std::pair<Tensor, std::optional<FaultRecord>> apply_fault(const Tensor& t, const FIConfig& cfg,
                                                          RngStream& rng);

struct InstrumentedRun {
    std::vector<Tensor> outputs;
    std::vector<FaultRecord> records;
    ExecutionTrace trace;
};

/// Instrumented interpreter: one immutable graph plus an interception seam
/// selected per run. Phase 1 (profiling) happens once per (graph, feeds);
/// phase 2 (run) executes with the fault-decision interceptor installed.
/// With fault types None/None the output is bit-identical to the golden run.
class Injector {
public:
    Injector(const Graph& g, FIConfig cfg);

    /// Phase 1: profile instance counts via one golden run (cached).
    const InstanceProfile& ensure_profile(const Feeds& feeds);
    /// Adopt a profile already counted from a golden trace.
    void set_profile(InstanceProfile prof);
    const InstanceProfile* cached_profile() const;

    const FIConfig& config() const { return cfg_; }

    /// Phase 2: one fault-injection run. Requires a cached profile for the
    /// instance-based modes. Reentrant: all run state is local.
    InstrumentedRun run(const Feeds& feeds, RngStream& rng) const;

private:
    const Graph& graph_;
    FIConfig cfg_;
    std::optional<InstanceProfile> profile_;
};

/// Convenience wrapper: profile (cached inside) + one instrumented run.
InstrumentedRun instrumented_execute(const Graph& g, const Feeds& feeds, const FIConfig& cfg,
                                     RngStream& rng);

/// Re-executes with the recorded faults forced at their recorded sites;
/// reproduces the corrupted run bit-identically. Throws ContractError if a
/// record's original values do not match the freshly computed output.
InstrumentedRun replay(const Graph& g, const Feeds& feeds,
                       const std::vector<FaultRecord>& records);

} // namespace graphfi
