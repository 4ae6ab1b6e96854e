// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/config.hpp"
#include "graphfi/injection.hpp"

#include <optional>
#include <string>
#include <vector>

namespace graphfi {

/// What counts as a Silent Data Corruption when a run's output is compared
/// against the golden run.
struct SDCCriterion {
    enum class Kind {
        ClassMismatch,       // any change of predicted label
        RegressionThreshold, // absolute deviation beyond `threshold`
    };
    Kind kind = Kind::ClassMismatch;
    double threshold = 0.0; // must be > 0 for RegressionThreshold
};

enum class Outcome : uint8_t { Benign, SDC, Crash };
const char* outcome_name(Outcome o);

/// Compact description of a run's first output (for logs).
struct OutputSummary {
    enum class Kind { None, Label, Value };
    Kind kind = Kind::None;
    int64_t label = 0;
    double value = 0.0;
};

OutputSummary summarize_output(const std::vector<Tensor>& outputs);

/// Benign/SDC decision for a completed (non-crashed) run.
Outcome classify(const std::vector<Tensor>& golden, const std::vector<Tensor>& faulty,
                 const SDCCriterion& criterion);

struct RunOutcome {
    int64_t run_index = 0;
    int64_t input_index = 0;
    Outcome outcome = Outcome::Benign;
    std::vector<FaultRecord> records;
    OutputSummary summary;
    std::string error; // Crash only
    double wall_ms = 0.0;
};

/// Serializes one RunOutcome as a single JSON line (the run-log format).
/// `include_wall_time=false` drops the only nondeterministic field.
std::string run_outcome_to_json(const RunOutcome& r, bool include_wall_time = true);

/// Aggregated campaign statistics. Crashed runs are excluded from the SDC
/// rate denominator and reported separately.
struct FIStat {
    int64_t runs = 0;
    int64_t sdc = 0;
    int64_t crash = 0;

    int64_t completed() const { return runs - crash; }
    double sdc_rate() const;
    /// 95% confidence half-width, normal (Wald) approximation:
    /// 1.96 * sqrt(p(1-p)/n). Zero-width at p in {0,1}; the reported
    /// interval is clamped to [0,1].
    double ci95_half_width() const;

    bool operator==(const FIStat&) const = default;
};

/// Pools statistics: counts are summed, rate and CI recomputed. Associative
/// and order-independent.
FIStat collate(const std::vector<FIStat>& parts);

double wald_ci95_half_width(double p_hat, int64_t n);

/// Campaign over in-memory model/config/inputs.
struct CampaignOptions {
    int64_t injections_per_input = 1;
    int64_t workers = 1;
    SDCCriterion criterion;
    uint64_t seed = 0;
};

struct CampaignResult {
    FIStat stat;
    std::vector<RunOutcome> outcomes; // indexed by run_index
    uint64_t resolved_seed = 0;
    int64_t golden_executions = 0; // observable golden-cache behavior
    InstanceProfile profile;
};

/// Runs injections_per_input x |inputs| fault-injection runs against cached
/// golden outputs. Run r uses the RNG substream (seed, r) and works on input
/// r / injections_per_input, so the result is identical for any worker
/// count; a run that throws is recorded as Crash and the campaign continues.
CampaignResult run_campaign(const Graph& g, const FIConfig& cfg, const std::vector<Feeds>& inputs,
                            const CampaignOptions& options);

/// File-level campaign specification (CLI surface).
struct CampaignSpec {
    std::string graph_path;
    std::string weights_path;
    std::string config_path;
    std::vector<std::string> input_paths;
    int64_t injections_per_input = 1;
    int64_t workers = 1;
    SDCCriterion criterion;
    std::string log_path; // empty: no log written
    std::optional<uint64_t> seed_override;
};

/// Loads everything, resolves the seed (override > config > entropy, the
/// resolved value is logged and returned), runs the campaign, writes the
/// run log.
CampaignResult run_campaign(const CampaignSpec& spec);

/// Timing comparison of the bare interpreter, the instrumented interpreter
/// with injections disabled, and the instrumented interpreter injecting one
/// bit flip per run. Each phase executes `predictions` predictions per
/// repetition; ratios use the median repetition.
struct OverheadReport {
    int predictions = 0;
    double baseline_s = 0.0;
    double disabled_s = 0.0;
    double enabled_s = 0.0;
    double instrumentation_overhead = 0.0; // (disabled - baseline) / baseline
    double injection_overhead = 0.0;       // (enabled - disabled) / disabled
    int64_t baseline_predictions = 0;      // verified via traces
    int64_t disabled_predictions = 0;
    int64_t enabled_predictions = 0;
};

OverheadReport run_overhead_bench(const Graph& g, const Feeds& feeds, int predictions = 50,
                                  int repetitions = 5, uint64_t seed = 1);

} // namespace graphfi
