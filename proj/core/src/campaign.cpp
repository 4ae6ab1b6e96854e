// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/campaign.hpp"

#include "graphfi/errors.hpp"
#include "graphfi/log.hpp"
#include "graphfi/model_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <thread>

namespace graphfi {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

const char* outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Benign: return "Benign";
    case Outcome::SDC: return "SDC";
    case Outcome::Crash: return "Crash";
    }
    return "?";
}

namespace {

// Predicted labels of a classifier output: integer tensors are labels
// already; float tensors are reduced by argmax along the last axis
// (lowest index wins, NaN never beats a number).
Tensor extract_labels(const Tensor& t) {
    if (t.dtype() == DType::I64 || t.dtype() == DType::Bool) {
        return t;
    }
    if (t.rank() == 0) {
        throw ContractError("ClassMismatch criterion needs labels or rank>=1 logits");
    }
    Node n;
    n.id = "<argmax>";
    n.kind = OpKind::ArgMax;
    n.attrs.emplace("axis", t.rank() - 1);
    return eval_node(n, {&t});
}

double max_abs_deviation(const Tensor& golden, const Tensor& faulty) {
    double dev = 0.0;
    for (int64_t i = 0; i < golden.element_count(); ++i) {
        const double g = golden.element_as_double(i);
        const double f = faulty.element_as_double(i);
        const double d = std::fabs(f - g);
        if (std::isnan(d)) {
            // Non-finite disagreement counts as an unbounded deviation.
            if (golden.element_bits(i) != faulty.element_bits(i)) {
                return std::numeric_limits<double>::infinity();
            }
            continue; // bit-identical NaN
        }
        dev = std::max(dev, d);
    }
    return dev;
}

} // namespace

OutputSummary summarize_output(const std::vector<Tensor>& outputs) {
    OutputSummary s;
    if (outputs.empty() || outputs[0].element_count() == 0) {
        return s;
    }
    const Tensor& first = outputs[0];
    if (first.dtype() == DType::I64) {
        s.kind = OutputSummary::Kind::Label;
        s.label = first.as<int64_t>()[0];
    } else {
        s.kind = OutputSummary::Kind::Value;
        s.value = first.element_as_double(0);
    }
    return s;
}

Outcome classify(const std::vector<Tensor>& golden, const std::vector<Tensor>& faulty,
                 const SDCCriterion& criterion) {
    if (golden.empty() || faulty.empty()) {
        throw ContractError("classify: outputs must not be empty");
    }
    const Tensor& g = golden[0];
    const Tensor& f = faulty[0];
    if (g.dtype() != f.dtype() || g.shape() != f.shape()) {
        throw ContractError("classify: golden and faulty outputs have different dtype/shape");
    }
    if (g.bit_identical(f)) {
        return Outcome::Benign; // identical output is benign under every criterion
    }
    switch (criterion.kind) {
    case SDCCriterion::Kind::ClassMismatch:
        return extract_labels(g).bit_identical(extract_labels(f)) ? Outcome::Benign : Outcome::SDC;
    case SDCCriterion::Kind::RegressionThreshold:
        if (!(criterion.threshold > 0.0)) {
            throw ContractError("RegressionThreshold criterion requires threshold > 0");
        }
        return max_abs_deviation(g, f) > criterion.threshold ? Outcome::SDC : Outcome::Benign;
    }
    return Outcome::Benign;
}

double FIStat::sdc_rate() const {
    const int64_t n = completed();
    return n > 0 ? static_cast<double>(sdc) / static_cast<double>(n) : 0.0;
}

double wald_ci95_half_width(double p_hat, int64_t n) {
    if (n <= 0) return 0.0;
    return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

double FIStat::ci95_half_width() const {
    return wald_ci95_half_width(sdc_rate(), completed());
}

FIStat collate(const std::vector<FIStat>& parts) {
    FIStat total;
    for (const FIStat& p : parts) {
        total.runs += p.runs;
        total.sdc += p.sdc;
        total.crash += p.crash;
    }
    return total;
}

std::string run_outcome_to_json(const RunOutcome& r, bool include_wall_time) {
    json j;
    j["run"] = r.run_index;
    j["input"] = r.input_index;
    j["outcome"] = outcome_name(r.outcome);
    switch (r.summary.kind) {
    case OutputSummary::Kind::Label: j["summary"] = {{"label", r.summary.label}}; break;
    case OutputSummary::Kind::Value: j["summary"] = {{"value", r.summary.value}}; break;
    case OutputSummary::Kind::None: j["summary"] = nullptr; break;
    }
    if (!r.error.empty()) {
        j["error"] = r.error;
    }
    json records = json::array();
    for (const FaultRecord& rec : r.records) {
        records.push_back(json::parse(fault_record_to_json(rec)));
    }
    j["records"] = std::move(records);
    if (include_wall_time) {
        j["wall_ms"] = r.wall_ms;
    }
    return j.dump();
}

CampaignResult run_campaign(const Graph& g, const FIConfig& cfg, const std::vector<Feeds>& inputs,
                            const CampaignOptions& options) {
    if (inputs.empty()) {
        throw ContractError("campaign needs at least one input");
    }
    if (options.injections_per_input < 1) {
        throw ContractError("injections per input must be >= 1");
    }
    if (options.workers < 1) {
        throw ContractError("worker count must be >= 1");
    }

    CampaignResult result;
    result.resolved_seed = options.seed;

    // Golden runs, cached per input; the instance profile falls out of the
    // trace for free and must agree across inputs (static graph, no
    // data-dependent control flow).
    std::vector<std::vector<Tensor>> golden(inputs.size());
    for (size_t i = 0; i < inputs.size(); ++i) {
        ExecuteResult res = execute(g, inputs[i]);
        ++result.golden_executions;
        const InstanceProfile prof = profile_from_trace(res.trace);
        if (i == 0) {
            result.profile = prof;
        } else if (!(prof == result.profile)) {
            throw ContractError("instance profile differs across inputs");
        }
        golden[i] = std::move(res.outputs);
    }

    Injector injector(g, cfg);
    injector.set_profile(result.profile);

    const int64_t total = static_cast<int64_t>(inputs.size()) * options.injections_per_input;
    result.outcomes.resize(static_cast<size_t>(total));

    std::atomic<int64_t> next{0};
    auto worker_body = [&]() {
        for (;;) {
            const int64_t r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= total) return;
            const int64_t input_idx = r / options.injections_per_input;
            RunOutcome& out = result.outcomes[static_cast<size_t>(r)];
            out.run_index = r;
            out.input_index = input_idx;
            RngStream rng = RngStream::for_run(options.seed, static_cast<uint64_t>(r));
            const auto start = Clock::now();
            try {
                InstrumentedRun run = injector.run(inputs[static_cast<size_t>(input_idx)], rng);
                out.outcome =
                    classify(golden[static_cast<size_t>(input_idx)], run.outputs, options.criterion);
                out.summary = summarize_output(run.outputs);
                out.records = std::move(run.records);
            } catch (const std::exception& e) {
                out.outcome = Outcome::Crash;
                out.error = e.what();
            }
            out.wall_ms = seconds_since(start) * 1e3;
        }
    };

    if (options.workers == 1) {
        worker_body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(options.workers));
        for (int64_t w = 0; w < options.workers; ++w) {
            pool.emplace_back(worker_body);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    result.stat.runs = total;
    for (const RunOutcome& out : result.outcomes) {
        if (out.outcome == Outcome::SDC) ++result.stat.sdc;
        if (out.outcome == Outcome::Crash) ++result.stat.crash;
    }
    return result;
}

CampaignResult run_campaign(const CampaignSpec& spec) {
    if (spec.injections_per_input < 1) {
        throw ContractError("injections per input must be >= 1");
    }
    if (spec.workers < 1) {
        throw ContractError("worker count must be >= 1");
    }
    if (spec.input_paths.empty()) {
        throw ContractError("campaign needs at least one input bundle");
    }

    const ParsedConfig parsed = parse_config([&] {
        std::ifstream in(spec.config_path);
        if (!in) {
            throw IoError("cannot open config '" + spec.config_path + "'");
        }
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    }());
    for (const std::string& w : parsed.warnings) {
        log::info("config: ", w);
    }

    const Graph g = load_model(spec.graph_path, spec.weights_path);
    std::vector<Feeds> inputs;
    inputs.reserve(spec.input_paths.size());
    for (const std::string& path : spec.input_paths) {
        inputs.push_back(load_feeds(path));
    }

    CampaignOptions options;
    options.injections_per_input = spec.injections_per_input;
    options.workers = spec.workers;
    options.criterion = spec.criterion;
    if (spec.seed_override) {
        options.seed = *spec.seed_override;
    } else if (parsed.config.seed) {
        options.seed = *parsed.config.seed;
    } else {
        options.seed = std::random_device{}();
        log::info("no seed configured; using entropy seed ", options.seed);
    }
    log::info("campaign: ", inputs.size(), " input(s) x ", spec.injections_per_input,
              " injection(s), seed ", options.seed, ", ", spec.workers, " worker(s)");

    CampaignResult result = run_campaign(g, parsed.config, inputs, options);

    if (!spec.log_path.empty()) {
        std::ofstream log_out(spec.log_path, std::ios::trunc);
        if (!log_out) {
            throw IoError("cannot open run log '" + spec.log_path + "' for writing");
        }
        for (const RunOutcome& out : result.outcomes) {
            log_out << run_outcome_to_json(out) << '\n';
        }
        if (!log_out) {
            throw IoError("write failure on run log '" + spec.log_path + "'");
        }
    }
    return result;
}

OverheadReport run_overhead_bench(const Graph& g, const Feeds& feeds, int predictions,
                                  int repetitions, uint64_t seed) {
    if (predictions < 1 || repetitions < 1) {
        throw ContractError("bench needs predictions >= 1 and repetitions >= 1");
    }

    OverheadReport report;
    report.predictions = predictions;

    FIConfig disabled_cfg;
    disabled_cfg.mode = InjectMode::ErrorRate;
    disabled_cfg.ops = {{"ALL", 0.0}};
    disabled_cfg.scalar_fault_type = FaultType::BitFlipElement;
    disabled_cfg.tensor_fault_type = FaultType::BitFlipElement;
    Injector disabled(g, disabled_cfg);
    disabled.ensure_profile(feeds);

    FIConfig enabled_cfg;
    enabled_cfg.mode = InjectMode::OneFaultPerRun;
    enabled_cfg.scalar_fault_type = FaultType::BitFlipElement;
    enabled_cfg.tensor_fault_type = FaultType::BitFlipElement;
    Injector enabled(g, enabled_cfg);
    enabled.ensure_profile(feeds);

    auto timed = [&](auto&& run_once, int64_t& prediction_counter) {
        std::vector<double> times;
        times.reserve(static_cast<size_t>(repetitions));
        prediction_counter = 0;
        for (int rep = 0; rep < repetitions; ++rep) {
            const auto start = Clock::now();
            for (int i = 0; i < predictions; ++i) {
                if (run_once(rep, i)) {
                    ++prediction_counter;
                }
            }
            times.push_back(seconds_since(start));
        }
        std::sort(times.begin(), times.end());
        return times[times.size() / 2]; // median repetition
    };

    report.baseline_s = timed(
        [&](int, int) {
            const ExecuteResult res = execute(g, feeds);
            return !res.trace.entries.empty();
        },
        report.baseline_predictions);

    report.disabled_s = timed(
        [&](int rep, int i) {
            RngStream rng = RngStream::for_run(seed, static_cast<uint64_t>(rep * predictions + i));
            const InstrumentedRun run = disabled.run(feeds, rng);
            return !run.trace.entries.empty();
        },
        report.disabled_predictions);

    report.enabled_s = timed(
        [&](int rep, int i) {
            RngStream rng = RngStream::for_run(seed, static_cast<uint64_t>(rep * predictions + i));
            const InstrumentedRun run = enabled.run(feeds, rng);
            return !run.trace.entries.empty();
        },
        report.enabled_predictions);

    // Prediction counters cover all repetitions; report the per-phase count.
    report.baseline_predictions /= repetitions;
    report.disabled_predictions /= repetitions;
    report.enabled_predictions /= repetitions;

    report.instrumentation_overhead = (report.disabled_s - report.baseline_s) / report.baseline_s;
    report.injection_overhead = (report.enabled_s - report.disabled_s) / report.disabled_s;
    return report;
}

} // namespace graphfi
