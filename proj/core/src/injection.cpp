// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/injection.hpp"

#include "graphfi/errors.hpp"
#include "graphfi/log.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <sstream>

namespace graphfi {

namespace {

using nlohmann::json;

ScalarValue element_value(const Tensor& t, int64_t i) {
    switch (t.dtype()) {
    case DType::F32: return static_cast<double>(t.as<float>()[static_cast<size_t>(i)]);
    case DType::F64: return t.as<double>()[static_cast<size_t>(i)];
    case DType::I64: return t.as<int64_t>()[static_cast<size_t>(i)];
    case DType::Bool: return t.as<uint8_t>()[static_cast<size_t>(i)] != 0;
    }
    return 0.0;
}

std::vector<ScalarValue> all_values(const Tensor& t) {
    std::vector<ScalarValue> out;
    out.reserve(static_cast<size_t>(t.element_count()));
    for (int64_t i = 0; i < t.element_count(); ++i) {
        out.push_back(element_value(t, i));
    }
    return out;
}

json scalar_to_json(const ScalarValue& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<int64_t>(&v)) return *i;
    return std::get<bool>(v);
}

ScalarValue scalar_from_json(const json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<int64_t>();
    return j.get<double>();
}

} // namespace

InstanceProfile profile_from_trace(const ExecutionTrace& trace) {
    InstanceProfile prof;
    prof.per_kind = count_instances(trace);
    for (const auto& [kind, count] : prof.per_kind) {
        prof.total += count;
    }
    return prof;
}

InstanceProfile profile(const Graph& g, const Feeds& feeds) {
    const ExecuteResult golden = execute(g, feeds);
    return profile_from_trace(golden.trace);
}

InjectionPlan plan(const FIConfig& cfg, const InstanceProfile& prof, RngStream& rng) {
    InjectionPlan p;
    p.mode = cfg.mode;
    switch (cfg.mode) {
    case InjectMode::ErrorRate:
        for (const auto& [kind, count] : prof.per_kind) {
            p.error_rates[kind] = effective_probability(cfg, kind);
        }
        break;

    case InjectMode::DynamicInstance:
        if (prof.total < 1) {
            throw ContractError("dynamicInstance mode needs at least one injectable instance");
        }
        for (const auto& [kind, count] : prof.per_kind) {
            p.chosen_instance[kind] =
                static_cast<int64_t>(rng.uniform_index(static_cast<uint64_t>(count)));
        }
        break;

    case InjectMode::OneFaultPerRun: {
        if (prof.total < 1) {
            throw ContractError("oneFaultPerRun mode needs at least one injectable instance");
        }
        int64_t r = static_cast<int64_t>(rng.uniform_index(static_cast<uint64_t>(prof.total)));
        for (const auto& [kind, count] : prof.per_kind) { // ordered map: deterministic walk
            if (r < count) {
                p.single_kind = kind;
                p.single_instance = r;
                break;
            }
            r -= count;
        }
        break;
    }
    }
    return p;
}

bool should_inject(InjectionState& state, const InjectionPlan& plan, const FIConfig& cfg,
                   const Node& node, int64_t instance_index, RngStream& rng) {
    const int64_t invocation = state.invocations[node.id]++;
    if (invocation < cfg.skip_count) {
        return false;
    }
    switch (plan.mode) {
    case InjectMode::ErrorRate: {
        auto it = plan.error_rates.find(node.kind);
        const double p = it == plan.error_rates.end() ? 0.0 : it->second;
        return rng.bernoulli(p);
    }
    case InjectMode::DynamicInstance: {
        auto it = plan.chosen_instance.find(node.kind);
        return it != plan.chosen_instance.end() && it->second == instance_index;
    }
    case InjectMode::OneFaultPerRun:
        return state.faults_applied == 0 && plan.single_kind == node.kind &&
               plan.single_instance == instance_index;
    }
    return false;
}

std::pair<Tensor, std::optional<FaultRecord>> apply_fault(const Tensor& t, const FIConfig& cfg,
                                                          RngStream& rng) {
    const FaultType fault = fault_type_for(cfg, t);
    if (fault == FaultType::None) {
        return {t, std::nullopt};
    }
    if (t.element_count() == 0) {
        log::debug("apply_fault: empty tensor, nothing to corrupt");
        return {t, std::nullopt};
    }

    FaultRecord rec;
    rec.fault = fault;

    switch (fault) {
    case FaultType::Zero: {
        Tensor out = zero_like(t);
        rec.original = all_values(t);
        rec.corrupted = all_values(out);
        return {std::move(out), std::move(rec)};
    }
    case FaultType::Rand: {
        Tensor out = rand_like(t, rng);
        rec.original = all_values(t);
        rec.corrupted = all_values(out);
        return {std::move(out), std::move(rec)};
    }
    case FaultType::RandElement: {
        const int64_t elem =
            static_cast<int64_t>(rng.uniform_index(static_cast<uint64_t>(t.element_count())));
        Tensor out = rand_element(t, elem, rng);
        rec.element = elem;
        rec.original = {element_value(t, elem)};
        rec.corrupted = {element_value(out, elem)};
        return {std::move(out), std::move(rec)};
    }
    case FaultType::BitFlipElement: {
        const int64_t elem =
            static_cast<int64_t>(rng.uniform_index(static_cast<uint64_t>(t.element_count())));
        const uint32_t bit =
            static_cast<uint32_t>(rng.uniform_index(dtype_bit_width(t.dtype())));
        Tensor out = bit_flip_element(t, elem, bit);
        rec.element = elem;
        rec.bits = {bit};
        rec.original = {element_value(t, elem)};
        rec.corrupted = {element_value(out, elem)};
        return {std::move(out), std::move(rec)};
    }
    case FaultType::BitFlipTensor: {
        auto [out, bits] = bit_flip_all(t, rng);
        rec.bits = std::move(bits);
        rec.original = all_values(t);
        rec.corrupted = all_values(out);
        return {std::move(out), std::move(rec)};
    }
    case FaultType::None:
        break;
    }
    return {t, std::nullopt};
}

Injector::Injector(const Graph& g, FIConfig cfg) : graph_(g), cfg_(std::move(cfg)) {}

const InstanceProfile& Injector::ensure_profile(const Feeds& feeds) {
    if (!profile_) {
        profile_ = profile(graph_, feeds);
        log::debug("injector: profiled ", profile_->total, " injectable instances");
    }
    return *profile_;
}

void Injector::set_profile(InstanceProfile prof) { profile_ = std::move(prof); }

const InstanceProfile* Injector::cached_profile() const {
    return profile_ ? &*profile_ : nullptr;
}

InstrumentedRun Injector::run(const Feeds& feeds, RngStream& rng) const {
    if (!profile_) {
        throw ContractError("Injector::run called before the instance profile was computed");
    }
    const InjectionPlan p = plan(cfg_, *profile_, rng);

    InjectionState state;
    std::vector<FaultRecord> records;

    const Interceptor interceptor = [&](const Node& node,
                                        const Tensor& output) -> std::optional<Tensor> {
        const int64_t instance = state.next_instance[node.kind]++;
        if (!should_inject(state, p, cfg_, node, instance, rng)) {
            return std::nullopt;
        }
        auto [corrupted, rec] = apply_fault(output, cfg_, rng);
        if (!rec) {
            return std::nullopt; // FaultType None (or empty output)
        }
        rec->node_id = node.id;
        rec->kind = node.kind;
        rec->instance_index = instance;
        records.push_back(std::move(*rec));
        ++state.faults_applied;
        return std::move(corrupted);
    };

    ExecuteResult result = execute(graph_, feeds, interceptor);
    return {std::move(result.outputs), std::move(records), std::move(result.trace)};
}

InstrumentedRun instrumented_execute(const Graph& g, const Feeds& feeds, const FIConfig& cfg,
                                     RngStream& rng) {
    Injector injector(g, cfg);
    injector.ensure_profile(feeds);
    return injector.run(feeds, rng);
}

namespace {

// Bit-pattern compare for doubles so NaN originals replay cleanly.
bool scalar_equal(const ScalarValue& a, const ScalarValue& b) {
    if (a.index() != b.index()) return false;
    if (const auto* d = std::get_if<double>(&a)) {
        return std::bit_cast<uint64_t>(*d) == std::bit_cast<uint64_t>(std::get<double>(b));
    }
    return a == b;
}

void check_original(const FaultRecord& rec, const Tensor& t, int64_t i, const ScalarValue& want) {
    const ScalarValue have = element_value(t, i);
    if (!scalar_equal(have, want)) {
        throw ContractError("replay: node '" + rec.node_id + "' element " + std::to_string(i) +
                            " does not match the recorded original value");
    }
}

Tensor write_value(Tensor t, int64_t i, const ScalarValue& v) {
    switch (t.dtype()) {
    case DType::F32: t.as<float>()[static_cast<size_t>(i)] = static_cast<float>(std::get<double>(v)); break;
    case DType::F64: t.as<double>()[static_cast<size_t>(i)] = std::get<double>(v); break;
    case DType::I64: t.as<int64_t>()[static_cast<size_t>(i)] = std::get<int64_t>(v); break;
    case DType::Bool: t.as<uint8_t>()[static_cast<size_t>(i)] = std::get<bool>(v) ? 1 : 0; break;
    }
    return t;
}

Tensor apply_recorded(const FaultRecord& rec, const Tensor& t) {
    switch (rec.fault) {
    case FaultType::None:
        return t;
    case FaultType::Zero:
        return zero_like(t);
    case FaultType::Rand: {
        Tensor out = t;
        for (int64_t i = 0; i < t.element_count(); ++i) {
            check_original(rec, t, i, rec.original[static_cast<size_t>(i)]);
            out = write_value(std::move(out), i, rec.corrupted[static_cast<size_t>(i)]);
        }
        return out;
    }
    case FaultType::RandElement: {
        check_original(rec, t, *rec.element, rec.original.at(0));
        return write_value(t, *rec.element, rec.corrupted.at(0));
    }
    case FaultType::BitFlipElement:
        check_original(rec, t, *rec.element, rec.original.at(0));
        return bit_flip_element(t, *rec.element, rec.bits.at(0));
    case FaultType::BitFlipTensor: {
        if (static_cast<int64_t>(rec.bits.size()) != t.element_count()) {
            throw ContractError("replay: bit list length does not match tensor size");
        }
        auto [out, bits] =
            bit_flip_all(t, [&rec](int64_t i) { return rec.bits[static_cast<size_t>(i)]; });
        return std::move(out);
    }
    }
    return t;
}

} // namespace

InstrumentedRun replay(const Graph& g, const Feeds& feeds,
                       const std::vector<FaultRecord>& records) {
    std::map<std::string, std::vector<const FaultRecord*>> by_node;
    for (const FaultRecord& rec : records) {
        by_node[rec.node_id].push_back(&rec);
    }

    std::vector<FaultRecord> replayed;
    const Interceptor interceptor = [&](const Node& node,
                                        const Tensor& output) -> std::optional<Tensor> {
        auto it = by_node.find(node.id);
        if (it == by_node.end() || it->second.empty()) {
            return std::nullopt;
        }
        const FaultRecord* rec = it->second.front();
        it->second.erase(it->second.begin());
        Tensor out = apply_recorded(*rec, output);
        replayed.push_back(*rec);
        return out;
    };

    ExecuteResult result = execute(g, feeds, interceptor);
    if (replayed.size() != records.size()) {
        throw ContractError("replay: not every recorded fault site was reached");
    }
    return {std::move(result.outputs), std::move(replayed), std::move(result.trace)};
}

std::string fault_record_to_json(const FaultRecord& rec) {
    json j;
    j["node"] = rec.node_id;
    j["op"] = op_kind_name(rec.kind);
    j["instance"] = rec.instance_index;
    j["fault"] = fault_type_name(rec.fault);
    if (rec.element) {
        j["element"] = *rec.element;
    }
    if (!rec.bits.empty()) {
        j["bits"] = rec.bits;
    }
    json orig = json::array();
    for (const auto& v : rec.original) orig.push_back(scalar_to_json(v));
    json corr = json::array();
    for (const auto& v : rec.corrupted) corr.push_back(scalar_to_json(v));
    j["original"] = std::move(orig);
    j["corrupted"] = std::move(corr);
    return j.dump();
}

FaultRecord fault_record_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("fault record: ") + e.what());
    }
    FaultRecord rec;
    rec.node_id = j.at("node").get<std::string>();
    const std::string op = j.at("op").get<std::string>();
    const auto kind = op_kind_from_name(op);
    if (!kind) {
        throw ParseError("fault record: unknown op '" + op + "'");
    }
    rec.kind = *kind;
    rec.instance_index = j.at("instance").get<int64_t>();
    const std::string fault = j.at("fault").get<std::string>();
    const auto ft = fault_type_from_name(fault);
    if (!ft) {
        throw ParseError("fault record: unknown fault type '" + fault + "'");
    }
    rec.fault = *ft;
    if (j.contains("element")) {
        rec.element = j["element"].get<int64_t>();
    }
    if (j.contains("bits")) {
        rec.bits = j["bits"].get<std::vector<uint32_t>>();
    }
    for (const auto& v : j.value("original", json::array())) {
        rec.original.push_back(scalar_from_json(v));
    }
    for (const auto& v : j.value("corrupted", json::array())) {
        rec.corrupted.push_back(scalar_from_json(v));
    }
    return rec;
}

} // namespace graphfi
