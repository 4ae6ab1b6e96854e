// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/graph.hpp"

#include "graphfi/log.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace graphfi {

namespace {

struct OpKindName {
    OpKind kind;
    const char* name;
};

constexpr OpKindName kOpKindNames[] = {
    {OpKind::Const, "Const"},       {OpKind::Placeholder, "Placeholder"},
    {OpKind::Add, "Add"},           {OpKind::Sub, "Sub"},
    {OpKind::Mul, "Mul"},           {OpKind::MatMul, "MatMul"},
    {OpKind::BiasAdd, "BiasAdd"},   {OpKind::Conv2D, "Conv2D"},
    {OpKind::MaxPool, "MaxPool"},   {OpKind::ReLU, "ReLU"},
    {OpKind::Sigmoid, "Sigmoid"},   {OpKind::Softmax, "Softmax"},
    {OpKind::Mean, "Mean"},         {OpKind::Reshape, "Reshape"},
    {OpKind::ArgMax, "ArgMax"},     {OpKind::Equal, "Equal"},
};

static_assert(sizeof(kOpKindNames) / sizeof(kOpKindNames[0]) == kOpKindCount);

} // namespace

const char* op_kind_name(OpKind kind) {
    for (const auto& e : kOpKindNames) {
        if (e.kind == kind) return e.name;
    }
    return "?";
}

std::optional<OpKind> op_kind_from_name(std::string_view name) {
    for (const auto& e : kOpKindNames) {
        if (name == e.name) return e.kind;
    }
    return std::nullopt;
}

Graph Graph::build_unchecked(GraphDef def, std::map<std::string, Tensor> constants) {
    Graph g;
    g.nodes_ = std::move(def.nodes);
    g.outputs_ = std::move(def.outputs);
    g.constants_ = std::move(constants);
    for (size_t i = 0; i < g.nodes_.size(); ++i) {
        // First declaration wins; validate() reports the duplicate.
        g.index_.emplace(g.nodes_[i].id, i);
    }

    // Stable Kahn topological sort, declaration order as tie-break, so the
    // interpreter's evaluation (and summation) order is fixed everywhere.
    std::vector<int64_t> pending(g.nodes_.size(), 0);
    std::vector<std::vector<size_t>> consumers(g.nodes_.size());
    bool resolvable = true;
    for (size_t i = 0; i < g.nodes_.size(); ++i) {
        for (const std::string& in : g.nodes_[i].inputs) {
            auto it = g.index_.find(in);
            if (it == g.index_.end()) {
                resolvable = false;
                continue;
            }
            ++pending[i];
            consumers[it->second].push_back(i);
        }
    }
    if (!resolvable) {
        return g; // dangling inputs; topo_order_ stays empty
    }
    std::deque<size_t> ready;
    for (size_t i = 0; i < g.nodes_.size(); ++i) {
        if (pending[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
        const size_t i = ready.front();
        ready.pop_front();
        g.topo_order_.push_back(g.nodes_[i].id);
        for (size_t c : consumers[i]) {
            if (--pending[c] == 0) ready.push_back(c);
        }
    }
    if (g.topo_order_.size() != g.nodes_.size()) {
        g.topo_order_.clear(); // cycle
    }
    return g;
}

Graph Graph::build(GraphDef def, std::map<std::string, Tensor> constants) {
    Graph g = build_unchecked(std::move(def), std::move(constants));
    const auto diags = validate(g);
    if (!diags.empty()) {
        std::ostringstream os;
        os << "graph validation failed:";
        for (const auto& d : diags) {
            os << "\n  ";
            if (!d.node_id.empty()) os << "[" << d.node_id << "] ";
            os << d.message;
        }
        throw ValidationError(os.str());
    }
    return g;
}

const Node& Graph::node(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw BoundsError("unknown node id '" + id + "'");
    }
    return nodes_[it->second];
}

const Tensor& Graph::constant(const std::string& id) const {
    auto it = constants_.find(id);
    if (it == constants_.end()) {
        throw BoundsError("no constant tensor for node '" + id + "'");
    }
    return it->second;
}

std::vector<std::string> Graph::placeholder_ids() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_) {
        if (n.kind == OpKind::Placeholder) out.push_back(n.id);
    }
    return out;
}

std::vector<std::string> Graph::const_ids() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_) {
        if (n.kind == OpKind::Const) out.push_back(n.id);
    }
    return out;
}

namespace {

int arity_of(OpKind kind) {
    switch (kind) {
    case OpKind::Const:
    case OpKind::Placeholder:
        return 0;
    case OpKind::ReLU:
    case OpKind::Sigmoid:
    case OpKind::Softmax:
    case OpKind::Mean:
    case OpKind::Reshape:
    case OpKind::ArgMax:
    case OpKind::MaxPool:
        return 1;
    case OpKind::Add:
    case OpKind::Sub:
    case OpKind::Mul:
    case OpKind::MatMul:
    case OpKind::BiasAdd:
    case OpKind::Conv2D:
    case OpKind::Equal:
        return 2;
    }
    return -1;
}

const int64_t* attr_int(const Node& n, const std::string& key) {
    auto it = n.attrs.find(key);
    if (it == n.attrs.end()) return nullptr;
    return std::get_if<int64_t>(&it->second);
}

const std::vector<int64_t>* attr_ints(const Node& n, const std::string& key) {
    auto it = n.attrs.find(key);
    if (it == n.attrs.end()) return nullptr;
    return std::get_if<std::vector<int64_t>>(&it->second);
}

const std::string* attr_str(const Node& n, const std::string& key) {
    auto it = n.attrs.find(key);
    if (it == n.attrs.end()) return nullptr;
    return std::get_if<std::string>(&it->second);
}

void check_attr_schema(const Node& n, std::vector<Diagnostic>& diags) {
    auto fail = [&](const std::string& msg) { diags.push_back({n.id, msg}); };
    switch (n.kind) {
    case OpKind::Const:
    case OpKind::Placeholder: {
        const auto* dt = attr_str(n, "dtype");
        if (!dt || !dtype_from_name(*dt)) {
            fail("requires a 'dtype' attribute naming one of F32/F64/I64/Bool");
        }
        if (!attr_ints(n, "shape")) {
            fail("requires a 'shape' integer-list attribute");
        }
        break;
    }
    case OpKind::Conv2D:
    case OpKind::MaxPool: {
        const auto* strides = attr_ints(n, "strides");
        if (!strides || strides->size() != 2 || (*strides)[0] < 1 || (*strides)[1] < 1) {
            fail("requires a 'strides' attribute of two positive integers");
        }
        const auto* pad = attr_str(n, "padding");
        if (!pad || (*pad != "VALID" && *pad != "SAME")) {
            fail("requires a 'padding' attribute of VALID or SAME");
        }
        if (n.kind == OpKind::MaxPool) {
            const auto* window = attr_ints(n, "window");
            if (!window || window->size() != 2 || (*window)[0] < 1 || (*window)[1] < 1) {
                fail("requires a 'window' attribute of two positive integers");
            }
        }
        break;
    }
    case OpKind::ArgMax:
    case OpKind::Mean:
        if (!attr_int(n, "axis")) {
            fail("requires an integer 'axis' attribute");
        }
        break;
    case OpKind::Reshape:
        if (!attr_ints(n, "shape")) {
            fail("requires a 'shape' integer-list attribute (target shape)");
        }
        break;
    default:
        break;
    }
}

} // namespace

std::vector<Diagnostic> validate(const Graph& g) {
    std::vector<Diagnostic> diags;

    std::map<std::string, int> seen;
    for (const auto& n : g.nodes()) {
        if (++seen[n.id] == 2) {
            diags.push_back({n.id, "duplicate node id"});
        }
    }

    for (const auto& n : g.nodes()) {
        for (const std::string& in : n.inputs) {
            if (!g.has_node(in)) {
                diags.push_back({n.id, "references missing node '" + in + "'"});
            }
        }
        const int want = arity_of(n.kind);
        if (static_cast<int>(n.inputs.size()) != want) {
            diags.push_back({n.id, std::string(op_kind_name(n.kind)) + " expects " +
                                       std::to_string(want) + " input(s), got " +
                                       std::to_string(n.inputs.size())});
        }
        if (n.injectable && (n.kind == OpKind::Const || n.kind == OpKind::Placeholder)) {
            diags.push_back({n.id, "Const/Placeholder nodes cannot be injectable"});
        }
        check_attr_schema(n, diags);
        if (n.kind == OpKind::Const) {
            if (!g.has_constant(n.id)) {
                diags.push_back({n.id, "missing constant tensor"});
            }
        }
    }

    for (const auto& [id, t] : g.constants()) {
        if (!g.has_node(id) || g.node(id).kind != OpKind::Const) {
            diags.push_back({id, "constant tensor does not correspond to a Const node"});
        }
    }

    for (const std::string& out : g.outputs()) {
        if (!g.has_node(out)) {
            diags.push_back({out, "output references missing node"});
        }
    }
    if (g.outputs().empty()) {
        diags.push_back({"", "graph declares no outputs"});
    }

    if (!diags.empty()) {
        return diags; // structure is broken; shape inference would only cascade
    }

    if (g.topo_order().empty() && !g.nodes().empty()) {
        diags.push_back({"", "graph contains a cycle"});
        return diags;
    }

    // Shape inference over the whole graph, collecting per-node problems.
    std::map<std::string, TensorMeta> metas;
    for (const std::string& id : g.topo_order()) {
        const Node& n = g.node(id);
        std::vector<TensorMeta> inputs;
        bool inputs_ok = true;
        for (const std::string& in : n.inputs) {
            auto it = metas.find(in);
            if (it == metas.end()) {
                inputs_ok = false;
                break;
            }
            inputs.push_back(it->second);
        }
        if (!inputs_ok) continue; // upstream already failed
        try {
            TensorMeta meta = infer_node_meta(n, inputs);
            if (n.kind == OpKind::Const && g.has_constant(id)) {
                const Tensor& c = g.constant(id);
                if (c.dtype() != meta.dtype || c.shape() != meta.shape) {
                    diags.push_back({id, "constant tensor does not match declared dtype/shape"});
                }
            }
            metas.emplace(id, std::move(meta));
        } catch (const Error& e) {
            diags.push_back({id, e.what()});
        }
    }
    return diags;
}

std::map<std::string, TensorMeta>
infer_shapes(const Graph& g, const std::map<std::string, std::vector<int64_t>>& feed_shapes) {
    for (const auto& [id, shape] : feed_shapes) {
        if (!g.has_node(id) || g.node(id).kind != OpKind::Placeholder) {
            throw ContractError("feed shape given for non-placeholder '" + id + "'");
        }
    }
    std::map<std::string, TensorMeta> metas;
    for (const std::string& id : g.topo_order()) {
        const Node& n = g.node(id);
        std::vector<TensorMeta> inputs;
        for (const std::string& in : n.inputs) {
            inputs.push_back(metas.at(in));
        }
        TensorMeta meta = infer_node_meta(n, inputs);
        if (n.kind == OpKind::Placeholder) {
            auto it = feed_shapes.find(id);
            if (it != feed_shapes.end() && it->second != meta.shape) {
                throw ValidationError("feed shape for placeholder '" + id +
                                      "' does not match its declared shape");
            }
        }
        metas.emplace(id, std::move(meta));
    }
    return metas;
}

ExecuteResult execute(const Graph& g, const Feeds& feeds, const Interceptor& interceptor,
                      std::map<std::string, Tensor>* capture_all) {
    if (g.topo_order().empty() && !g.nodes().empty()) {
        throw ContractError("cannot execute an invalid graph (run validate first)");
    }

    // Strict feed checks: every placeholder fed, nothing extra.
    for (const auto& [id, t] : feeds) {
        if (!g.has_node(id) || g.node(id).kind != OpKind::Placeholder) {
            throw ContractError("feed '" + id + "' does not name a placeholder");
        }
    }

    std::map<std::string, Tensor> env;
    ExecutionTrace trace;
    trace.entries.reserve(g.topo_order().size());
    std::map<OpKind, int64_t> kind_counters;

    for (const std::string& id : g.topo_order()) {
        const Node& n = g.node(id);
        Tensor value;
        switch (n.kind) {
        case OpKind::Const:
            value = g.constant(id);
            break;
        case OpKind::Placeholder: {
            auto it = feeds.find(id);
            if (it == feeds.end()) {
                throw ContractError("missing feed for placeholder '" + id + "'");
            }
            const TensorMeta declared = infer_node_meta(n, {});
            if (it->second.dtype() != declared.dtype || it->second.shape() != declared.shape) {
                throw ContractError("feed for placeholder '" + id +
                                    "' does not match declared dtype/shape");
            }
            value = it->second;
            break;
        }
        default: {
            std::vector<const Tensor*> inputs;
            inputs.reserve(n.inputs.size());
            for (const std::string& in : n.inputs) {
                inputs.push_back(&env.at(in));
            }
            value = eval_node(n, inputs);
            break;
        }
        }

        if (n.injectable && interceptor) {
            if (auto replacement = interceptor(n, value)) {
                if (replacement->dtype() != value.dtype() || replacement->shape() != value.shape()) {
                    throw ContractError("interceptor returned wrong dtype/shape for node '" + id +
                                        "'");
                }
                value = std::move(*replacement);
            }
        }

        trace.entries.push_back({id, n.kind, kind_counters[n.kind]++, value.shape(), n.injectable});
        if (capture_all) {
            capture_all->insert_or_assign(id, value);
        }
        env.insert_or_assign(id, std::move(value));
    }

    ExecuteResult result;
    result.trace = std::move(trace);
    result.outputs.reserve(g.outputs().size());
    for (const std::string& out : g.outputs()) {
        result.outputs.push_back(env.at(out));
    }
    return result;
}

std::map<OpKind, int64_t> count_instances(const ExecutionTrace& trace) {
    std::map<OpKind, int64_t> counts;
    for (const auto& e : trace.entries) {
        if (e.injectable) ++counts[e.kind];
    }
    return counts;
}

} // namespace graphfi
