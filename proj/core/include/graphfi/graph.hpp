// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/tensor.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace graphfi {

enum class OpKind : uint8_t {
    Const,
    Placeholder,
    Add,
    Sub,
    Mul,
    MatMul,
    BiasAdd,
    Conv2D,
    MaxPool,
    ReLU,
    Sigmoid,
    Softmax,
    Mean,
    Reshape,
    ArgMax,
    Equal,
};

constexpr int kOpKindCount = 16;

const char* op_kind_name(OpKind kind);
std::optional<OpKind> op_kind_from_name(std::string_view name);

/// Node attribute: integer, integer list, or string.
using Attr = std::variant<int64_t, std::vector<int64_t>, std::string>;
using AttrMap = std::map<std::string, Attr>;

struct Node {
    std::string id;
    OpKind kind = OpKind::Const;
    std::vector<std::string> inputs;
    AttrMap attrs;
    /// Eligible for fault injection. Always false for Const/Placeholder and
    /// for nodes the model author tags as input preprocessing.
    bool injectable = false;
};

/// Static dtype+shape of a node output.
struct TensorMeta {
    DType dtype = DType::F32;
    std::vector<int64_t> shape;

    bool operator==(const TensorMeta&) const = default;
};

struct Diagnostic {
    std::string node_id; // empty for graph-level problems
    std::string message;
};

/// Raw graph parts before topological ordering and validation.
struct GraphDef {
    std::vector<Node> nodes;
    std::vector<std::string> outputs;
};

/// Immutable dataflow graph. Execution state lives entirely in per-run
/// environments, so concurrent execute() calls on one Graph are safe.
class Graph {
public:
    /// Builds without validating; validate() reports problems as diagnostics.
    static Graph build_unchecked(GraphDef def, std::map<std::string, Tensor> constants = {});

    /// Builds and validates; throws ValidationError listing every diagnostic.
    static Graph build(GraphDef def, std::map<std::string, Tensor> constants = {});

    const std::vector<Node>& nodes() const { return nodes_; }
    bool has_node(const std::string& id) const { return index_.count(id) != 0; }
    const Node& node(const std::string& id) const;

    /// Valid topological order over all nodes; empty if the graph is cyclic.
    const std::vector<std::string>& topo_order() const { return topo_order_; }
    const std::vector<std::string>& outputs() const { return outputs_; }

    std::vector<std::string> placeholder_ids() const;
    std::vector<std::string> const_ids() const;

    bool has_constant(const std::string& id) const { return constants_.count(id) != 0; }
    const Tensor& constant(const std::string& id) const;
    const std::map<std::string, Tensor>& constants() const { return constants_; }

private:
    std::vector<Node> nodes_;
    std::map<std::string, size_t> index_;
    std::vector<std::string> topo_order_;
    std::vector<std::string> outputs_;
    std::map<std::string, Tensor> constants_;
};

/// Structural checks: unique ids, resolvable inputs, acyclicity, arity,
/// attribute schemas, injectable-flag legality, constant presence, and
/// whole-graph shape inference. Empty result means the graph is valid.
std::vector<Diagnostic> validate(const Graph& g);

/// Static dtype/shape for every node. Placeholder shapes come from their
/// declared attributes; entries in feed_shapes must match the declaration.
std::map<std::string, TensorMeta>
infer_shapes(const Graph& g, const std::map<std::string, std::vector<int64_t>>& feed_shapes = {});

/// Per-node dtype/shape inference used by validate/infer_shapes.
TensorMeta infer_node_meta(const Node& node, const std::vector<TensorMeta>& inputs);

/// Kernel dispatch: evaluates one non-Const, non-Placeholder node.
Tensor eval_node(const Node& node, const std::vector<const Tensor*>& inputs);

struct TraceEntry {
    std::string node_id;
    OpKind kind = OpKind::Const;
    /// Dynamic instance index: per op kind, consecutive from 0 within a run.
    int64_t instance_index = 0;
    std::vector<int64_t> shape;
    bool injectable = false;
};

struct ExecutionTrace {
    std::vector<TraceEntry> entries;
};

using Feeds = std::map<std::string, Tensor>;

/// Post-operator interception seam. Called after each injectable node's
/// output is computed; a returned tensor (same dtype/shape) replaces the
/// output for everything downstream. Returning nullopt keeps the original.
using Interceptor = std::function<std::optional<Tensor>(const Node&, const Tensor& output)>;

struct ExecuteResult {
    std::vector<Tensor> outputs;
    ExecutionTrace trace;
};

/// Deterministic topological interpretation. With no interceptor this is the
/// golden run: bit-identical across repeated calls with identical feeds.
/// `capture_all`, when given, receives the final (post-interception) output
/// of every node.
ExecuteResult execute(const Graph& g, const Feeds& feeds, const Interceptor& interceptor = {},
                      std::map<std::string, Tensor>* capture_all = nullptr);

/// Dynamic instance counts per op kind, restricted to injectable nodes.
std::map<OpKind, int64_t> count_instances(const ExecutionTrace& trace);

} // namespace graphfi
