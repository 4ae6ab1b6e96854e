// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include <graphfi/fixtures.hpp>
#include <graphfi/graph.hpp>

#include "reference_ops.hpp"

#include <doctest.h>

#include <algorithm>

using namespace graphfi;

namespace {

Node make(const std::string& id, OpKind kind, std::vector<std::string> inputs, AttrMap attrs = {},
          bool injectable = true) {
    Node n;
    n.id = id;
    n.kind = kind;
    n.inputs = std::move(inputs);
    n.attrs = std::move(attrs);
    n.injectable = injectable && kind != OpKind::Const && kind != OpKind::Placeholder;
    return n;
}

Node placeholder(const std::string& id, std::vector<int64_t> shape, DType dtype = DType::F32) {
    return make(id, OpKind::Placeholder, {},
                {{"dtype", std::string(dtype_name(dtype))}, {"shape", std::move(shape)}});
}

Node constant(const std::string& id, std::vector<int64_t> shape, DType dtype = DType::F32) {
    return make(id, OpKind::Const, {},
                {{"dtype", std::string(dtype_name(dtype))}, {"shape", std::move(shape)}});
}

// a + b with one Add node.
Graph add_graph() {
    GraphDef def;
    def.nodes = {placeholder("a", {2, 3}), placeholder("b", {2, 3}),
                 make("sum", OpKind::Add, {"a", "b"})};
    def.outputs = {"sum"};
    return Graph::build(std::move(def));
}

bool has_diag_for(const std::vector<Diagnostic>& diags, const std::string& node_id) {
    return std::any_of(diags.begin(), diags.end(),
                       [&](const Diagnostic& d) { return d.node_id == node_id; });
}

} // namespace

TEST_CASE("well-formed three-node add graph validates") {
    const Graph g = add_graph();
    CHECK(validate(g).empty());
    CHECK(g.topo_order().size() == 3);
}

TEST_CASE("validate reports missing input ids by name") {
    GraphDef def;
    def.nodes = {placeholder("a", {2}), make("sum", OpKind::Add, {"a", "w1"})};
    def.outputs = {"sum"};
    const Graph g = Graph::build_unchecked(std::move(def));
    const auto diags = validate(g);
    REQUIRE_FALSE(diags.empty());
    bool mentions_w1 = false;
    for (const auto& d : diags) {
        if (d.message.find("w1") != std::string::npos) mentions_w1 = true;
    }
    CHECK(mentions_w1);
}

TEST_CASE("validate reports MatMul shape mismatches with the node id") {
    GraphDef def;
    def.nodes = {placeholder("a", {2, 3}), placeholder("b", {2, 3}),
                 make("mm", OpKind::MatMul, {"a", "b"})};
    def.outputs = {"mm"};
    const Graph g = Graph::build_unchecked(std::move(def));
    CHECK(has_diag_for(validate(g), "mm"));
}

TEST_CASE("validate rejects cycles, bad arity, and injectable sources") {
    SUBCASE("cycle") {
        GraphDef def;
        def.nodes = {make("x", OpKind::ReLU, {"y"}), make("y", OpKind::ReLU, {"x"})};
        def.outputs = {"x"};
        const Graph g = Graph::build_unchecked(std::move(def));
        const auto diags = validate(g);
        REQUIRE_FALSE(diags.empty());
        CHECK(diags[0].message.find("cycle") != std::string::npos);
    }
    SUBCASE("arity") {
        GraphDef def;
        def.nodes = {placeholder("a", {2}), make("sum", OpKind::Add, {"a"})};
        def.outputs = {"sum"};
        CHECK(has_diag_for(validate(Graph::build_unchecked(std::move(def))), "sum"));
    }
    SUBCASE("injectable placeholder") {
        GraphDef def;
        Node p = placeholder("a", {2});
        p.injectable = true;
        def.nodes = {p, make("r", OpKind::ReLU, {"a"})};
        def.outputs = {"r"};
        CHECK(has_diag_for(validate(Graph::build_unchecked(std::move(def))), "a"));
    }
    SUBCASE("missing constant tensor") {
        GraphDef def;
        def.nodes = {constant("w", {2}), make("r", OpKind::ReLU, {"w"})};
        def.outputs = {"r"};
        CHECK(has_diag_for(validate(Graph::build_unchecked(std::move(def))), "w"));
    }
}

TEST_CASE("shape inference matches the hand-derived cases") {
    GraphDef def;
    def.nodes = {placeholder("x", {1, 4, 4, 1}), constant("k", {2, 2, 1, 1}),
                 make("conv", OpKind::Conv2D, {"x", "k"},
                      {{"strides", std::vector<int64_t>{1, 1}}, {"padding", std::string("VALID")}}),
                 placeholder("logits", {5, 10}),
                 make("am", OpKind::ArgMax, {"logits"}, {{"axis", int64_t{1}}}),
                 placeholder("p", {2, 3}), placeholder("q", {2, 3}),
                 make("sum", OpKind::Add, {"p", "q"})};
    def.outputs = {"conv", "am", "sum"};
    std::map<std::string, Tensor> consts;
    consts.emplace("k", Tensor(DType::F32, {2, 2, 1, 1}));
    const Graph g = Graph::build(std::move(def), std::move(consts));

    const auto metas = infer_shapes(g);
    CHECK(metas.at("sum").shape == std::vector<int64_t>{2, 3});
    // Conv2D [1,4,4,1] by [2,2,1,1], stride 1, VALID: (4-2)/1+1 = 3.
    CHECK(metas.at("conv").shape == std::vector<int64_t>{1, 3, 3, 1});
    CHECK(metas.at("am").shape == std::vector<int64_t>{5});
    CHECK(metas.at("am").dtype == DType::I64);

    CHECK_THROWS_AS(infer_shapes(g, {{"p", {9, 9}}}), ValidationError);
}

TEST_CASE("execute computes MatMul identity and symmetric Softmax") {
    SUBCASE("MatMul with I2") {
        GraphDef def;
        def.nodes = {placeholder("a", {2, 2}), constant("i2", {2, 2}),
                     make("mm", OpKind::MatMul, {"a", "i2"})};
        def.outputs = {"mm"};
        std::map<std::string, Tensor> consts;
        consts.emplace("i2", Tensor::from_f32({2, 2}, {1, 0, 0, 1}));
        const Graph g = Graph::build(std::move(def), std::move(consts));
        const Tensor a = Tensor::from_f32({2, 2}, {1, 2, 3, 4});
        const auto res = execute(g, {{"a", a}});
        CHECK(res.outputs[0].bit_identical(a));
    }
    SUBCASE("Softmax of zeros is uniform") {
        GraphDef def;
        def.nodes = {placeholder("x", {2}), make("sm", OpKind::Softmax, {"x"})};
        def.outputs = {"sm"};
        const Graph g = Graph::build(std::move(def));
        const auto res = execute(g, {{"x", Tensor::from_f32({2}, {0.0f, 0.0f})}});
        CHECK(res.outputs[0].as<float>()[0] == 0.5f);
        CHECK(res.outputs[0].as<float>()[1] == 0.5f);
    }
    SUBCASE("Conv2D all-ones 3x3 by all-ones 2x2 VALID is all 4") {
        GraphDef def;
        def.nodes = {placeholder("x", {1, 3, 3, 1}), constant("k", {2, 2, 1, 1}),
                     make("conv", OpKind::Conv2D, {"x", "k"},
                          {{"strides", std::vector<int64_t>{1, 1}},
                           {"padding", std::string("VALID")}})};
        def.outputs = {"conv"};
        std::map<std::string, Tensor> consts;
        consts.emplace("k", Tensor::from_f32({2, 2, 1, 1}, {1, 1, 1, 1}));
        const Graph g = Graph::build(std::move(def), std::move(consts));
        const Tensor x = Tensor::from_f32({1, 3, 3, 1}, std::vector<float>(9, 1.0f));
        const auto res = execute(g, {{"x", x}});
        // Oracle: brute-force sliding window over the padded buffer.
        const Tensor expected = ref::conv2d(x, g.constant("k"), 1, 1, "VALID");
        CHECK(res.outputs[0].bit_identical(expected));
        for (float v : res.outputs[0].as<float>()) CHECK(v == 4.0f);
    }
}

TEST_CASE("execute errors: missing feed, extra feed, wrong feed shape") {
    const Graph g = add_graph();
    const Tensor ok(DType::F32, {2, 3});
    CHECK_THROWS_WITH_AS(execute(g, {{"a", ok}}), doctest::Contains("'b'"), ContractError);
    CHECK_THROWS_AS(execute(g, {{"a", ok}, {"b", ok}, {"zz", ok}}), ContractError);
    CHECK_THROWS_AS(execute(g, {{"a", ok}, {"b", Tensor(DType::F32, {3, 2})}}), ContractError);
}

TEST_CASE("golden determinism: repeated runs are bit-identical") {
    const auto bundle = fixtures::tiny_mlp();
    const auto a = execute(bundle.graph, bundle.inputs[0]);
    const auto b = execute(bundle.graph, bundle.inputs[0]);
    REQUIRE(a.outputs.size() == b.outputs.size());
    for (size_t i = 0; i < a.outputs.size(); ++i) {
        CHECK(a.outputs[i].bit_identical(b.outputs[i]));
    }
}

TEST_CASE("interceptor transparency: a no-op interceptor leaves outputs bit-identical") {
    const auto bundle = fixtures::tiny_cnn();
    const auto golden = execute(bundle.graph, bundle.inputs[0]);
    int64_t calls = 0;
    const auto intercepted = execute(bundle.graph, bundle.inputs[0],
                                     [&calls](const Node&, const Tensor&) -> std::optional<Tensor> {
                                         ++calls;
                                         return std::nullopt;
                                     });
    CHECK(calls > 0);
    for (size_t i = 0; i < golden.outputs.size(); ++i) {
        CHECK(golden.outputs[i].bit_identical(intercepted.outputs[i]));
    }
}

TEST_CASE("interceptor is consulted only on injectable nodes and checked for shape") {
    const auto bundle = fixtures::tiny_mlp();
    SUBCASE("only injectable nodes") {
        std::vector<std::string> seen;
        execute(bundle.graph, bundle.inputs[0],
                [&seen](const Node& n, const Tensor&) -> std::optional<Tensor> {
                    seen.push_back(n.id);
                    return std::nullopt;
                });
        for (const std::string& id : seen) {
            CHECK(bundle.graph.node(id).injectable);
        }
        CHECK(seen.size() == 7);
    }
    SUBCASE("wrong replacement shape is a contract violation") {
        CHECK_THROWS_AS(execute(bundle.graph, bundle.inputs[0],
                                [](const Node&, const Tensor&) -> std::optional<Tensor> {
                                    return Tensor(DType::F32, {1, 1});
                                }),
                        ContractError);
    }
}

TEST_CASE("trace: one entry per node, per-kind instance indices consecutive from 0") {
    const auto bundle = fixtures::tiny_rnn();
    const auto res = execute(bundle.graph, bundle.inputs[0]);
    CHECK(res.trace.entries.size() == bundle.graph.nodes().size());

    std::map<OpKind, int64_t> next;
    for (const auto& e : res.trace.entries) {
        CHECK(e.instance_index == next[e.kind]);
        ++next[e.kind];
    }
}

TEST_CASE("count_instances counts injectable nodes per kind") {
    SUBCASE("two Adds and one MatMul") {
        GraphDef def;
        def.nodes = {placeholder("x", {2, 2}), constant("w", {2, 2}),
                     make("a1", OpKind::Add, {"x", "x"}), make("a2", OpKind::Add, {"a1", "x"}),
                     make("mm", OpKind::MatMul, {"a2", "w"})};
        def.outputs = {"mm"};
        std::map<std::string, Tensor> consts;
        consts.emplace("w", Tensor(DType::F32, {2, 2}));
        const Graph g = Graph::build(std::move(def), std::move(consts));
        const auto res = execute(g, {{"x", Tensor(DType::F32, {2, 2})}});
        const auto counts = count_instances(res.trace);
        CHECK(counts.size() == 2);
        CHECK(counts.at(OpKind::Add) == 2);
        CHECK(counts.at(OpKind::MatMul) == 1);
    }
    SUBCASE("placeholder-only graph has no injectable instances") {
        GraphDef def;
        def.nodes = {placeholder("x", {2})};
        def.outputs = {"x"};
        const Graph g = Graph::build(std::move(def));
        const auto res = execute(g, {{"x", Tensor(DType::F32, {2})}});
        CHECK(count_instances(res.trace).empty());
    }
    SUBCASE("counts are stable across runs") {
        const auto bundle = fixtures::tiny_cnn();
        const auto a = execute(bundle.graph, bundle.inputs[0]);
        const auto b = execute(bundle.graph, bundle.inputs[3]);
        CHECK(count_instances(a.trace) == count_instances(b.trace));
    }
}
