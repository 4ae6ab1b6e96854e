// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/fixtures.hpp"

#include "graphfi/model_io.hpp"
#include "graphfi/rng.hpp"

#include <filesystem>
#include <fstream>

namespace graphfi::fixtures {

namespace {

std::vector<float> uniform_signed(RngStream& rng, size_t count, float scale) {
    std::vector<float> v(count);
    for (float& x : v) {
        x = (rng.uniform_float() * 2.0f - 1.0f) * scale;
    }
    return v;
}

Node op(std::string id, OpKind kind, std::vector<std::string> inputs, AttrMap attrs = {}) {
    Node n;
    n.id = std::move(id);
    n.kind = kind;
    n.inputs = std::move(inputs);
    n.attrs = std::move(attrs);
    n.injectable = true;
    return n;
}

Node source(std::string id, OpKind kind, DType dtype, std::vector<int64_t> shape) {
    Node n;
    n.id = std::move(id);
    n.kind = kind;
    n.attrs.emplace("dtype", std::string(dtype_name(dtype)));
    n.attrs.emplace("shape", std::move(shape));
    n.injectable = false;
    return n;
}

} // namespace

FixtureBundle tiny_mlp() {
    constexpr int64_t kFeatures = 16;
    constexpr int64_t kClasses = 10;
    RngStream rng(0x7f1e0001);

    // Ten class templates; column c of w1 is the matched filter for class c.
    std::vector<std::vector<float>> templates(kClasses);
    for (auto& t : templates) {
        t = uniform_signed(rng, kFeatures, 1.0f);
    }
    std::vector<float> w1(static_cast<size_t>(kFeatures * kClasses));
    for (int64_t i = 0; i < kFeatures; ++i) {
        for (int64_t c = 0; c < kClasses; ++c) {
            w1[static_cast<size_t>(i * kClasses + c)] = templates[static_cast<size_t>(c)][static_cast<size_t>(i)];
        }
    }
    std::vector<float> b1(kClasses, 0.05f);
    std::vector<float> w2(static_cast<size_t>(kClasses * kClasses), 0.0f);
    for (int64_t c = 0; c < kClasses; ++c) {
        w2[static_cast<size_t>(c * kClasses + c)] = 1.5f;
    }
    std::vector<float> b2(kClasses, 0.0f);

    GraphDef def;
    def.nodes.push_back(source("x", OpKind::Placeholder, DType::F32, {1, kFeatures}));
    def.nodes.push_back(source("w1", OpKind::Const, DType::F32, {kFeatures, kClasses}));
    def.nodes.push_back(source("b1", OpKind::Const, DType::F32, {kClasses}));
    def.nodes.push_back(source("w2", OpKind::Const, DType::F32, {kClasses, kClasses}));
    def.nodes.push_back(source("b2", OpKind::Const, DType::F32, {kClasses}));
    def.nodes.push_back(op("mm1", OpKind::MatMul, {"x", "w1"}));
    def.nodes.push_back(op("ba1", OpKind::BiasAdd, {"mm1", "b1"}));
    def.nodes.push_back(op("relu1", OpKind::ReLU, {"ba1"}));
    def.nodes.push_back(op("mm2", OpKind::MatMul, {"relu1", "w2"}));
    def.nodes.push_back(op("ba2", OpKind::BiasAdd, {"mm2", "b2"}));
    def.nodes.push_back(op("probs", OpKind::Softmax, {"ba2"}));
    def.nodes.push_back(op("label", OpKind::ArgMax, {"probs"}, {{"axis", int64_t{1}}}));
    def.outputs = {"label", "probs"};

    std::map<std::string, Tensor> consts;
    consts.emplace("w1", Tensor::from_f32({kFeatures, kClasses}, w1));
    consts.emplace("b1", Tensor::from_f32({kClasses}, b1));
    consts.emplace("w2", Tensor::from_f32({kClasses, kClasses}, w2));
    consts.emplace("b2", Tensor::from_f32({kClasses}, b2));

    FixtureBundle bundle;
    bundle.name = "tiny-mlp";
    bundle.graph = Graph::build(std::move(def), std::move(consts));

    for (int64_t k = 0; k < 10; ++k) {
        const auto& tpl = templates[static_cast<size_t>(k % kClasses)];
        std::vector<float> x(tpl);
        for (float& v : x) {
            v += (rng.uniform_float() * 2.0f - 1.0f) * 0.05f;
        }
        bundle.inputs.push_back({{"x", Tensor::from_f32({1, kFeatures}, x)}});
    }
    return bundle;
}

FixtureBundle tiny_cnn() {
    constexpr int64_t kSide = 8;
    constexpr int64_t kChannels = 4; // stripe-H, stripe-V, checker, DC
    constexpr int64_t kClasses = 4;
    RngStream rng(0x7f1e0002);

    // Hand-designed 3x3 detectors, one per class pattern.
    std::vector<float> k1(static_cast<size_t>(3 * 3 * 1 * kChannels), 0.0f);
    auto kernel_at = [&](int64_t kh, int64_t kw, int64_t co) -> float& {
        return k1[static_cast<size_t>(((kh * 3 + kw) * 1 + 0) * kChannels + co)];
    };
    for (int64_t kh = 0; kh < 3; ++kh) {
        for (int64_t kw = 0; kw < 3; ++kw) {
            kernel_at(kh, kw, 0) = (kh % 2 == 0) ? 0.5f : -0.5f;        // horizontal stripes
            kernel_at(kh, kw, 1) = (kw % 2 == 0) ? 0.5f : -0.5f;        // vertical stripes
            kernel_at(kh, kw, 2) = ((kh + kw) % 2 == 0) ? 0.5f : -0.5f; // checkerboard
            kernel_at(kh, kw, 3) = 1.0f / 9.0f;                         // brightness
        }
    }
    std::vector<float> b1 = {-0.2f, -0.2f, -0.2f, 0.0f};

    // Channel-sum readout with mild cross-channel inhibition.
    constexpr int64_t kFlat = 4 * 4 * kChannels;
    std::vector<float> w2(static_cast<size_t>(kFlat * kClasses));
    for (int64_t i = 0; i < kFlat; ++i) {
        for (int64_t c = 0; c < kClasses; ++c) {
            w2[static_cast<size_t>(i * kClasses + c)] = (i % kChannels == c) ? 0.3f : -0.05f;
        }
    }
    std::vector<float> b2(kClasses, 0.0f);

    GraphDef def;
    def.nodes.push_back(source("x", OpKind::Placeholder, DType::F32, {1, kSide, kSide, 1}));
    def.nodes.push_back(source("k1", OpKind::Const, DType::F32, {3, 3, 1, kChannels}));
    def.nodes.push_back(source("b1", OpKind::Const, DType::F32, {kChannels}));
    def.nodes.push_back(source("w2", OpKind::Const, DType::F32, {kFlat, kClasses}));
    def.nodes.push_back(source("b2", OpKind::Const, DType::F32, {kClasses}));
    def.nodes.push_back(op("conv1", OpKind::Conv2D, {"x", "k1"},
                           {{"strides", std::vector<int64_t>{1, 1}},
                            {"padding", std::string("SAME")}}));
    def.nodes.push_back(op("ba1", OpKind::BiasAdd, {"conv1", "b1"}));
    def.nodes.push_back(op("relu1", OpKind::ReLU, {"ba1"}));
    def.nodes.push_back(op("pool1", OpKind::MaxPool, {"relu1"},
                           {{"window", std::vector<int64_t>{2, 2}},
                            {"strides", std::vector<int64_t>{2, 2}},
                            {"padding", std::string("VALID")}}));
    def.nodes.push_back(op("flat", OpKind::Reshape, {"pool1"},
                           {{"shape", std::vector<int64_t>{1, kFlat}}}));
    def.nodes.push_back(op("mm1", OpKind::MatMul, {"flat", "w2"}));
    def.nodes.push_back(op("ba2", OpKind::BiasAdd, {"mm1", "b2"}));
    def.nodes.push_back(op("probs", OpKind::Softmax, {"ba2"}));
    def.nodes.push_back(op("label", OpKind::ArgMax, {"probs"}, {{"axis", int64_t{1}}}));
    def.outputs = {"label", "probs"};

    std::map<std::string, Tensor> consts;
    consts.emplace("k1", Tensor::from_f32({3, 3, 1, kChannels}, k1));
    consts.emplace("b1", Tensor::from_f32({kChannels}, b1));
    consts.emplace("w2", Tensor::from_f32({kFlat, kClasses}, w2));
    consts.emplace("b2", Tensor::from_f32({kClasses}, b2));

    FixtureBundle bundle;
    bundle.name = "tiny-cnn";
    bundle.graph = Graph::build(std::move(def), std::move(consts));

    for (int64_t k = 0; k < 10; ++k) {
        const int64_t cls = k % kClasses;
        std::vector<float> x(static_cast<size_t>(kSide * kSide));
        for (int64_t h = 0; h < kSide; ++h) {
            for (int64_t w = 0; w < kSide; ++w) {
                float v = 0.0f;
                switch (cls) {
                case 0: v = (h % 2 == 0) ? 1.0f : -1.0f; break;
                case 1: v = (w % 2 == 0) ? 1.0f : -1.0f; break;
                case 2: v = ((h + w) % 2 == 0) ? 1.0f : -1.0f; break;
                case 3: v = 1.0f; break;
                }
                v += (rng.uniform_float() * 2.0f - 1.0f) * 0.05f;
                x[static_cast<size_t>(h * kSide + w)] = v;
            }
        }
        bundle.inputs.push_back({{"x", Tensor::from_f32({1, kSide, kSide, 1}, x)}});
    }
    return bundle;
}

FixtureBundle tiny_regressor() {
    constexpr int64_t kFeatures = 4;
    constexpr int64_t kHidden = 8;
    RngStream rng(0x7f1e0003);

    const std::vector<float> w1 = uniform_signed(rng, static_cast<size_t>(kFeatures * kHidden), 1.0f);
    const std::vector<float> b1(kHidden, 0.1f);
    const std::vector<float> w2 = uniform_signed(rng, static_cast<size_t>(kHidden), 15.0f);
    const std::vector<float> b2 = {2.0f};

    GraphDef def;
    def.nodes.push_back(source("x", OpKind::Placeholder, DType::F32, {1, kFeatures}));
    def.nodes.push_back(source("w1", OpKind::Const, DType::F32, {kFeatures, kHidden}));
    def.nodes.push_back(source("b1", OpKind::Const, DType::F32, {kHidden}));
    def.nodes.push_back(source("w2", OpKind::Const, DType::F32, {kHidden, 1}));
    def.nodes.push_back(source("b2", OpKind::Const, DType::F32, {1}));
    def.nodes.push_back(op("mm1", OpKind::MatMul, {"x", "w1"}));
    def.nodes.push_back(op("ba1", OpKind::BiasAdd, {"mm1", "b1"}));
    def.nodes.push_back(op("relu1", OpKind::ReLU, {"ba1"}));
    def.nodes.push_back(op("mm2", OpKind::MatMul, {"relu1", "w2"}));
    def.nodes.push_back(op("ba2", OpKind::BiasAdd, {"mm2", "b2"}));
    def.nodes.push_back(op("steer", OpKind::Reshape, {"ba2"},
                           {{"shape", std::vector<int64_t>{}}}));
    def.outputs = {"steer"};

    std::map<std::string, Tensor> consts;
    consts.emplace("w1", Tensor::from_f32({kFeatures, kHidden}, w1));
    consts.emplace("b1", Tensor::from_f32({kHidden}, b1));
    consts.emplace("w2", Tensor::from_f32({kHidden, 1}, w2));
    consts.emplace("b2", Tensor::from_f32({1}, b2));

    FixtureBundle bundle;
    bundle.name = "tiny-regressor";
    bundle.graph = Graph::build(std::move(def), std::move(consts));

    for (int64_t k = 0; k < 10; ++k) {
        bundle.inputs.push_back(
            {{"x", Tensor::from_f32({1, kFeatures}, uniform_signed(rng, kFeatures, 1.0f))}});
    }
    return bundle;
}

FixtureBundle tiny_rnn() {
    constexpr int64_t kSteps = 4;
    constexpr int64_t kFeatures = 8;
    constexpr int64_t kState = 16;
    constexpr int64_t kClasses = 4;
    RngStream rng(0x7f1e0004);

    const std::vector<float> wx = uniform_signed(rng, static_cast<size_t>(kFeatures * kState), 0.6f);
    const std::vector<float> wh = uniform_signed(rng, static_cast<size_t>(kState * kState), 0.4f);
    const std::vector<float> b(kState, 0.0f);
    const std::vector<float> wo = uniform_signed(rng, static_cast<size_t>(kState * kClasses), 1.2f);
    const std::vector<float> bo(kClasses, 0.0f);

    GraphDef def;
    def.nodes.push_back(source("h0", OpKind::Const, DType::F32, {1, kState}));
    def.nodes.push_back(source("wx", OpKind::Const, DType::F32, {kFeatures, kState}));
    def.nodes.push_back(source("wh", OpKind::Const, DType::F32, {kState, kState}));
    def.nodes.push_back(source("b", OpKind::Const, DType::F32, {kState}));
    def.nodes.push_back(source("wo", OpKind::Const, DType::F32, {kState, kClasses}));
    def.nodes.push_back(source("bo", OpKind::Const, DType::F32, {kClasses}));

    std::string state = "h0";
    for (int64_t t = 0; t < kSteps; ++t) {
        const std::string s = std::to_string(t);
        def.nodes.push_back(source("x" + s, OpKind::Placeholder, DType::F32, {1, kFeatures}));
        def.nodes.push_back(op("mmx" + s, OpKind::MatMul, {"x" + s, "wx"}));
        def.nodes.push_back(op("bax" + s, OpKind::BiasAdd, {"mmx" + s, "b"}));
        def.nodes.push_back(op("mmh" + s, OpKind::MatMul, {state, "wh"}));
        def.nodes.push_back(op("pre" + s, OpKind::Add, {"bax" + s, "mmh" + s}));
        def.nodes.push_back(op("h" + std::to_string(t + 1), OpKind::Sigmoid, {"pre" + s}));
        state = "h" + std::to_string(t + 1);
    }
    def.nodes.push_back(op("mmo", OpKind::MatMul, {state, "wo"}));
    def.nodes.push_back(op("bao", OpKind::BiasAdd, {"mmo", "bo"}));
    def.nodes.push_back(op("probs", OpKind::Softmax, {"bao"}));
    def.nodes.push_back(op("label", OpKind::ArgMax, {"probs"}, {{"axis", int64_t{1}}}));
    def.outputs = {"label", "probs"};

    std::map<std::string, Tensor> consts;
    consts.emplace("h0", Tensor(DType::F32, {1, kState}));
    consts.emplace("wx", Tensor::from_f32({kFeatures, kState}, wx));
    consts.emplace("wh", Tensor::from_f32({kState, kState}, wh));
    consts.emplace("b", Tensor::from_f32({kState}, b));
    consts.emplace("wo", Tensor::from_f32({kState, kClasses}, wo));
    consts.emplace("bo", Tensor::from_f32({kClasses}, bo));

    FixtureBundle bundle;
    bundle.name = "tiny-rnn";
    bundle.graph = Graph::build(std::move(def), std::move(consts));

    for (int64_t k = 0; k < 10; ++k) {
        Feeds feeds;
        for (int64_t t = 0; t < kSteps; ++t) {
            feeds.emplace("x" + std::to_string(t),
                          Tensor::from_f32({1, kFeatures}, uniform_signed(rng, kFeatures, 1.0f)));
        }
        bundle.inputs.push_back(std::move(feeds));
    }
    return bundle;
}

std::vector<FixtureBundle> all_fixtures() {
    std::vector<FixtureBundle> out;
    out.push_back(tiny_mlp());
    out.push_back(tiny_cnn());
    out.push_back(tiny_regressor());
    out.push_back(tiny_rnn());
    return out;
}

void write_fixture_set(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const FixtureBundle& bundle : all_fixtures()) {
        const std::string base = (fs::path(dir) / bundle.name).string();
        save_model(bundle.graph, base + ".gfi", base + ".gfiw");
        for (size_t k = 0; k < bundle.inputs.size(); ++k) {
            save_feeds(base + ".in" + std::to_string(k) + ".gfiw", bundle.inputs[k]);
        }
    }
    std::ofstream cfg(fs::path(dir) / "sample-config.yaml", std::ios::trunc);
    cfg << "# Sample fault injection campaign configuration\n"
           "Seed: 1000\n"
           "ScalarFaultType: bitFlip-element\n"
           "TensorFaultType: bitFlip-element\n"
           "Ops:\n"
           "  - ALL = 1.0\n"
           "SkipCount: 0\n"
           "InjectMode: \"errorRate\"\n";
}

} // namespace graphfi::fixtures
