// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/graph.hpp"

#include <string>
#include <vector>

namespace graphfi::fixtures {

/// A small pre-built network with ten deterministic input feed bundles.
/// Weights are authored in code from fixed constants and a pinned RNG, so
/// every build of the library produces bit-identical fixtures.
struct FixtureBundle {
    std::string name;
    Graph graph;
    std::vector<Feeds> inputs; // ten feed bundles
};

/// 16-feature, 10-class template-matching classifier:
/// Placeholder -> MatMul -> BiasAdd -> ReLU -> MatMul -> BiasAdd -> Softmax -> ArgMax.
FixtureBundle tiny_mlp();

/// 8x8 single-channel, 4-class pattern classifier:
/// Conv2D -> BiasAdd -> ReLU -> MaxPool -> Reshape -> MatMul -> BiasAdd -> Softmax -> ArgMax.
FixtureBundle tiny_cnn();

/// 4-feature regressor emulating a steering model; rank-0 F32 output.
FixtureBundle tiny_regressor();

/// 4-step explicitly unrolled recurrent classifier over 8-feature steps.
FixtureBundle tiny_rnn();

std::vector<FixtureBundle> all_fixtures();

/// Writes every fixture as a model bundle plus its ten input bundles:
///   <dir>/<name>.gfi, <dir>/<name>.gfiw, <dir>/<name>.in<k>.gfiw
/// plus a ready-to-use sample campaign config at <dir>/sample-config.yaml.
void write_fixture_set(const std::string& dir);

} // namespace graphfi::fixtures
