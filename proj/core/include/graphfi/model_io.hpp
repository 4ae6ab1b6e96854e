// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/graph.hpp"

#include <string>
#include <utility>
#include <vector>

namespace graphfi {

/// Graph document (.gfi): JSON with nodes {id, op, inputs, attrs, injectable}
/// and the output list. Weights blob (.gfiw): binary little-endian tensor
/// store, CRC32-trailed; the same container carries input feed bundles.
/// Both formats are documented in the README and are bit-exact: loading a
/// saved model reproduces the graph structure and bit-identical constants.

Graph load_model(const std::string& graph_path, const std::string& weights_path);
void save_model(const Graph& g, const std::string& graph_path, const std::string& weights_path);

std::string graph_to_json(const Graph& g);
GraphDef graph_def_from_json(const std::string& text);

/// Tensor store, ordered. save_tensors writes atomically (temp file +
/// rename); load_tensors verifies the CRC32 trailer and rejects trailing
/// bytes.
void save_tensors(const std::string& path,
                  const std::vector<std::pair<std::string, Tensor>>& entries);
std::vector<std::pair<std::string, Tensor>> load_tensors(const std::string& path);

/// Feed bundle: a tensor store keyed by placeholder id.
Feeds load_feeds(const std::string& path);
void save_feeds(const std::string& path, const Feeds& feeds);

} // namespace graphfi
