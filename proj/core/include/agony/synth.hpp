/*
Copyright 2026 The agony-tree Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "agony/graph.hpp"
#include "agony/label_tree.hpp"

namespace agony {

/// Planted-hierarchy generator parameters.
struct SynthConfig {
    std::size_t nodes = 1000;
    /// Pairs sampled before aggregation; floor(edges / (ranks - 1)) per rank pair.
    std::size_t edges = 2000;
    int ranks = 5;
    /// Probability that a sampled pair points from the lower to the higher rank.
    double forward_prob = 0.9;
    /// Fraction of nodes that receive one extra, wrong rank label.
    double false_label_frac = 0.0;
    /// Fraction of nodes that receive one label from the noise universe.
    double noise_label_frac = 0.0;
    int noise_universe_size = 100;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument describing the first bad field.
    void validate() const;
};

nlohmann::json to_json(const SynthConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
SynthConfig synth_config_from_json(const nlohmann::json& j);

struct SynthResult {
    LabeledGraph graph;
    RankAssignment truth;
    std::size_t sampled_pairs = 0;
    std::size_t forward_pairs = 0;
    int rank_attempts = 1;
};

/**
 * Nodes get uniform ranks 1..h (redrawn until no rank is empty, at most 100
 * tries) and the label of their rank. floor(theta * n) distinct nodes then
 * gain one other rank label, and an independent floor(mu * n) subset gains
 * one noise label. Pairs are drawn between adjacent ranks only and oriented
 * forward with probability eta; repeated pairs merge by weight.
 *
 * Node names are "v" plus a zero-padded index, rank labels "L" plus the
 * zero-padded rank, noise labels "N" plus a zero-padded index, so name
 * order equals numeric order.
 */
SynthResult generate(const SynthConfig& cfg);

/// Writes edges.tsv, labels.tsv, true_ranks.tsv and config.json into `dir`.
void write_dataset(const SynthResult& data, const SynthConfig& cfg,
                   const std::filesystem::path& dir);

}  // namespace agony
