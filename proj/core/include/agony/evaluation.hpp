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

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include <json.hpp>

#include "agony/graph.hpp"
#include "agony/label_tree.hpp"

namespace agony {

/// Kendall tau-b with the pair counts it came from.
struct TauResult {
    /// NaN when undefined.
    double tau = 0.0;
    /// False when either ranking is constant (zero normalizer).
    bool defined = true;
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    /// Pairs tied in the first ranking only, the second only, and in both.
    std::int64_t ties_first = 0;
    std::int64_t ties_second = 0;
    std::int64_t ties_both = 0;

    std::int64_t ties() const noexcept { return ties_first + ties_second + ties_both; }
};

/// O(n log n) tau-b (Knight's merge-sort count). Throws std::invalid_argument
/// on length mismatch.
TauResult kendall_tau(std::span<const std::int32_t> first, std::span<const std::int32_t> second);
TauResult kendall_tau(const RankAssignment& first, const RankAssignment& second);
/// Aligns by node name; throws when the node sets differ.
TauResult kendall_tau(const std::map<std::string, std::int32_t>& first,
                      const std::map<std::string, std::int32_t>& second);

/// {"tau", "concordant", "discordant", "ties"}; tau is null when undefined.
nlohmann::json to_json(const TauResult& r);

/// Quotient graph with one node per label; requires exactly one label per node.
LabeledGraph collapse_by_label(const LabeledGraph& g);

struct SearchResult {
    LabelTree tree;
    double score = 0.0;
};

/// Exhaustive optimum over all ordered label trees with at most
/// `max_leaves` leaves. Limited to 4 labels and 5 leaves.
SearchResult exhaustive_tree_search(const LabeledGraph& g, int max_leaves);

}  // namespace agony
