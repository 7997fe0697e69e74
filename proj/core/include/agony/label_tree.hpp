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
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "agony/graph.hpp"

namespace agony {

/**
 * Ordered full binary tree that routes label sets to ranks.
 *
 * An internal node holds (label, criterion): a label set X goes left when
 * `(label in X) == criterion`, right otherwise. Leaves, read left to right,
 * are ranks 1..L. Labels are stored by name so a tree can be applied to any
 * graph; labels unknown to the graph never match.
 *
 * Nodes live in a flat arena; index 0 is the root.
 */
class LabelTree {
public:
    static constexpr std::int32_t kNone = -1;

    struct Node {
        std::string label;
        bool criterion = true;
        std::int32_t left = kNone;
        std::int32_t right = kNone;
        std::int32_t parent = kNone;
        std::optional<double> gain;
        std::int32_t rank = 1;  // meaningful for leaves only

        bool is_leaf() const noexcept { return left == kNone; }
    };

    /// Single-leaf tree.
    LabelTree();

    std::int32_t root() const noexcept { return 0; }
    const Node& node(std::int32_t id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t leaf_count() const noexcept { return leaf_count_; }
    /// Length of the longest root-to-leaf path; 0 for a single leaf.
    int depth() const;

    /// Turns `leaf` into an internal node with two fresh leaves and renumbers
    /// the ranks. Returns the ids of the new (left, right) leaves.
    std::pair<std::int32_t, std::int32_t> split(std::int32_t leaf, std::string label,
                                                bool criterion,
                                                std::optional<double> gain = std::nullopt);

    /// Negates the criterion of an internal node and swaps its children.
    void flip(std::int32_t internal);

    /// Leaf ids in rank order.
    std::vector<std::int32_t> leaves() const;

    /// True when every internal node carries a recorded gain.
    bool has_gains() const;

    friend bool operator==(const LabelTree&, const LabelTree&);

private:
    void renumber();

    std::vector<Node> nodes_;
    std::size_t leaf_count_ = 1;
};

/// Per-node rank, indexed by NodeId. Ranks are 1-based; 0 marks a missing rank.
class RankAssignment {
public:
    RankAssignment() = default;
    explicit RankAssignment(std::size_t n) : ranks_(n, 0) {}
    explicit RankAssignment(std::vector<std::int32_t> ranks) : ranks_(std::move(ranks)) {}

    std::size_t size() const noexcept { return ranks_.size(); }
    std::int32_t operator[](NodeId v) const { return ranks_[v]; }
    std::int32_t& operator[](NodeId v) { return ranks_[v]; }
    std::span<const std::int32_t> values() const noexcept { return ranks_; }
    std::int32_t max_rank() const;

    friend bool operator==(const RankAssignment&, const RankAssignment&) = default;

private:
    std::vector<std::int32_t> ranks_;
};

/// max(0, d + 1).
inline double penalty(std::int64_t d) { return d + 1 > 0 ? static_cast<double>(d + 1) : 0.0; }

/// Tree with its labels resolved against one graph's label ids.
class TreeRouter {
public:
    TreeRouter(const LabelTree& tree, const LabeledGraph& g);

    /// `labels` must be sorted ascending.
    std::int32_t rank_of(std::span<const LabelId> labels) const;

private:
    struct Step {
        std::optional<LabelId> label;
        bool criterion;
        std::int32_t left, right;
        std::int32_t rank;
    };
    std::vector<Step> steps_;
};

std::int32_t rank_of(const LabelTree& tree, const std::set<std::string>& labels);
std::int32_t rank_of(const LabelTree& tree, const LabeledGraph& g, std::span<const LabelId> labels);

RankAssignment assign_ranks(const LabelTree& tree, const LabeledGraph& g);

/// Naive O(m) agony of the ranks induced by `tree`.
double score_tree(const LabelTree& tree, const LabeledGraph& g);

/// Throws std::invalid_argument when a node has no rank.
double score_ranks(const RankAssignment& ranks, const LabeledGraph& g);

nlohmann::json tree_to_json(const LabelTree& tree);
/// Throws std::invalid_argument on malformed input.
LabelTree tree_from_json(const nlohmann::json& j);
std::string export_json(const LabelTree& tree);
LabelTree import_json(const std::string& text);

/// Graphviz rendering: solid edge = criterion-matching branch, dashed = other.
std::string export_dot(const LabelTree& tree);

/// "node TAB rank" lines sorted by node id.
void write_ranks(const RankAssignment& ranks, const LabeledGraph& g, std::ostream& out);
/// Reads "node TAB rank" lines keyed by node name.
std::map<std::string, std::int32_t> read_ranks(std::istream& in, const std::string& source = "ranks");

}  // namespace agony
