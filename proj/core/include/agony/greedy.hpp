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
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agony/graph.hpp"
#include "agony/label_tree.hpp"

/**
 * Greedy label-tree construction with incremental agony bookkeeping.
 *
 * For a leaf with node set V(a), let U be the nodes ranked strictly before it
 * and W the nodes ranked strictly after it. The leaf keeps
 *
 *   back          = w(E(W, U))
 *   inback_total  = sum over v in V(a) of inback[v],  inback[v]  = w(E(W, v))
 *   outback_total = sum over v in V(a) of outback[v], outback[v] = w(E(v, U))
 *
 * and every member v keeps diff[v] = w(E(W + V(a), v)) - w(E(v, U + V(a))).
 * With these, splitting V(a) into a left part Y1 and right part Y2 changes
 * the agony by
 *
 *   back + outback_total + sum_{Y1} diff  ==  back + inback_total - sum_{Y2} diff
 *
 * so a candidate (t, c) costs O(|V(a, t)|) to evaluate. Splits consume the
 * cross edges between the two children, so each edge is touched once per
 * tree level it survives.
 */
namespace agony {

struct SplitCandidate {
    LabelId label = 0;
    bool criterion = true;
    double gain = 0.0;

    friend bool operator==(const SplitCandidate&, const SplitCandidate&) = default;
};

struct LeafState {
    std::vector<NodeId> members;
    std::unordered_map<LabelId, std::vector<NodeId>> labeldic;
    double back = 0.0;
    double inback_total = 0.0;
    double outback_total = 0.0;
    /// Live in+out degree summed over members.
    std::int64_t degree_sum = 0;
    /// Identifies the leaf in SplitWorkspace::leaf_tag.
    std::uint32_t tag = 0;
};

/// Per-node counters and the consumable adjacency shared by all leaves of
/// one greedy run.
class SplitWorkspace {
public:
    explicit SplitWorkspace(const LabeledGraph& g);

    const LabeledGraph& graph() const noexcept { return *graph_; }

    double inback(NodeId v) const { return inback_[v]; }
    double outback(NodeId v) const { return outback_[v]; }
    double diff(NodeId v) const { return diff_[v]; }
    std::uint32_t leaf_tag(NodeId v) const { return tag_[v]; }
    /// Live (not yet consumed) in+out degree.
    std::int64_t live_degree(NodeId v) const;
    std::size_t live_edge_count() const noexcept { return live_edges_; }

private:
    friend LeafState init_root(SplitWorkspace& ws);
    friend std::pair<LeafState, LeafState> construct(LeafState&& alpha, SplitWorkspace& ws,
                                                     LabelId t, bool c);

    void remove_edge(std::uint32_t e);
    std::size_t label_slot(NodeId v, LabelId t) const;

    const LabeledGraph* graph_;
    std::vector<double> inback_, outback_, diff_;
    std::vector<std::uint32_t> tag_;
    std::vector<std::uint32_t> member_slot_;
    // Position of (v, label) inside its leaf's labeldic vector, indexed by
    // the node-label pair offset.
    std::vector<std::size_t> label_offsets_;
    std::vector<std::uint32_t> labeldic_slot_;

    // Live edges per node are a prefix of each CSR segment, so deletion is a
    // swap with the last live entry.
    std::vector<std::uint32_t> out_begin_, out_live_, in_begin_, in_live_;
    std::vector<std::uint32_t> out_edges_, in_edges_;
    std::vector<std::uint32_t> pos_out_, pos_in_;
    std::size_t live_edges_ = 0;
    std::uint32_t next_tag_ = 1;
};

/// Root leaf: all nodes, U = W = empty.
LeafState init_root(SplitWorkspace& ws);

/// Evaluates label `t` on `state` with both criteria. Empty when `t` covers
/// none or all of the members.
std::optional<SplitCandidate> test_split(const LeafState& state, const SplitWorkspace& ws,
                                         LabelId t);

/// Minimal-gain candidate if its gain is strictly negative. Ties go to the
/// smaller label id, then to criterion true.
std::optional<SplitCandidate> best_split(const LeafState& state, const SplitWorkspace& ws);

/// Splits `alpha`: the left child takes V(alpha, t) when `c` is true and the
/// complement otherwise. Throws std::invalid_argument on a degenerate split.
std::pair<LeafState, LeafState> construct(LeafState&& alpha, SplitWorkspace& ws, LabelId t,
                                          bool c);

/**
 * Stepwise driver over the greedy recursion. Leaves are processed depth
 * first, left child before right, from an explicit work stack.
 */
class GreedyRanker {
public:
    struct OpenLeaf {
        const LeafState* state;
        std::int32_t tree_node;
    };

    explicit GreedyRanker(const LabeledGraph& g);

    bool done() const noexcept { return pending_.empty(); }

    /// Processes the next pending leaf. Returns the executed split, or
    /// nothing when that leaf is final.
    std::optional<SplitCandidate> step();

    /// Runs to completion and returns the tree.
    const LabelTree& run();

    /// Current (possibly partial) tree; leaf ranks are always up to date.
    const LabelTree& tree() const noexcept { return tree_; }
    /// Leaves still awaiting processing.
    std::vector<OpenLeaf> open_leaves() const;
    const SplitWorkspace& workspace() const noexcept { return ws_; }
    std::size_t splits() const noexcept { return splits_; }

private:
    struct Pending {
        LeafState state;
        std::int32_t tree_node;
    };

    const LabeledGraph* graph_;
    SplitWorkspace ws_;
    LabelTree tree_;
    std::vector<Pending> pending_;
    std::size_t splits_ = 0;
};

LabelTree greedy(const LabeledGraph& g);

}  // namespace agony
