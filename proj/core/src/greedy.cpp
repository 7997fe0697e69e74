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

#include "agony/greedy.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace agony {

SplitWorkspace::SplitWorkspace(const LabeledGraph& g)
    : graph_(&g),
      inback_(g.num_nodes(), 0.0),
      outback_(g.num_nodes(), 0.0),
      diff_(g.num_nodes(), 0.0),
      tag_(g.num_nodes(), 0),
      member_slot_(g.num_nodes(), 0),
      label_offsets_(g.num_nodes() + 1, 0),
      labeldic_slot_(g.label_pair_count(), 0) {
    const std::size_t n = g.num_nodes();
    for (NodeId v = 0; v < n; ++v) label_offsets_[v + 1] = label_offsets_[v] + g.labels(v).size();

    const auto edges = g.edges();
    const std::size_t m = edges.size();
    out_begin_.assign(n + 1, 0);
    in_begin_.assign(n + 1, 0);
    for (const auto& e : edges) {
        ++out_begin_[e.source + 1];
        ++in_begin_[e.target + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
        out_begin_[v + 1] += out_begin_[v];
        in_begin_[v + 1] += in_begin_[v];
    }
    out_live_.assign(n, 0);
    in_live_.assign(n, 0);
    out_edges_.resize(m);
    in_edges_.resize(m);
    pos_out_.resize(m);
    pos_in_.resize(m);
    for (std::uint32_t id = 0; id < m; ++id) {
        const auto& e = edges[id];
        std::uint32_t po = out_begin_[e.source] + out_live_[e.source]++;
        std::uint32_t pi = in_begin_[e.target] + in_live_[e.target]++;
        out_edges_[po] = id;
        in_edges_[pi] = id;
        pos_out_[id] = po;
        pos_in_[id] = pi;
    }
    live_edges_ = m;
}

std::int64_t SplitWorkspace::live_degree(NodeId v) const {
    return static_cast<std::int64_t>(out_live_[v]) + in_live_[v];
}

void SplitWorkspace::remove_edge(std::uint32_t id) {
    const auto& e = graph_->edges()[id];

    std::uint32_t p = pos_out_[id];
    std::uint32_t last = out_begin_[e.source] + --out_live_[e.source];
    std::uint32_t moved = out_edges_[last];
    out_edges_[p] = moved;
    pos_out_[moved] = p;
    out_edges_[last] = id;
    pos_out_[id] = last;

    p = pos_in_[id];
    last = in_begin_[e.target] + --in_live_[e.target];
    moved = in_edges_[last];
    in_edges_[p] = moved;
    pos_in_[moved] = p;
    in_edges_[last] = id;
    pos_in_[id] = last;

    --live_edges_;
}

std::size_t SplitWorkspace::label_slot(NodeId v, LabelId t) const {
    auto ls = graph_->labels(v);
    auto it = std::lower_bound(ls.begin(), ls.end(), t);
    return label_offsets_[v] + static_cast<std::size_t>(it - ls.begin());
}

LeafState init_root(SplitWorkspace& ws) {
    const LabeledGraph& g = ws.graph();
    LeafState root;
    root.tag = ws.next_tag_++;
    root.members.resize(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        root.members[v] = v;
        ws.member_slot_[v] = v;
        ws.tag_[v] = root.tag;
        ws.inback_[v] = 0.0;
        ws.outback_[v] = 0.0;
        ws.diff_[v] = g.weighted_in_degree(v) - g.weighted_out_degree(v);
        root.degree_sum += ws.live_degree(v);
    }
    for (LabelId t = 0; t < g.num_labels(); ++t) {
        auto holders = g.nodes_with_label(t);
        if (holders.empty()) continue;
        auto& list = root.labeldic[t];
        list.assign(holders.begin(), holders.end());
        for (std::uint32_t i = 0; i < list.size(); ++i)
            ws.labeldic_slot_[ws.label_slot(list[i], t)] = i;
    }
    return root;
}

std::optional<SplitCandidate> test_split(const LeafState& state, const SplitWorkspace& ws,
                                         LabelId t) {
    auto it = state.labeldic.find(t);
    if (it == state.labeldic.end() || it->second.empty() ||
        it->second.size() >= state.members.size())
        return std::nullopt;
    double holders_diff = 0.0;
    for (NodeId y : it->second) holders_diff += ws.diff(y);
    // Holders on the left (criterion true) vs holders on the right.
    const double left = state.back + state.outback_total + holders_diff;
    const double right = state.back + state.inback_total - holders_diff;
    return SplitCandidate{t, left <= right, std::min(left, right)};
}

std::optional<SplitCandidate> best_split(const LeafState& state, const SplitWorkspace& ws) {
    std::optional<SplitCandidate> best;
    for (const auto& [t, holders] : state.labeldic) {
        auto cand = test_split(state, ws, t);
        if (!cand) continue;
        if (!best || std::tie(cand->gain, cand->label) < std::tie(best->gain, best->label))
            best = cand;
    }
    if (best && best->gain < 0.0) return best;
    return std::nullopt;
}

std::pair<LeafState, LeafState> construct(LeafState&& alpha, SplitWorkspace& ws, LabelId t,
                                          bool c) {
    const LabeledGraph& g = ws.graph();
    auto found = alpha.labeldic.find(t);
    if (found == alpha.labeldic.end() || found->second.empty() ||
        found->second.size() >= alpha.members.size())
        throw std::invalid_argument("degenerate split on label '" + g.label_name(t) + "'");

    const double back = alpha.back;
    const double inback_total = alpha.inback_total;
    const double outback_total = alpha.outback_total;

    // The holders of t move to a fresh leaf; the rest inherit alpha's
    // containers and tag.
    LeafState moved;
    moved.tag = ws.next_tag_++;
    moved.members = found->second;
    for (std::uint32_t i = 0; i < moved.members.size(); ++i) {
        NodeId v = moved.members[i];
        std::uint32_t slot = ws.member_slot_[v];
        NodeId last = alpha.members.back();
        alpha.members[slot] = last;
        ws.member_slot_[last] = slot;
        alpha.members.pop_back();
        ws.member_slot_[v] = i;
        ws.tag_[v] = moved.tag;
        moved.degree_sum += ws.live_degree(v);

        for (LabelId s : g.labels(v)) {
            auto entry = alpha.labeldic.find(s);
            auto& list = entry->second;
            std::size_t vs = ws.label_slot(v, s);
            std::uint32_t pos = ws.labeldic_slot_[vs];
            NodeId tail = list.back();
            list[pos] = tail;
            ws.labeldic_slot_[ws.label_slot(tail, s)] = pos;
            list.pop_back();
            if (list.empty()) alpha.labeldic.erase(entry);

            auto& dst = moved.labeldic[s];
            ws.labeldic_slot_[vs] = static_cast<std::uint32_t>(dst.size());
            dst.push_back(v);
        }
    }
    alpha.degree_sum -= moved.degree_sum;

    std::pair<LeafState, LeafState> children;
    if (c) {
        children = {std::move(moved), std::move(alpha)};
    } else {
        children = {std::move(alpha), std::move(moved)};
    }
    LeafState& beta = children.first;
    LeafState& gamma = children.second;

    auto cost = [](const LeafState& s) {
        return 2 * static_cast<std::int64_t>(s.members.size()) + s.degree_sum;
    };
    const bool walk_beta = cost(beta) <= cost(gamma);

    if (walk_beta) {
        beta.inback_total = beta.outback_total = 0.0;
        for (NodeId x : beta.members) {
            beta.inback_total += ws.inback_[x];
            beta.outback_total += ws.outback_[x];
        }
        gamma.inback_total = inback_total - beta.inback_total;
        gamma.outback_total = outback_total - beta.outback_total;
    } else {
        gamma.inback_total = gamma.outback_total = 0.0;
        for (NodeId z : gamma.members) {
            gamma.inback_total += ws.inback_[z];
            gamma.outback_total += ws.outback_[z];
        }
        beta.inback_total = inback_total - gamma.inback_total;
        beta.outback_total = outback_total - gamma.outback_total;
    }
    beta.back = back + gamma.outback_total;
    gamma.back = back + beta.inback_total;

    const auto edges = g.edges();
    // Cross edge z -> x with z right, x left: now backward.
    auto consume_backward = [&](std::uint32_t id) {
        const auto& e = edges[id];
        ws.inback_[e.target] += e.weight;
        beta.inback_total += e.weight;
        ws.outback_[e.source] += e.weight;
        gamma.outback_total += e.weight;
        ws.remove_edge(id);
        --beta.degree_sum;
        --gamma.degree_sum;
    };
    // Cross edge x -> z with x left, z right: now forward, so it leaves the
    // diff of both endpoints.
    auto consume_forward = [&](std::uint32_t id) {
        const auto& e = edges[id];
        ws.diff_[e.source] += e.weight;
        ws.diff_[e.target] -= e.weight;
        ws.remove_edge(id);
        --beta.degree_sum;
        --gamma.degree_sum;
    };

    const std::uint32_t other = walk_beta ? gamma.tag : beta.tag;
    for (NodeId v : walk_beta ? beta.members : gamma.members) {
        // Walk live prefixes backwards; removal swaps in an already-visited entry.
        for (std::uint32_t i = ws.in_live_[v]; i-- > 0;) {
            std::uint32_t id = ws.in_edges_[ws.in_begin_[v] + i];
            if (ws.tag_[edges[id].source] != other) continue;
            walk_beta ? consume_backward(id) : consume_forward(id);
        }
        for (std::uint32_t i = ws.out_live_[v]; i-- > 0;) {
            std::uint32_t id = ws.out_edges_[ws.out_begin_[v] + i];
            if (ws.tag_[edges[id].target] != other) continue;
            walk_beta ? consume_forward(id) : consume_backward(id);
        }
    }
    return children;
}

// ---------------------------------------------------------------------------

GreedyRanker::GreedyRanker(const LabeledGraph& g) : graph_(&g), ws_(g) {
    pending_.push_back({init_root(ws_), tree_.root()});
}

std::optional<SplitCandidate> GreedyRanker::step() {
    if (pending_.empty()) return std::nullopt;
    Pending current = std::move(pending_.back());
    pending_.pop_back();
    auto cand = best_split(current.state, ws_);
    if (!cand) return std::nullopt;

    auto [left_node, right_node] =
        tree_.split(current.tree_node, graph_->label_name(cand->label), cand->criterion, cand->gain);
    auto [left, right] = construct(std::move(current.state), ws_, cand->label, cand->criterion);
    pending_.push_back({std::move(right), right_node});
    pending_.push_back({std::move(left), left_node});
    ++splits_;
    return cand;
}

const LabelTree& GreedyRanker::run() {
    while (!done()) step();
    return tree_;
}

std::vector<GreedyRanker::OpenLeaf> GreedyRanker::open_leaves() const {
    std::vector<OpenLeaf> out;
    out.reserve(pending_.size());
    for (auto it = pending_.rbegin(); it != pending_.rend(); ++it)
        out.push_back({&it->state, it->tree_node});
    return out;
}

LabelTree greedy(const LabeledGraph& g) {
    GreedyRanker ranker(g);
    return ranker.run();
}

}  // namespace agony
