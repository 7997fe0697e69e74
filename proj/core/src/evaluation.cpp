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

#include "agony/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace agony {

// ---------------------------------------------------------------------------
// Kendall tau-b

namespace {

std::int64_t pairs(std::int64_t count) { return count * (count - 1) / 2; }

/// Inversions of `values`, sorting it as a side effect.
std::int64_t count_inversions(std::vector<std::int32_t>& values) {
    const std::size_t n = values.size();
    std::vector<std::int32_t> buffer(n);
    std::int64_t swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            std::size_t mid = std::min(lo + width, n);
            std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (values[j] < values[i]) {
                    swaps += static_cast<std::int64_t>(mid - i);
                    buffer[k++] = values[j++];
                } else {
                    buffer[k++] = values[i++];
                }
            }
            while (i < mid) buffer[k++] = values[i++];
            while (j < hi) buffer[k++] = values[j++];
        }
        values.swap(buffer);
    }
    return swaps;
}

}  // namespace

TauResult kendall_tau(std::span<const std::int32_t> first, std::span<const std::int32_t> second) {
    if (first.size() != second.size())
        throw std::invalid_argument("rankings cover different numbers of nodes");
    const std::size_t n = first.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return first[a] != first[b] ? first[a] < first[b] : second[a] < second[b];
    });

    std::int64_t tied_x = 0, tied_xy = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && first[order[j]] == first[order[i]]) ++j;
        tied_x += pairs(static_cast<std::int64_t>(j - i));
        for (std::size_t a = i; a < j;) {
            std::size_t b = a;
            while (b < j && second[order[b]] == second[order[a]]) ++b;
            tied_xy += pairs(static_cast<std::int64_t>(b - a));
            a = b;
        }
        i = j;
    }

    std::vector<std::int32_t> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = second[order[i]];
    const std::int64_t discordant = count_inversions(ys);

    std::int64_t tied_y = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && ys[j] == ys[i]) ++j;
        tied_y += pairs(static_cast<std::int64_t>(j - i));
        i = j;
    }

    const std::int64_t total = pairs(static_cast<std::int64_t>(n));
    TauResult r;
    r.discordant = discordant;
    r.concordant = total - tied_x - tied_y + tied_xy - discordant;
    r.ties_both = tied_xy;
    r.ties_first = tied_x - tied_xy;
    r.ties_second = tied_y - tied_xy;
    const auto norm_x = static_cast<double>(total - tied_x);
    const auto norm_y = static_cast<double>(total - tied_y);
    if (norm_x <= 0.0 || norm_y <= 0.0) {
        r.defined = false;
        r.tau = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.tau = static_cast<double>(r.concordant - r.discordant) / std::sqrt(norm_x * norm_y);
    }
    return r;
}

TauResult kendall_tau(const RankAssignment& first, const RankAssignment& second) {
    return kendall_tau(first.values(), second.values());
}

TauResult kendall_tau(const std::map<std::string, std::int32_t>& first,
                      const std::map<std::string, std::int32_t>& second) {
    if (first.size() != second.size())
        throw std::invalid_argument("rankings cover different node sets");
    std::vector<std::int32_t> a, b;
    a.reserve(first.size());
    b.reserve(first.size());
    for (auto it = first.begin(), jt = second.begin(); it != first.end(); ++it, ++jt) {
        if (it->first != jt->first)
            throw std::invalid_argument("rankings cover different node sets (first mismatch at '" +
                                        std::min(it->first, jt->first) + "')");
        a.push_back(it->second);
        b.push_back(jt->second);
    }
    return kendall_tau(a, b);
}

nlohmann::json to_json(const TauResult& r) {
    nlohmann::json j;
    j["tau"] = r.defined ? nlohmann::json(r.tau) : nlohmann::json(nullptr);
    j["concordant"] = r.concordant;
    j["discordant"] = r.discordant;
    j["ties"] = r.ties();
    return j;
}

// ---------------------------------------------------------------------------
// Collapse

LabeledGraph collapse_by_label(const LabeledGraph& g) {
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (g.labels(v).size() != 1)
            throw std::invalid_argument("node '" + g.node_name(v) + "' has " +
                                        std::to_string(g.labels(v).size()) +
                                        " labels; collapse needs exactly one");
    LabeledGraph::Builder builder;
    for (LabelId t = 0; t < g.num_labels(); ++t) builder.add_label(g.label_name(t), g.label_name(t));
    for (const auto& e : g.edges())
        builder.add_edge(g.label_name(g.labels(e.source)[0]), g.label_name(g.labels(e.target)[0]),
                         e.weight);
    return builder.build();
}

// ---------------------------------------------------------------------------
// Exhaustive search

namespace {

constexpr int kMaxSearchLabels = 4;
constexpr int kMaxSearchLeaves = 5;
constexpr std::size_t kMasks = 1u << kMaxSearchLabels;

struct Shape {
    // Preorder; children[i] = {-1, -1} for leaves.
    std::vector<std::array<int, 2>> children;
    std::vector<int> internals;
    // Position of each internal node within `internals`.
    std::vector<int> slot;
    std::vector<int> leaf_rank;
};

void shapes_of(int leaves, std::vector<std::string>& out) {
    if (leaves == 1) {
        out.push_back("0");
        return;
    }
    for (int l = 1; l < leaves; ++l) {
        std::vector<std::string> left, right;
        shapes_of(l, left);
        shapes_of(leaves - l, right);
        for (const auto& a : left)
            for (const auto& b : right) out.push_back("1" + a + b);
    }
}

Shape decode(const std::string& code) {
    Shape s;
    s.children.assign(code.size(), {-1, -1});
    s.leaf_rank.assign(code.size(), 0);
    s.slot.assign(code.size(), -1);
    std::size_t pos = 0;
    int rank = 0;
    // Returns the preorder index of the subtree that starts at `pos`.
    auto parse = [&](auto&& self) -> int {
        int me = static_cast<int>(pos++);
        if (code[static_cast<std::size_t>(me)] == '1') {
            s.slot[static_cast<std::size_t>(me)] = static_cast<int>(s.internals.size());
            s.internals.push_back(me);
            int l = self(self);
            int r = self(self);
            s.children[static_cast<std::size_t>(me)] = {l, r};
        } else {
            s.leaf_rank[static_cast<std::size_t>(me)] = ++rank;
        }
        return me;
    };
    parse(parse);
    return s;
}

}  // namespace

SearchResult exhaustive_tree_search(const LabeledGraph& g, int max_leaves) {
    if (g.num_labels() > kMaxSearchLabels)
        throw std::invalid_argument("exhaustive search supports at most 4 labels");
    if (max_leaves < 1 || max_leaves > kMaxSearchLeaves)
        throw std::invalid_argument("exhaustive search supports 1..5 leaves");

    // Collapse nodes by label set.
    std::vector<std::uint32_t> mask(g.num_nodes(), 0);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        for (LabelId t : g.labels(v)) mask[v] |= 1u << t;
    std::array<std::array<double, kMasks>, kMasks> weight{};
    for (const auto& e : g.edges()) weight[mask[e.source]][mask[e.target]] += e.weight;

    const int labels = static_cast<int>(g.num_labels());
    const int choices = 2 * labels;
    const int leaf_cap = labels == 0 ? 1 : max_leaves;

    double best_score = std::numeric_limits<double>::infinity();
    std::string best_code;
    std::vector<int> best_assign;

    std::array<int, kMasks> rank_of_mask{};
    for (int leaves = 1; leaves <= leaf_cap; ++leaves) {
        std::vector<std::string> codes;
        shapes_of(leaves, codes);
        for (const auto& code : codes) {
            Shape shape = decode(code);
            const std::size_t internal = shape.internals.size();
            std::vector<int> assign(internal, 0);
            while (true) {
                // Label = choice / 2, criterion = (choice % 2 == 0).
                for (std::uint32_t msk = 0; msk < kMasks; ++msk) {
                    int at = 0;
                    while (shape.children[static_cast<std::size_t>(at)][0] >= 0) {
                        int choice = assign[static_cast<std::size_t>(
                            shape.slot[static_cast<std::size_t>(at)])];
                        bool has = (msk >> (choice / 2)) & 1u;
                        bool criterion = choice % 2 == 0;
                        at = shape.children[static_cast<std::size_t>(at)][has == criterion ? 0 : 1];
                    }
                    rank_of_mask[msk] = shape.leaf_rank[static_cast<std::size_t>(at)];
                }
                double score = 0.0;
                for (std::size_t a = 0; a < kMasks; ++a)
                    for (std::size_t b = 0; b < kMasks; ++b)
                        if (weight[a][b] != 0.0)
                            score += weight[a][b] * penalty(rank_of_mask[a] - rank_of_mask[b]);
                if (score < best_score) {
                    best_score = score;
                    best_code = code;
                    best_assign = assign;
                }
                // Next assignment in mixed radix `choices`.
                std::size_t d = 0;
                while (d < internal && ++assign[d] == choices) assign[d++] = 0;
                if (d == internal) break;
            }
        }
    }

    SearchResult result;
    result.score = best_score;
    Shape shape = decode(best_code);
    std::vector<std::int32_t> target(best_code.size(), LabelTree::kNone);
    target[0] = result.tree.root();
    for (std::size_t slot = 0; slot < shape.internals.size(); ++slot) {
        // Preorder guarantees a parent is placed before its children.
        auto at = static_cast<std::size_t>(shape.internals[slot]);
        int choice = best_assign[slot];
        auto [l, r] = result.tree.split(target[at], g.label_name(static_cast<LabelId>(choice / 2)),
                                        choice % 2 == 0);
        target[static_cast<std::size_t>(shape.children[at][0])] = l;
        target[static_cast<std::size_t>(shape.children[at][1])] = r;
    }
    return result;
}

}  // namespace agony
