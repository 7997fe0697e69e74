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

#include "agony/prune.hpp"

#include <stdexcept>
#include <tuple>
#include <utility>

namespace agony {

PruneTable build_prune_table(const LabelTree& tree, int k) {
    if (k < 1) throw std::invalid_argument("max leaves must be at least 1");
    if (!tree.has_gains())
        throw std::invalid_argument(
            "tree has splits without recorded gains; re-run greedy to obtain a prunable tree");

    PruneTable table;
    table.max_leaves = k;
    const auto width = static_cast<std::size_t>(k) + 1;
    table.opt.assign(tree.size(), std::vector<double>(width, 0.0));
    table.choice.assign(tree.size(), std::vector<int>(width, 0));

    // Children before parents.
    std::vector<std::pair<std::int32_t, bool>> stack{{tree.root(), false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        const auto& nd = tree.node(id);
        if (nd.is_leaf()) continue;
        if (!expanded) {
            stack.push_back({id, true});
            stack.push_back({nd.right, false});
            stack.push_back({nd.left, false});
            continue;
        }
        auto& opt = table.opt[static_cast<std::size_t>(id)];
        auto& choice = table.choice[static_cast<std::size_t>(id)];
        const auto& lo = table.opt[static_cast<std::size_t>(nd.left)];
        const auto& ro = table.opt[static_cast<std::size_t>(nd.right)];
        for (int h = 2; h <= k; ++h) {
            int best_l = 1;
            double best = lo[1] + ro[static_cast<std::size_t>(h - 1)];
            for (int l = 2; l <= h - 1; ++l) {
                double v = lo[static_cast<std::size_t>(l)] + ro[static_cast<std::size_t>(h - l)];
                if (v < best) {
                    best = v;
                    best_l = l;
                }
            }
            opt[static_cast<std::size_t>(h)] = *nd.gain + best;
            choice[static_cast<std::size_t>(h)] = best_l;
        }
    }
    return table;
}

LabelTree prune(const LabelTree& tree, std::optional<int> k) {
    if (k && *k < 1) throw std::invalid_argument("max leaves must be at least 1");
    if (!k || static_cast<std::size_t>(*k) >= tree.leaf_count()) return tree;

    PruneTable table = build_prune_table(tree, *k);

    LabelTree out;
    // (source node, budget, target leaf in `out`)
    std::vector<std::tuple<std::int32_t, int, std::int32_t>> work{{tree.root(), *k, out.root()}};
    while (!work.empty()) {
        auto [id, budget, target] = work.back();
        work.pop_back();
        const auto& nd = tree.node(id);
        if (nd.is_leaf() || budget < 2) continue;
        int left_budget = table.choice[static_cast<std::size_t>(id)][static_cast<std::size_t>(budget)];
        auto [l, r] = out.split(target, nd.label, nd.criterion, nd.gain);
        work.emplace_back(nd.right, budget - left_budget, r);
        work.emplace_back(nd.left, left_budget, l);
    }
    return out;
}

}  // namespace agony
