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
#include <vector>

#include "agony/label_tree.hpp"

namespace agony {

/// opt[node][h]: best total recorded gain in the subtree of `node` when it
/// may keep at most h leaves (h = 1..k; index 0 unused). `choice[node][h]`
/// is the number of leaves handed to the left child.
struct PruneTable {
    int max_leaves = 1;
    std::vector<std::vector<double>> opt;
    std::vector<std::vector<int>> choice;

    double root_gain(int h) const { return opt.at(0).at(static_cast<std::size_t>(h)); }
};

/// Throws std::invalid_argument if k < 1 or a split has no recorded gain.
PruneTable build_prune_table(const LabelTree& tree, int k);

/// Best subtree with at most k leaves; no limit when k is empty. Collapsed
/// branches become single leaves and ranks are renumbered.
LabelTree prune(const LabelTree& tree, std::optional<int> k);

}  // namespace agony
