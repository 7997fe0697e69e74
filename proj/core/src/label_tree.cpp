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

#include "agony/label_tree.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace agony {

LabelTree::LabelTree() : nodes_(1) {}

int LabelTree::depth() const {
    int best = 0;
    std::vector<std::pair<std::int32_t, int>> stack{{root(), 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const Node& nd = nodes_[static_cast<std::size_t>(id)];
        if (nd.is_leaf()) {
            best = std::max(best, d);
        } else {
            stack.push_back({nd.left, d + 1});
            stack.push_back({nd.right, d + 1});
        }
    }
    return best;
}

std::pair<std::int32_t, std::int32_t> LabelTree::split(std::int32_t leaf, std::string label,
                                                       bool criterion,
                                                       std::optional<double> gain) {
    if (leaf < 0 || static_cast<std::size_t>(leaf) >= nodes_.size() || !nodes_[leaf].is_leaf())
        throw std::invalid_argument("split target is not a leaf");
    auto left = static_cast<std::int32_t>(nodes_.size());
    auto right = left + 1;
    Node l, r;
    l.parent = r.parent = leaf;
    nodes_.push_back(std::move(l));
    nodes_.push_back(std::move(r));
    Node& nd = nodes_[static_cast<std::size_t>(leaf)];
    nd.label = std::move(label);
    nd.criterion = criterion;
    nd.gain = gain;
    nd.left = left;
    nd.right = right;
    ++leaf_count_;
    renumber();
    return {left, right};
}

void LabelTree::flip(std::int32_t internal) {
    Node& nd = nodes_.at(static_cast<std::size_t>(internal));
    if (nd.is_leaf()) throw std::invalid_argument("cannot flip a leaf");
    nd.criterion = !nd.criterion;
    std::swap(nd.left, nd.right);
    renumber();
}

std::vector<std::int32_t> LabelTree::leaves() const {
    std::vector<std::int32_t> out;
    out.reserve(leaf_count_);
    std::vector<std::int32_t> stack{root()};
    while (!stack.empty()) {
        std::int32_t id = stack.back();
        stack.pop_back();
        const Node& nd = nodes_[static_cast<std::size_t>(id)];
        if (nd.is_leaf()) {
            out.push_back(id);
        } else {
            stack.push_back(nd.right);
            stack.push_back(nd.left);
        }
    }
    return out;
}

void LabelTree::renumber() {
    std::int32_t r = 0;
    for (std::int32_t id : leaves()) nodes_[static_cast<std::size_t>(id)].rank = ++r;
}

bool LabelTree::has_gains() const {
    return std::all_of(nodes_.begin(), nodes_.end(),
                       [](const Node& nd) { return nd.is_leaf() || nd.gain.has_value(); });
}

bool operator==(const LabelTree& a, const LabelTree& b) {
    std::vector<std::pair<std::int32_t, std::int32_t>> stack{{a.root(), b.root()}};
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        const auto& p = a.node(x);
        const auto& q = b.node(y);
        if (p.is_leaf() != q.is_leaf()) return false;
        if (p.is_leaf()) continue;
        if (p.label != q.label || p.criterion != q.criterion || p.gain != q.gain) return false;
        stack.push_back({p.left, q.left});
        stack.push_back({p.right, q.right});
    }
    return true;
}

std::int32_t RankAssignment::max_rank() const {
    return ranks_.empty() ? 0 : *std::max_element(ranks_.begin(), ranks_.end());
}

// ---------------------------------------------------------------------------
// Routing and scoring

TreeRouter::TreeRouter(const LabelTree& tree, const LabeledGraph& g) {
    steps_.reserve(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto& nd = tree.node(static_cast<std::int32_t>(i));
        Step s{std::nullopt, nd.criterion, nd.left, nd.right, nd.rank};
        if (!nd.is_leaf()) s.label = g.find_label(nd.label);
        steps_.push_back(s);
    }
}

std::int32_t TreeRouter::rank_of(std::span<const LabelId> labels) const {
    std::int32_t id = 0;
    while (steps_[static_cast<std::size_t>(id)].left != LabelTree::kNone) {
        const Step& s = steps_[static_cast<std::size_t>(id)];
        bool has = s.label && std::binary_search(labels.begin(), labels.end(), *s.label);
        id = (has == s.criterion) ? s.left : s.right;
    }
    return steps_[static_cast<std::size_t>(id)].rank;
}

std::int32_t rank_of(const LabelTree& tree, const std::set<std::string>& labels) {
    std::int32_t id = tree.root();
    while (!tree.node(id).is_leaf()) {
        const auto& nd = tree.node(id);
        bool has = labels.count(nd.label) > 0;
        id = (has == nd.criterion) ? nd.left : nd.right;
    }
    return tree.node(id).rank;
}

std::int32_t rank_of(const LabelTree& tree, const LabeledGraph& g,
                     std::span<const LabelId> labels) {
    return TreeRouter(tree, g).rank_of(labels);
}

RankAssignment assign_ranks(const LabelTree& tree, const LabeledGraph& g) {
    TreeRouter router(tree, g);
    RankAssignment ranks(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) ranks[v] = router.rank_of(g.labels(v));
    return ranks;
}

double score_ranks(const RankAssignment& ranks, const LabeledGraph& g) {
    if (ranks.size() != g.num_nodes())
        throw std::invalid_argument("rank assignment covers " + std::to_string(ranks.size()) +
                                    " nodes, graph has " + std::to_string(g.num_nodes()));
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (ranks[v] < 1) throw std::invalid_argument("node '" + g.node_name(v) + "' has no rank");
    double score = 0.0;
    for (const auto& e : g.edges())
        score += e.weight * penalty(static_cast<std::int64_t>(ranks[e.source]) - ranks[e.target]);
    return score;
}

double score_tree(const LabelTree& tree, const LabeledGraph& g) {
    return score_ranks(assign_ranks(tree, g), g);
}

// ---------------------------------------------------------------------------
// Interchange

nlohmann::json tree_to_json(const LabelTree& tree) {
    // Post-order build without recursion.
    std::vector<nlohmann::json> built(tree.size());
    std::vector<std::pair<std::int32_t, bool>> stack{{tree.root(), false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        const auto& nd = tree.node(id);
        auto& slot = built[static_cast<std::size_t>(id)];
        if (nd.is_leaf()) {
            slot = {{"rank", nd.rank}};
        } else if (!expanded) {
            stack.push_back({id, true});
            stack.push_back({nd.right, false});
            stack.push_back({nd.left, false});
        } else {
            slot = nlohmann::json::object();
            slot["label"] = nd.label;
            slot["criterion"] = nd.criterion;
            slot["left"] = std::move(built[static_cast<std::size_t>(nd.left)]);
            slot["right"] = std::move(built[static_cast<std::size_t>(nd.right)]);
            if (nd.gain) slot["gain"] = *nd.gain;
        }
    }
    return std::move(built[0]);
}

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("malformed tree JSON: " + what);
}

void build_from_json(LabelTree& tree, std::int32_t at, const nlohmann::json& j) {
    check(j.is_object(), "node is not an object");
    if (j.contains("rank") && !j.contains("label")) {
        check(j.size() == 1, "leaf carries extra fields");
        check(j["rank"].is_number_integer(), "rank is not an integer");
        return;
    }
    check(j.contains("label") && j["label"].is_string(), "internal node without string label");
    check(j.contains("criterion") && j["criterion"].is_boolean(), "criterion missing or not boolean");
    check(j.contains("left") && j.contains("right"), "internal node needs left and right");
    std::optional<double> gain;
    if (j.contains("gain") && !j["gain"].is_null()) {
        check(j["gain"].is_number(), "gain is not a number");
        gain = j["gain"].get<double>();
    }
    auto [l, r] = tree.split(at, j["label"].get<std::string>(), j["criterion"].get<bool>(), gain);
    build_from_json(tree, l, j["left"]);
    build_from_json(tree, r, j["right"]);
}

void check_ranks(const LabelTree& tree, std::int32_t at, const nlohmann::json& j) {
    const auto& nd = tree.node(at);
    if (nd.is_leaf()) {
        check(j["rank"].get<std::int64_t>() == nd.rank,
              "leaf rank " + j["rank"].dump() + " is not its left-to-right position " +
                  std::to_string(nd.rank));
        return;
    }
    check_ranks(tree, nd.left, j["left"]);
    check_ranks(tree, nd.right, j["right"]);
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out.push_back('\\');
        out.push_back(ch);
    }
    return out;
}

}  // namespace

LabelTree tree_from_json(const nlohmann::json& j) {
    LabelTree tree;
    build_from_json(tree, tree.root(), j);
    check_ranks(tree, tree.root(), j);
    return tree;
}

std::string export_json(const LabelTree& tree) { return tree_to_json(tree).dump(2) + "\n"; }

LabelTree import_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(std::string("malformed tree JSON: ") + ex.what());
    }
    return tree_from_json(j);
}

std::string export_dot(const LabelTree& tree) {
    std::ostringstream out;
    out << "digraph label_tree {\n";
    out << "  node [fontname=\"Helvetica\"];\n";
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto& nd = tree.node(static_cast<std::int32_t>(i));
        if (nd.is_leaf()) {
            out << "  n" << i << " [shape=ellipse, label=\"r = " << nd.rank << "\"];\n";
        } else {
            out << "  n" << i << " [shape=box, label=\"" << dot_escape(nd.label) << "\"];\n";
        }
    }
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto& nd = tree.node(static_cast<std::int32_t>(i));
        if (nd.is_leaf()) continue;
        // Solid marks the branch taken by nodes that carry the label.
        const char* left_style = nd.criterion ? "solid" : "dashed";
        const char* right_style = nd.criterion ? "dashed" : "solid";
        out << "  n" << i << " -> n" << nd.left << " [style=" << left_style << "];\n";
        out << "  n" << i << " -> n" << nd.right << " [style=" << right_style << "];\n";
    }
    out << "}\n";
    return out.str();
}

void write_ranks(const RankAssignment& ranks, const LabeledGraph& g, std::ostream& out) {
    if (ranks.size() != g.num_nodes()) throw std::invalid_argument("rank assignment size mismatch");
    for (NodeId v = 0; v < g.num_nodes(); ++v) out << g.node_name(v) << '\t' << ranks[v] << '\n';
}

std::map<std::string, std::int32_t> read_ranks(std::istream& in, const std::string& source) {
    std::map<std::string, std::int32_t> ranks;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || line.find('\t', tab + 1) != std::string::npos)
            throw ParseError(source, lineno, "expected 'node<TAB>rank'");
        std::string_view num(line.data() + tab + 1, line.size() - tab - 1);
        std::int32_t r = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), r);
        if (ec != std::errc() || ptr != num.data() + num.size() || r < 1)
            throw ParseError(source, lineno, "rank must be a positive integer");
        if (!ranks.emplace(line.substr(0, tab), r).second)
            throw ParseError(source, lineno, "duplicate node '" + line.substr(0, tab) + "'");
    }
    return ranks;
}

}  // namespace agony
