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

#include "agony/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

namespace agony {

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      source_(std::move(source)),
      line_(line) {}

// ---------------------------------------------------------------------------
// LabeledGraph accessors

std::optional<NodeId> LabeledGraph::find_node(std::string_view name) const {
    auto it = std::lower_bound(node_names_.begin(), node_names_.end(), name);
    if (it == node_names_.end() || *it != name) return std::nullopt;
    return static_cast<NodeId>(it - node_names_.begin());
}

std::optional<LabelId> LabeledGraph::find_label(std::string_view name) const {
    auto it = std::lower_bound(label_names_.begin(), label_names_.end(), name);
    if (it == label_names_.end() || *it != name) return std::nullopt;
    return static_cast<LabelId>(it - label_names_.begin());
}

std::span<const Neighbor> LabeledGraph::out_neighbors(NodeId v) const {
    return std::span<const Neighbor>(out_adj_).subspan(out_offsets_.at(v),
                                                       out_offsets_.at(v + 1) - out_offsets_[v]);
}

std::span<const Neighbor> LabeledGraph::in_neighbors(NodeId v) const {
    return std::span<const Neighbor>(in_adj_).subspan(in_offsets_.at(v),
                                                      in_offsets_.at(v + 1) - in_offsets_[v]);
}

std::span<const LabelId> LabeledGraph::labels(NodeId v) const {
    return std::span<const LabelId>(node_labels_).subspan(label_offsets_.at(v),
                                                          label_offsets_.at(v + 1) - label_offsets_[v]);
}

bool LabeledGraph::has_label(NodeId v, LabelId t) const {
    auto ls = labels(v);
    return std::binary_search(ls.begin(), ls.end(), t);
}

std::span<const NodeId> LabeledGraph::nodes_with_label(LabelId t) const {
    return std::span<const NodeId>(label_index_).subspan(index_offsets_.at(t),
                                                         index_offsets_.at(t + 1) - index_offsets_[t]);
}

double LabeledGraph::weighted_in_degree(NodeId v) const {
    double s = 0.0;
    for (const auto& nb : in_neighbors(v)) s += nb.weight;
    return s;
}

double LabeledGraph::weighted_out_degree(NodeId v) const {
    double s = 0.0;
    for (const auto& nb : out_neighbors(v)) s += nb.weight;
    return s;
}

bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
    return a.node_names_ == b.node_names_ && a.label_names_ == b.label_names_ &&
           a.edges_ == b.edges_ && a.label_offsets_ == b.label_offsets_ &&
           a.node_labels_ == b.node_labels_;
}

// ---------------------------------------------------------------------------
// Builder

std::size_t LabeledGraph::Builder::intern(std::string_view name) {
    if (name.empty()) throw std::invalid_argument("empty node id");
    auto it = node_index_.find(name);
    if (it != node_index_.end()) return it->second;
    std::size_t idx = names_.size();
    names_.emplace_back(name);
    labels_.emplace_back();
    node_index_.emplace(std::string(name), idx);
    return idx;
}

void LabeledGraph::Builder::add_node(std::string_view name) { intern(name); }

void LabeledGraph::Builder::add_label(std::string_view node, std::string_view label) {
    if (label.empty()) throw std::invalid_argument("empty label");
    labels_[intern(node)].emplace_back(label);
}

void LabeledGraph::Builder::add_edge(std::string_view source, std::string_view target,
                                     double weight) {
    if (!std::isfinite(weight) || weight <= 0.0)
        throw std::invalid_argument("edge weight must be positive and finite");
    std::size_t s = intern(source);
    std::size_t t = intern(target);
    raw_edges_.push_back({s, t, weight});
}

LabeledGraph LabeledGraph::Builder::build() const {
    LabeledGraph g;
    const std::size_t n = names_.size();

    // Canonical node ids: lexicographic order of names.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return names_[a] < names_[b]; });
    std::vector<NodeId> remap(n);
    g.node_names_.reserve(n);
    for (std::size_t rank = 0; rank < n; ++rank) {
        remap[order[rank]] = static_cast<NodeId>(rank);
        g.node_names_.push_back(names_[order[rank]]);
    }

    for (const auto& ls : labels_)
        for (const auto& l : ls) g.label_names_.push_back(l);
    std::sort(g.label_names_.begin(), g.label_names_.end());
    g.label_names_.erase(std::unique(g.label_names_.begin(), g.label_names_.end()),
                         g.label_names_.end());

    g.label_offsets_.assign(n + 1, 0);
    {
        std::vector<std::vector<LabelId>> per_node(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto& dst = per_node[remap[i]];
            for (const auto& l : labels_[i]) dst.push_back(*g.find_label(l));
            std::sort(dst.begin(), dst.end());
            dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
        }
        for (std::size_t v = 0; v < n; ++v) {
            g.label_offsets_[v + 1] = g.label_offsets_[v] + per_node[v].size();
            g.node_labels_.insert(g.node_labels_.end(), per_node[v].begin(), per_node[v].end());
        }
    }

    g.index_offsets_.assign(g.label_names_.size() + 1, 0);
    for (LabelId t : g.node_labels_) ++g.index_offsets_[t + 1];
    for (std::size_t t = 0; t < g.label_names_.size(); ++t)
        g.index_offsets_[t + 1] += g.index_offsets_[t];
    g.label_index_.resize(g.node_labels_.size());
    {
        std::vector<std::size_t> cursor(g.index_offsets_.begin(), g.index_offsets_.end() - 1);
        for (NodeId v = 0; v < n; ++v)
            for (LabelId t : g.labels(v)) g.label_index_[cursor[t]++] = v;
    }

    std::vector<Edge> edges;
    edges.reserve(raw_edges_.size());
    for (const auto& e : raw_edges_) {
        if (e.source == e.target) {
            ++g.self_loops_dropped_;
            continue;
        }
        edges.push_back({remap[e.source], remap[e.target], e.weight});
    }
    // Stable so duplicate weights are summed in input order.
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.source, a.target) < std::tie(b.source, b.target);
    });
    for (const auto& e : edges) {
        if (!g.edges_.empty() && g.edges_.back().source == e.source &&
            g.edges_.back().target == e.target) {
            g.edges_.back().weight += e.weight;
            ++g.parallel_edges_merged_;
        } else {
            g.edges_.push_back(e);
        }
    }

    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (const auto& e : g.edges_) {
        ++g.out_offsets_[e.source + 1];
        ++g.in_offsets_[e.target + 1];
        g.total_weight_ += e.weight;
    }
    for (std::size_t v = 0; v < n; ++v) {
        g.out_offsets_[v + 1] += g.out_offsets_[v];
        g.in_offsets_[v + 1] += g.in_offsets_[v];
    }
    g.out_adj_.resize(g.edges_.size());
    g.in_adj_.resize(g.edges_.size());
    {
        std::vector<std::size_t> oc(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
        std::vector<std::size_t> ic(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
        for (const auto& e : g.edges_) {
            g.out_adj_[oc[e.source]++] = {e.target, e.weight};
            g.in_adj_[ic[e.target]++] = {e.source, e.weight};
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

template <typename Fn>
void for_each_record(std::istream& in, const std::string& source, Fn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (is_blank(view) || view.front() == '#') continue;
        try {
            fn(split_tabs(view));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ParseError(source, lineno, ex.what());
        }
    }
}

double parse_weight(std::string_view text) {
    double w = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, w);
    if (ec != std::errc() || ptr != last) throw std::invalid_argument("non-numeric weight '" + std::string(text) + "'");
    if (!std::isfinite(w) || w <= 0.0) throw std::invalid_argument("non-positive weight '" + std::string(text) + "'");
    return w;
}

LabeledGraph parse_named(std::istream& edge_source, const std::string& edge_name,
                         std::istream& label_source, const std::string& label_name) {
    LabeledGraph::Builder builder;
    for_each_record(edge_source, edge_name, [&](const std::vector<std::string_view>& f) {
        if (f.size() != 2 && f.size() != 3)
            throw std::invalid_argument("expected 2 or 3 tab-separated fields, got " +
                                        std::to_string(f.size()));
        if (f[0].empty() || f[1].empty()) throw std::invalid_argument("empty node id");
        double w = f.size() == 3 ? parse_weight(f[2]) : 1.0;
        builder.add_edge(f[0], f[1], w);
    });
    for_each_record(label_source, label_name, [&](const std::vector<std::string_view>& f) {
        if (f[0].empty()) throw std::invalid_argument("empty node id");
        builder.add_node(f[0]);
        for (std::size_t i = 1; i < f.size(); ++i)
            if (!f[i].empty()) builder.add_label(f[0], f[i]);
    });
    return builder.build();
}

}  // namespace

LabeledGraph parse_graph(std::istream& edge_source, std::istream& label_source) {
    return parse_named(edge_source, "edges", label_source, "labels");
}

LabeledGraph read_graph(const std::string& edge_path, const std::string& label_path) {
    std::ifstream edges(edge_path);
    if (!edges) throw std::runtime_error("cannot open edge file " + edge_path);
    std::ifstream labels(label_path);
    if (!labels) throw std::runtime_error("cannot open label file " + label_path);
    return parse_named(edges, edge_path, labels, label_path);
}

std::string format_weight(double w) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
    return std::string(buf, ptr);
}

void write_edges(const LabeledGraph& g, std::ostream& out) {
    for (const auto& e : g.edges())
        out << g.node_name(e.source) << '\t' << g.node_name(e.target) << '\t'
            << format_weight(e.weight) << '\n';
}

void write_labels(const LabeledGraph& g, std::ostream& out) {
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        out << g.node_name(v);
        for (LabelId t : g.labels(v)) out << '\t' << g.label_name(t);
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Subset queries

namespace {

std::vector<char> membership(const LabeledGraph& g, std::span<const NodeId> nodes) {
    std::vector<char> mark(g.num_nodes(), 0);
    for (NodeId v : nodes) {
        if (v >= g.num_nodes()) throw std::out_of_range("unknown node id " + std::to_string(v));
        mark[v] = 1;
    }
    return mark;
}

}  // namespace

std::vector<Edge> edges_between(const LabeledGraph& g, std::span<const NodeId> from,
                                std::span<const NodeId> to) {
    auto in_from = membership(g, from);
    auto in_to = membership(g, to);
    std::vector<Edge> result;
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
        if (!in_from[u]) continue;
        for (const auto& nb : g.out_neighbors(u))
            if (in_to[nb.node]) result.push_back({u, nb.node, nb.weight});
    }
    return result;
}

std::vector<Edge> induced_edges(const LabeledGraph& g, std::span<const NodeId> nodes) {
    return edges_between(g, nodes, nodes);
}

double total_weight(const LabeledGraph& g) { return g.total_weight(); }

nlohmann::json summary_json(const LabeledGraph& g) {
    return {{"nodes", g.num_nodes()},
            {"edges", g.num_edges()},
            {"labels", g.num_labels()},
            {"total_weight", g.total_weight()},
            {"self_loops_dropped", g.self_loops_dropped()},
            {"parallel_edges_merged", g.parallel_edges_merged()}};
}

}  // namespace agony
