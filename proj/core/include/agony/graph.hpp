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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace agony {

using NodeId = std::uint32_t;
using LabelId = std::uint32_t;

struct Edge {
    NodeId source = 0;
    NodeId target = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    NodeId node = 0;
    double weight = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Thrown by the edge/label readers. `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

/**
 * Immutable weighted, directed, labeled graph.
 *
 * Node and label names are interned to dense ids in lexicographic order of
 * their names, so two graphs with the same content always get the same ids.
 * Edges are normalized: self-loops are dropped and parallel (u, v) pairs are
 * merged by summing weights. Edges are kept sorted by (source, target).
 */
class LabeledGraph {
public:
    class Builder;

    LabeledGraph() = default;

    std::size_t num_nodes() const noexcept { return node_names_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::size_t num_labels() const noexcept { return label_names_.size(); }

    const std::string& node_name(NodeId v) const { return node_names_.at(v); }
    const std::string& label_name(LabelId t) const { return label_names_.at(t); }
    std::optional<NodeId> find_node(std::string_view name) const;
    std::optional<LabelId> find_label(std::string_view name) const;

    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Neighbor> out_neighbors(NodeId v) const;
    std::span<const Neighbor> in_neighbors(NodeId v) const;

    /// Sorted label ids of `v`; possibly empty.
    std::span<const LabelId> labels(NodeId v) const;
    bool has_label(NodeId v, LabelId t) const;
    /// Sorted node ids carrying label `t`.
    std::span<const NodeId> nodes_with_label(LabelId t) const;

    /// Number of node-label pairs.
    std::size_t label_pair_count() const noexcept { return node_labels_.size(); }

    double total_weight() const noexcept { return total_weight_; }
    double weighted_in_degree(NodeId v) const;
    double weighted_out_degree(NodeId v) const;

    std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }
    std::size_t parallel_edges_merged() const noexcept { return parallel_edges_merged_; }

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b);

private:
    std::vector<std::string> node_names_;
    std::vector<std::string> label_names_;
    std::vector<Edge> edges_;

    std::vector<std::size_t> out_offsets_, in_offsets_;
    std::vector<Neighbor> out_adj_, in_adj_;

    std::vector<std::size_t> label_offsets_;
    std::vector<LabelId> node_labels_;
    std::vector<std::size_t> index_offsets_;
    std::vector<NodeId> label_index_;

    double total_weight_ = 0.0;
    std::size_t self_loops_dropped_ = 0;
    std::size_t parallel_edges_merged_ = 0;
};

/// Accumulates nodes, labels and raw edges by name, then normalizes.
class LabeledGraph::Builder {
public:
    void add_node(std::string_view name);
    void add_label(std::string_view node, std::string_view label);
    /// Weight must be finite and positive.
    void add_edge(std::string_view source, std::string_view target, double weight = 1.0);

    LabeledGraph build() const;

private:
    std::size_t intern(std::string_view name);

    std::map<std::string, std::size_t, std::less<>> node_index_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::string>> labels_;
    struct RawEdge {
        std::size_t source, target;
        double weight;
    };
    std::vector<RawEdge> raw_edges_;
};

/// Reads "u TAB v [TAB w]" edge lines and "v TAB l1 TAB l2 ..." label lines.
/// '#' comment lines and blank lines are skipped; CRLF is accepted.
LabeledGraph parse_graph(std::istream& edge_source, std::istream& label_source);
LabeledGraph read_graph(const std::string& edge_path, const std::string& label_path);

/// Writes an edge file that parses back to the same graph.
void write_edges(const LabeledGraph& g, std::ostream& out);
/// Writes one line per node (nodes without labels get a bare-name line).
void write_labels(const LabeledGraph& g, std::ostream& out);

/// Edges (u, v) with u in `from` and v in `to`. Throws std::out_of_range for
/// ids that are not nodes of `g`.
std::vector<Edge> edges_between(const LabeledGraph& g,
                                std::span<const NodeId> from,
                                std::span<const NodeId> to);
/// Edges with both endpoints in `nodes`.
std::vector<Edge> induced_edges(const LabeledGraph& g, std::span<const NodeId> nodes);

double total_weight(const LabeledGraph& g);

/// {"nodes", "edges", "labels", "total_weight", "self_loops_dropped", "parallel_edges_merged"}
nlohmann::json summary_json(const LabeledGraph& g);

/// Shortest decimal form that parses back to the same double.
std::string format_weight(double w);

}  // namespace agony
