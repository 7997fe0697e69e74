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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "agony/evaluation.hpp"
#include "agony/graph.hpp"
#include "agony/greedy.hpp"
#include "agony/label_tree.hpp"
#include "agony/prune.hpp"
#include "agony/synth.hpp"

namespace agony::cli {

namespace {

struct Inconsistent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(std::ostream& out, const nlohmann::json& report, bool pretty) {
    out << (pretty ? report.dump(2) : report.dump()) << '\n';
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    fn(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::map<std::string, std::int32_t> load_ranks(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_ranks(in, path);
}

double retained_gain(const LabelTree& tree) {
    double sum = 0.0;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto& nd = tree.node(static_cast<std::int32_t>(i));
        if (!nd.is_leaf()) sum += nd.gain.value_or(0.0);
    }
    return sum;
}

// ---------------------------------------------------------------------------

struct RankArgs {
    std::string edges, labels;
    std::optional<int> max_leaves;
    std::string tree_out, ranks_out, dot_out;
};

nlohmann::json cmd_rank(const RankArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    LabeledGraph g = read_graph(a.edges, a.labels);

    GreedyRanker ranker(g);
    LabelTree full = ranker.run();
    LabelTree tree = prune(full, a.max_leaves);
    RankAssignment ranks = assign_ranks(tree, g);
    const double score = score_ranks(ranks, g);

    if (!a.tree_out.empty()) write_file(a.tree_out, [&](std::ostream& o) { o << export_json(tree); });
    if (!a.ranks_out.empty()) write_file(a.ranks_out, [&](std::ostream& o) { write_ranks(ranks, g, o); });
    if (!a.dot_out.empty()) write_file(a.dot_out, [&](std::ostream& o) { o << export_dot(tree); });

    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    // The score implied by the recorded gains must agree with direct scoring.
    const double expected = g.total_weight() + retained_gain(tree);
    const double tol = 1e-9 * std::max(1.0, g.total_weight());

    nlohmann::json report = {
        {"input", summary_json(g)},
        {"score", score},
        {"leaves", tree.leaf_count()},
        {"depth", tree.depth()},
        {"greedy_leaves", full.leaf_count()},
        {"splits", ranker.splits()},
        {"max_leaves", a.max_leaves ? nlohmann::json(*a.max_leaves) : nlohmann::json(nullptr)},
        {"wall_ms", elapsed},
    };
    if (std::fabs(expected - score) > tol) {
        throw Inconsistent("score recheck failed: direct " + format_weight(score) +
                           ", from gains " + format_weight(expected));
    }
    return report;
}

nlohmann::json cmd_score(const std::string& edges, const std::string& labels,
                         const std::string& tree_path) {
    LabeledGraph g = read_graph(edges, labels);
    LabelTree tree = import_json(slurp(tree_path));
    return {{"score", score_tree(tree, g)}, {"leaves", tree.leaf_count()}};
}

nlohmann::json cmd_eval(const std::string& first, const std::string& second) {
    return to_json(kendall_tau(load_ranks(first), load_ranks(second)));
}

nlohmann::json cmd_collapse(const std::string& edges, const std::string& labels,
                            const std::string& prefix) {
    LabeledGraph g = read_graph(edges, labels);
    LabeledGraph collapsed = collapse_by_label(g);
    write_file(prefix + ".edges.tsv", [&](std::ostream& o) { write_edges(collapsed, o); });
    write_file(prefix + ".labels.tsv", [&](std::ostream& o) { write_labels(collapsed, o); });
    return {{"input", summary_json(g)}, {"output", summary_json(collapsed)}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rank labeled directed graphs into tiers with agony-minimizing label trees"};
    app.require_subcommand(1);
    app.fallthrough();
    bool pretty = false;
    app.add_flag("--pretty", pretty, "Indent JSON reports");

    RankArgs rank;
    int max_leaves = 0;
    auto* rank_cmd = app.add_subcommand("rank", "Build a label tree greedily, optionally pruned");
    rank_cmd->add_option("edges", rank.edges, "Edge file")->required();
    rank_cmd->add_option("labels", rank.labels, "Label file")->required();
    auto* k_opt = rank_cmd->add_option("--max-leaves", max_leaves, "Keep at most k ranks")
                      ->check(CLI::PositiveNumber);
    rank_cmd->add_option("--tree-out", rank.tree_out, "Write the tree as JSON");
    rank_cmd->add_option("--ranks-out", rank.ranks_out, "Write node<TAB>rank TSV");
    rank_cmd->add_option("--dot-out", rank.dot_out, "Write the tree as Graphviz DOT");

    std::string s_edges, s_labels, s_tree;
    auto* score_cmd = app.add_subcommand("score", "Agony of an existing tree");
    score_cmd->add_option("edges", s_edges, "Edge file")->required();
    score_cmd->add_option("labels", s_labels, "Label file")->required();
    score_cmd->add_option("tree", s_tree, "Tree JSON")->required();

    SynthConfig cfg;
    std::string config_path, out_dir;
    auto* gen_cmd = app.add_subcommand("generate", "Write a planted-hierarchy dataset");
    gen_cmd->add_option("out_dir", out_dir, "Output directory")->required();
    gen_cmd->add_option("--config", config_path, "JSON config; flags override its fields");
    auto* o_n = gen_cmd->add_option("--nodes", cfg.nodes, "Node count");
    auto* o_m = gen_cmd->add_option("--edges", cfg.edges, "Sampled pair count");
    auto* o_h = gen_cmd->add_option("--ranks", cfg.ranks, "Rank count");
    auto* o_eta = gen_cmd->add_option("--eta", cfg.forward_prob, "Forward-edge probability");
    auto* o_theta = gen_cmd->add_option("--theta", cfg.false_label_frac, "False-label node fraction");
    auto* o_mu = gen_cmd->add_option("--mu", cfg.noise_label_frac, "Noise-label node fraction");
    auto* o_u = gen_cmd->add_option("--noise-labels", cfg.noise_universe_size, "Noise label universe size");
    auto* o_seed = gen_cmd->add_option("--seed", cfg.seed, "RNG seed");

    std::string e_first, e_second;
    auto* eval_cmd = app.add_subcommand("eval", "Kendall tau-b between two rank files");
    eval_cmd->add_option("first", e_first, "Rank TSV")->required();
    eval_cmd->add_option("second", e_second, "Rank TSV")->required();

    std::string c_edges, c_labels, c_prefix;
    auto* collapse_cmd = app.add_subcommand("collapse", "Quotient graph with one node per label");
    collapse_cmd->add_option("edges", c_edges, "Edge file")->required();
    collapse_cmd->add_option("labels", c_labels, "Label file")->required();
    collapse_cmd->add_option("prefix", c_prefix, "Output prefix")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        nlohmann::json report;
        if (rank_cmd->parsed()) {
            if (k_opt->count() > 0) rank.max_leaves = max_leaves;
            report = cmd_rank(rank);
        } else if (score_cmd->parsed()) {
            report = cmd_score(s_edges, s_labels, s_tree);
        } else if (gen_cmd->parsed()) {
            SynthConfig effective;
            if (!config_path.empty())
                effective = synth_config_from_json(nlohmann::json::parse(slurp(config_path)));
            if (o_n->count()) effective.nodes = cfg.nodes;
            if (o_m->count()) effective.edges = cfg.edges;
            if (o_h->count()) effective.ranks = cfg.ranks;
            if (o_eta->count()) effective.forward_prob = cfg.forward_prob;
            if (o_theta->count()) effective.false_label_frac = cfg.false_label_frac;
            if (o_mu->count()) effective.noise_label_frac = cfg.noise_label_frac;
            if (o_u->count()) effective.noise_universe_size = cfg.noise_universe_size;
            if (o_seed->count()) effective.seed = cfg.seed;
            try {
                effective.validate();
            } catch (const std::invalid_argument& ex) {
                err << "invalid config: " << ex.what() << '\n';
                return kExitUsage;
            }
            SynthResult data = generate(effective);
            write_dataset(data, effective, out_dir);
            report = {{"config", to_json(effective)},
                      {"sampled_pairs", data.sampled_pairs},
                      {"graph", summary_json(data.graph)}};
        } else if (eval_cmd->parsed()) {
            report = cmd_eval(e_first, e_second);
        } else if (collapse_cmd->parsed()) {
            report = cmd_collapse(c_edges, c_labels, c_prefix);
        }
        emit(out, report, pretty);
        return kExitOk;
    } catch (const Inconsistent& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitInconsistent;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace agony::cli
