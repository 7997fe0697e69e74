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

#include "agony/synth.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "agony/rng.hpp"

namespace agony {

namespace {

constexpr int kMaxRankAttempts = 100;

std::string padded(const char* prefix, std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

std::size_t digit_count(std::size_t v) { return std::to_string(v).size(); }

std::size_t count_fraction(double frac, std::size_t n) {
    // Guard against products such as 0.3 * 4000 landing just below an integer.
    return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n) + 1e-9));
}

/// `k` distinct indices from [0, n) via a partial Fisher-Yates shuffle.
std::vector<std::uint32_t> sample_distinct(Pcg32& rng, std::size_t n, std::size_t k) {
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + rng.bounded(static_cast<std::uint32_t>(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

void check_fraction(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void SynthConfig::validate() const {
    if (ranks < 2) throw std::invalid_argument("h (rank count) must be at least 2");
    if (nodes < static_cast<std::size_t>(ranks))
        throw std::invalid_argument("n must be at least h");
    if (nodes > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("n is too large");
    if (edges < 1) throw std::invalid_argument("m must be at least 1");
    check_fraction(forward_prob, "eta");
    check_fraction(false_label_frac, "theta");
    check_fraction(noise_label_frac, "mu");
    if (noise_universe_size < 1) throw std::invalid_argument("noise universe size must be positive");
}

nlohmann::json to_json(const SynthConfig& cfg) {
    return {{"n", cfg.nodes},
            {"m", cfg.edges},
            {"h", cfg.ranks},
            {"eta", cfg.forward_prob},
            {"theta", cfg.false_label_frac},
            {"mu", cfg.noise_label_frac},
            {"noise_universe_size", cfg.noise_universe_size},
            {"seed", cfg.seed}};
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    static const std::set<std::string> known{"n",  "m",  "h", "eta", "theta",
                                             "mu", "noise_universe_size", "seed"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    SynthConfig cfg;
    try {
        if (j.contains("n")) cfg.nodes = j["n"].get<std::size_t>();
        if (j.contains("m")) cfg.edges = j["m"].get<std::size_t>();
        if (j.contains("h")) cfg.ranks = j["h"].get<int>();
        if (j.contains("eta")) cfg.forward_prob = j["eta"].get<double>();
        if (j.contains("theta")) cfg.false_label_frac = j["theta"].get<double>();
        if (j.contains("mu")) cfg.noise_label_frac = j["mu"].get<double>();
        if (j.contains("noise_universe_size"))
            cfg.noise_universe_size = j["noise_universe_size"].get<int>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("bad config value: ") + ex.what());
    }
    cfg.validate();
    return cfg;
}

SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    Pcg32 rng(cfg.seed);
    const std::size_t n = cfg.nodes;
    const auto h = static_cast<std::uint32_t>(cfg.ranks);

    SynthResult result;
    std::vector<std::int32_t> rank(n);
    std::vector<std::vector<std::uint32_t>> by_rank(h + 1);
    for (int attempt = 1;; ++attempt) {
        for (auto& bucket : by_rank) bucket.clear();
        for (std::size_t v = 0; v < n; ++v) {
            rank[v] = static_cast<std::int32_t>(1 + rng.bounded(h));
            by_rank[static_cast<std::size_t>(rank[v])].push_back(static_cast<std::uint32_t>(v));
        }
        bool all_used = true;
        for (std::uint32_t r = 1; r <= h; ++r) all_used = all_used && !by_rank[r].empty();
        if (all_used) {
            result.rank_attempts = attempt;
            break;
        }
        if (attempt == kMaxRankAttempts)
            throw std::runtime_error("could not populate every rank after " +
                                     std::to_string(kMaxRankAttempts) + " attempts");
    }

    const std::size_t node_width = digit_count(n - 1);
    const std::size_t rank_width = digit_count(h);
    const std::size_t noise_width = digit_count(static_cast<std::size_t>(cfg.noise_universe_size));
    std::vector<std::string> names(n);
    for (std::size_t v = 0; v < n; ++v) names[v] = padded("v", v, node_width);
    auto rank_label = [&](std::uint32_t r) { return padded("L", r, rank_width); };

    LabeledGraph::Builder builder;
    for (std::size_t v = 0; v < n; ++v) {
        builder.add_node(names[v]);
        builder.add_label(names[v], rank_label(static_cast<std::uint32_t>(rank[v])));
    }

    // A node's only rank label so far is its own, so drawing from the h - 1
    // others never repeats one.
    for (std::uint32_t v : sample_distinct(rng, n, count_fraction(cfg.false_label_frac, n))) {
        std::uint32_t pick = 1 + rng.bounded(h - 1);
        if (pick >= static_cast<std::uint32_t>(rank[v])) ++pick;
        builder.add_label(names[v], rank_label(pick));
    }
    for (std::uint32_t v : sample_distinct(rng, n, count_fraction(cfg.noise_label_frac, n))) {
        std::uint32_t pick = 1 + rng.bounded(static_cast<std::uint32_t>(cfg.noise_universe_size));
        builder.add_label(names[v], padded("N", pick, noise_width));
    }

    const std::size_t per_level = cfg.edges / (h - 1);
    for (std::uint32_t r = 1; r < h; ++r) {
        const auto& upper = by_rank[r];
        const auto& lower = by_rank[r + 1];
        for (std::size_t i = 0; i < per_level; ++i) {
            std::uint32_t a = upper[rng.bounded(static_cast<std::uint32_t>(upper.size()))];
            std::uint32_t b = lower[rng.bounded(static_cast<std::uint32_t>(lower.size()))];
            if (rng.bernoulli(cfg.forward_prob)) {
                builder.add_edge(names[a], names[b], 1.0);
                ++result.forward_pairs;
            } else {
                builder.add_edge(names[b], names[a], 1.0);
            }
            ++result.sampled_pairs;
        }
    }

    result.graph = builder.build();
    result.truth = RankAssignment(result.graph.num_nodes());
    for (std::size_t v = 0; v < n; ++v) result.truth[*result.graph.find_node(names[v])] = rank[v];
    return result;
}

void write_dataset(const SynthResult& data, const SynthConfig& cfg,
                   const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open("edges.tsv");
        write_edges(data.graph, out);
    }
    {
        auto out = open("labels.tsv");
        write_labels(data.graph, out);
    }
    {
        auto out = open("true_ranks.tsv");
        write_ranks(data.truth, data.graph, out);
    }
    {
        auto out = open("config.json");
        nlohmann::json sidecar = {{"config", to_json(cfg)},
                                  {"sampled_pairs", data.sampled_pairs},
                                  {"forward_pairs", data.forward_pairs},
                                  {"rank_attempts", data.rank_attempts},
                                  {"graph", summary_json(data.graph)}};
        out << sidecar.dump(2) << '\n';
    }
}

}  // namespace agony
