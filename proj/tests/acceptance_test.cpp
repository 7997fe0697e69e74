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


// One test per acceptance criterion. Test names start with C<n>_ and the
// listener below turns them into "criterion <n>: PASS|FAIL" lines.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "agony/evaluation.hpp"
#include "agony/greedy.hpp"
#include "agony/prune.hpp"
#include "agony/synth.hpp"
#include "test_support.hpp"

namespace agony {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SynthConfig recovery_config(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.nodes = 4000;
    cfg.edges = 7000;
    cfg.ranks = 10;
    cfg.false_label_frac = 0.0;
    cfg.noise_label_frac = 0.05;
    cfg.forward_prob = 0.9;
    cfg.seed = seed;
    return cfg;
}

struct Recovery {
    double tau;
    std::size_t leaves;
};

Recovery recover(const SynthConfig& cfg) {
    auto data = generate(cfg);
    auto tree = greedy(data.graph);
    auto tau = kendall_tau(data.truth, assign_ranks(tree, data.graph));
    return {tau.defined ? tau.tau : std::numeric_limits<double>::quiet_NaN(), tree.leaf_count()};
}

TEST(Acceptance, C1_ToyGolden) {
    const auto start = Clock::now();
    auto g = testing::toy_graph();
    EXPECT_EQ(score_tree(testing::toy_tree(), g), 5.0);
    const double greedy_score = score_tree(greedy(g), g);
    const double optimum = exhaustive_tree_search(g, 5).score;
    EXPECT_LE(greedy_score, 5.0);
    EXPECT_GE(greedy_score, optimum);
    std::printf("  toy: reference tree 5, greedy %g, exhaustive optimum %g\n", greedy_score, optimum);
    EXPECT_LT(seconds_since(start), 1.0);
}

TEST(Acceptance, C2_CounterSoundness) {
    const auto start = Clock::now();
    std::mt19937_64 rng(20260001);
    std::size_t splits = 0, deepest = 0;
    for (int iter = 0; iter < 200; ++iter) {
        LabeledGraph g;
        if (iter % 2 == 0) {
            testing::RandomGraphSpec spec;
            spec.max_nodes = 200;
            spec.max_edges = 1000;
            spec.max_labels = 10;
            spec.max_weight = 5;
            spec.planted_tiers = iter % 11;
            g = testing::random_graph(rng, spec);
        } else {
            // Planted hierarchies split deep; ranks plus noise labels stay within 10 labels.
            SynthConfig cfg;
            cfg.ranks = static_cast<int>(2 + rng() % 7);
            cfg.noise_universe_size = static_cast<int>(1 + rng() % (10 - cfg.ranks));
            cfg.nodes = static_cast<std::size_t>(cfg.ranks) + rng() % (201 - cfg.ranks);
            cfg.edges = 1 + rng() % 1000;
            cfg.forward_prob = 0.5 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
            cfg.false_label_frac = static_cast<double>(rng() % 30) / 100.0;
            cfg.noise_label_frac = static_cast<double>(rng() % 30) / 100.0;
            cfg.seed = rng();
            g = generate(cfg).graph;
        }
        GreedyRanker ranker(g);
        ASSERT_EQ(testing::audit_open_leaves(ranker, g), "") << "graph " << iter << " at root";
        double before = score_tree(ranker.tree(), g);
        while (!ranker.done()) {
            auto split = ranker.step();
            ASSERT_EQ(testing::audit_open_leaves(ranker, g), "") << "graph " << iter;
            const double after = score_tree(ranker.tree(), g);
            if (split) {
                ASSERT_EQ(split->gain, after - before) << "graph " << iter;
                ++splits;
            }
            before = after;
        }
        deepest = std::max(deepest, ranker.tree().leaf_count());
    }
    std::printf("  %zu splits audited, largest tree %zu leaves\n", splits, deepest);
    EXPECT_GT(splits, 200u);
    EXPECT_LT(seconds_since(start), 60.0);
}

TEST(Acceptance, C3_PruningOptimality) {
    const auto start = Clock::now();
    std::mt19937_64 rng(20260003);
    for (int iter = 0; iter < 100; ++iter) {
        auto [g, tree] = testing::random_greedy_instance(rng, 2, 12);
        for (int k = 2; k <= 6; ++k) {
            double oracle = std::numeric_limits<double>::infinity();
            for (const auto& p : testing::all_prunings(tree, k)) oracle = std::min(oracle, score_tree(p, g));
            const double got = score_tree(prune(tree, k), g);
            ASSERT_EQ(got, oracle) << "tree " << iter << " k=" << k;
            ASSERT_EQ(got, total_weight(g) + build_prune_table(tree, k).root_gain(k)) << "tree " << iter;
        }
    }
    EXPECT_LT(seconds_since(start), 60.0);
}

TEST(Acceptance, C4_SyntheticRecovery) {
    const auto start = Clock::now();
    double sum = 0.0;
    int exact_leaves = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto r = recover(recovery_config(seed));
        std::printf("  seed %llu: tau %.6f, leaves %zu\n", static_cast<unsigned long long>(seed), r.tau, r.leaves);
        sum += r.tau;
        if (r.leaves == 10) ++exact_leaves;
    }
    EXPECT_GE(sum / 5.0, 0.99);
    EXPECT_GE(exact_leaves, 4);
    EXPECT_LT(seconds_since(start), 120.0);
}

TEST(Acceptance, C5_NoiseTrend) {
    const auto start = Clock::now();
    double clean = 0.0, noisy = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto cfg = recovery_config(seed);
        clean += recover(cfg).tau;
        cfg.false_label_frac = 0.3;
        noisy += recover(cfg).tau;
        cfg.false_label_frac = 0.0;
        cfg.forward_prob = 0.3;
        auto back = recover(cfg);
        std::printf("  seed %llu: eta 0.3 tau %.6f\n", static_cast<unsigned long long>(seed), back.tau);
        EXPECT_LT(back.tau, 0.0) << "seed " << seed;
    }
    std::printf("  mean tau theta=0: %.6f, theta=0.3: %.6f\n", clean / 5, noisy / 5);
    EXPECT_GE(clean / 5, noisy / 5);
    EXPECT_LT(seconds_since(start), 180.0);
}

TEST(Acceptance, C6_PlateauInK) {
    const auto start = Clock::now();
    auto cfg = recovery_config(1);
    cfg.ranks = 15;
    auto data = generate(cfg);
    auto tree = greedy(data.graph);
    std::printf("  greedy leaves %zu, sampled pairs %zu\n", tree.leaf_count(), data.sampled_pairs);
    std::vector<double> scores;
    for (int k = 1; k <= 20; ++k) scores.push_back(score_tree(prune(tree, k), data.graph));
    for (int k = 2; k <= 20; ++k) EXPECT_LE(scores[k - 1], scores[k - 2]) << "k=" << k;
    for (int k = 16; k <= 20; ++k) EXPECT_EQ(scores[k - 1], scores[14]) << "k=" << k;
    std::printf("  score k=1 %g, k=14 %g, k=15 %g, k=20 %g\n", scores[0], scores[13], scores[14], scores[19]);
    EXPECT_LT(seconds_since(start), 120.0);
}

double end_to_end(const SynthConfig& cfg) {
    const auto start = Clock::now();
    auto data = generate(cfg);
    auto tree = greedy(data.graph);
    auto ranks = assign_ranks(tree, data.graph);
    volatile double s = score_ranks(ranks, data.graph);
    (void)s;
    return seconds_since(start);
}

double greedy_seconds(const LabeledGraph& g) {
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 5; ++rep) {
        const auto start = Clock::now();
        auto tree = greedy(g);
        volatile double s = score_tree(tree, g);
        (void)s;
        best = std::min(best, seconds_since(start));
    }
    return best;
}

TEST(Acceptance, C7_ScaleAndSlope) {
    SynthConfig big = recovery_config(7);
    big.nodes = 40000;
    big.edges = 100000;
    const double big_time = end_to_end(big);
    std::printf("  n=40000 m=100000 end to end: %.3f s\n", big_time);
    EXPECT_LT(big_time, 600.0);

    std::vector<double> xs, ys;
    for (std::size_t m : {10000u, 20000u, 40000u, 80000u}) {
        SynthConfig cfg = recovery_config(11);
        cfg.edges = m;
        cfg.nodes = m * 2 / 5;
        auto data = generate(cfg);
        const double t = greedy_seconds(data.graph);
        std::printf("  m=%zu n=%zu greedy best-of-5: %.4f s\n", m, cfg.nodes, t);
        xs.push_back(std::log(static_cast<double>(m)));
        ys.push_back(std::log(t));
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = num / den;
    std::printf("  log-log slope %.3f\n", slope);
    EXPECT_LE(slope, 1.4);
}

LabeledGraph single_label_graph(std::mt19937_64& rng, bool allow_intra) {
    LabeledGraph::Builder b;
    const int n = 2 + static_cast<int>(rng() % 40);
    const int labels = 2 + static_cast<int>(rng() % 6);
    std::vector<int> label(n);
    for (int v = 0; v < n; ++v) {
        label[v] = static_cast<int>(rng() % labels);
        b.add_label("n" + std::to_string(v), "t" + std::to_string(label[v]));
    }
    for (int i = 0, m = static_cast<int>(rng() % 150); i < m; ++i) {
        int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
        if (!allow_intra && label[u] == label[v]) continue;
        b.add_edge("n" + std::to_string(u), "n" + std::to_string(v), static_cast<double>(1 + rng() % 4));
    }
    return b.build();
}

TEST(Acceptance, C8_CollapseIdentity) {
    std::mt19937_64 rng(20260008);
    for (int iter = 0; iter < 50; ++iter) {
        // Literal identity on graphs without intra-label edges.
        auto g = single_label_graph(rng, false);
        auto c = collapse_by_label(g);
        for (int t = 0; t < 20; ++t) {
            auto tree = testing::random_tree(rng, g, 8, true);
            ASSERT_EQ(score_tree(tree, g), score_tree(tree, c)) << "graph " << iter;
        }
        // With intra-label edges the collapse drops them; each costs its weight in g.
        auto h = single_label_graph(rng, true);
        auto hc = collapse_by_label(h);
        double intra = 0.0;
        for (const auto& e : h.edges())
            if (h.labels(e.source)[0] == h.labels(e.target)[0]) intra += e.weight;
        for (int t = 0; t < 20; ++t) {
            auto tree = testing::random_tree(rng, h, 8, true);
            ASSERT_EQ(score_tree(tree, h), score_tree(tree, hc) + intra) << "graph " << iter;
        }
    }
}

TEST(Acceptance, C9_TauCorrectness) {
    std::mt19937_64 rng(20260009);
    int checked = 0;
    while (checked < 100) {
        const std::size_t n = 2 + rng() % 199;
        const auto levels_a = 2 + rng() % 14, levels_b = 2 + rng() % 14;
        std::vector<std::int32_t> a(n), b(n);
        for (auto& x : a) x = static_cast<std::int32_t>(1 + rng() % levels_a);
        for (auto& x : b) x = static_cast<std::int32_t>(1 + rng() % levels_b);
        auto fast = kendall_tau(a, b);
        auto slow = testing::quadratic_tau(a, b);
        ASSERT_EQ(fast.defined, slow.defined);
        if (!slow.defined) continue;  // constant draw; tau has no value to compare
        ++checked;
        ASSERT_NEAR(fast.tau, slow.tau, 1e-12) << "ranking " << checked;
        ASSERT_EQ(fast.concordant, slow.concordant);
        ASSERT_EQ(fast.discordant, slow.discordant);
    }
}

class CriterionListener : public ::testing::EmptyTestEventListener {
public:
    void OnTestEnd(const ::testing::TestInfo& info) override {
        std::string name = info.name();
        if (name.size() < 3 || name[0] != 'C') return;
        int n = std::atoi(name.c_str() + 1);
        results_[n] = {info.result()->Passed(), name.substr(name.find('_') + 1),
                       static_cast<double>(info.result()->elapsed_time()) / 1000.0};
    }
    void OnTestProgramEnd(const ::testing::UnitTest&) override {
        std::printf("\n");
        for (const auto& [n, r] : results_)
            std::printf("criterion %d: %s  %s (%.2f s)\n", n, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
        std::fflush(stdout);
    }

private:
    struct Outcome {
        bool passed;
        std::string name;
        double seconds;
    };
    std::map<int, Outcome> results_;
};

}  // namespace
}  // namespace agony

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::UnitTest::GetInstance()->listeners().Append(new agony::CriterionListener);
    return RUN_ALL_TESTS();
}
