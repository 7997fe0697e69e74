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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "agony/evaluation.hpp"
#include "agony/greedy.hpp"
#include "agony/prune.hpp"
#include "test_support.hpp"

namespace agony {
namespace {

std::vector<std::int32_t> random_ranking(std::mt19937_64& rng, std::size_t n, int levels) {
    std::vector<std::int32_t> r(n);
    for (auto& x : r) x = 1 + static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(levels));
    return r;
}

TEST(KendallTau, IdentityAndReverse) {
    std::vector<std::int32_t> a{1, 2, 3, 4, 5};
    std::vector<std::int32_t> rev{5, 4, 3, 2, 1};
    EXPECT_DOUBLE_EQ(kendall_tau(a, a).tau, 1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(a, rev).tau, -1.0);
    std::vector<std::int32_t> tied{1, 1, 2, 2, 3};
    EXPECT_DOUBLE_EQ(kendall_tau(tied, tied).tau, 1.0);
}

TEST(KendallTau, HandComputedTauB) {
    // x = 1 1 2 3, y = 1 2 2 3: C = 4, D = 0, ties x-only 1, y-only 1.
    std::vector<std::int32_t> x{1, 1, 2, 3}, y{1, 2, 2, 3};
    auto r = kendall_tau(x, y);
    EXPECT_EQ(r.concordant, 4);
    EXPECT_EQ(r.discordant, 0);
    EXPECT_EQ(r.ties_first, 1);
    EXPECT_EQ(r.ties_second, 1);
    EXPECT_EQ(r.ties_both, 0);
    EXPECT_NEAR(r.tau, 4.0 / 5.0, 1e-15);
}

TEST(KendallTau, UndefinedWhenConstant) {
    std::vector<std::int32_t> flat{2, 2, 2}, other{1, 2, 3};
    auto r = kendall_tau(flat, other);
    EXPECT_FALSE(r.defined);
    EXPECT_TRUE(std::isnan(r.tau));
    EXPECT_TRUE(to_json(r)["tau"].is_null());
    EXPECT_FALSE(kendall_tau(std::vector<std::int32_t>{1}, std::vector<std::int32_t>{1}).defined);
    EXPECT_FALSE(kendall_tau(std::vector<std::int32_t>{}, std::vector<std::int32_t>{}).defined);
}

TEST(KendallTau, LengthAndNodeSetMismatch) {
    std::vector<std::int32_t> a{1, 2}, b{1, 2, 3};
    EXPECT_THROW(kendall_tau(a, b), std::invalid_argument);
    std::map<std::string, std::int32_t> m1{{"a", 1}, {"b", 2}}, m2{{"a", 1}, {"c", 2}}, m3{{"a", 1}};
    EXPECT_THROW(kendall_tau(m1, m2), std::invalid_argument);
    EXPECT_THROW(kendall_tau(m1, m3), std::invalid_argument);
    std::map<std::string, std::int32_t> m4{{"b", 1}, {"a", 2}};
    EXPECT_DOUBLE_EQ(kendall_tau(m1, m4).tau, -1.0);
}

TEST(KendallTau, MatchesQuadraticOracle) {
    std::mt19937_64 rng(51);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t n = rng() % 120;
        const int levels = 1 + static_cast<int>(rng() % 12);
        auto a = random_ranking(rng, n, levels);
        auto b = random_ranking(rng, n, 1 + static_cast<int>(rng() % 12));
        auto fast = kendall_tau(a, b);
        auto slow = testing::quadratic_tau(a, b);
        ASSERT_EQ(fast.defined, slow.defined);
        EXPECT_EQ(fast.concordant, slow.concordant);
        EXPECT_EQ(fast.discordant, slow.discordant);
        EXPECT_EQ(fast.ties(), slow.ties);
        if (slow.defined) {
            EXPECT_NEAR(fast.tau, slow.tau, 1e-12);
            EXPECT_LE(std::fabs(fast.tau), 1.0 + 1e-15);
        }
        auto j = to_json(fast);
        EXPECT_EQ(j["concordant"], fast.concordant);
        EXPECT_EQ(j["ties"], fast.ties());
    }
}

TEST(KendallTau, SymmetricAndRelabelInvariant) {
    std::mt19937_64 rng(52);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 2 + rng() % 100;
        auto a = random_ranking(rng, n, 6);
        auto b = random_ranking(rng, n, 6);
        auto ab = kendall_tau(a, b), ba = kendall_tau(b, a);
        ASSERT_EQ(ab.defined, ba.defined);
        if (!ab.defined) continue;
        EXPECT_NEAR(ab.tau, ba.tau, 1e-15);
        // Strictly increasing relabel: r -> 3r*r + 7.
        auto relabeled = a;
        for (auto& x : relabeled) x = 3 * x * x + 7;
        EXPECT_NEAR(kendall_tau(relabeled, b).tau, ab.tau, 1e-15);
    }
}

TEST(KendallTau, RankAssignmentOverload) {
    RankAssignment a(std::vector<std::int32_t>{1, 2, 2}), b(std::vector<std::int32_t>{1, 1, 2});
    EXPECT_EQ(kendall_tau(a, b).tau, kendall_tau(a.values(), b.values()).tau);
}

TEST(Collapse, AggregatesAcrossLabels) {
    LabeledGraph::Builder b;
    b.add_edge("x1", "y1", 2.0);
    b.add_edge("x2", "y2", 3.0);
    b.add_edge("x1", "x2", 4.0);
    b.add_label("x1", "X");
    b.add_label("x2", "X");
    b.add_label("y1", "Y");
    b.add_label("y2", "Y");
    auto c = collapse_by_label(b.build());
    ASSERT_EQ(c.num_nodes(), 2u);
    ASSERT_EQ(c.num_edges(), 1u);
    EXPECT_EQ(c.edges()[0], (Edge{*c.find_node("X"), *c.find_node("Y"), 5.0}));
    EXPECT_EQ(c.label_name(c.labels(*c.find_node("X"))[0]), "X");
}

TEST(Collapse, SingleLabelGivesNoEdges) {
    LabeledGraph::Builder b;
    b.add_edge("a", "b");
    b.add_edge("b", "a");
    b.add_label("a", "S");
    b.add_label("b", "S");
    auto c = collapse_by_label(b.build());
    EXPECT_EQ(c.num_nodes(), 1u);
    EXPECT_EQ(c.num_edges(), 0u);
}

TEST(Collapse, RejectsZeroOrManyLabels) {
    LabeledGraph::Builder none;
    none.add_edge("a", "b");
    none.add_label("a", "X");
    EXPECT_THROW(collapse_by_label(none.build()), std::invalid_argument);
    LabeledGraph::Builder two;
    two.add_label("a", "X");
    two.add_label("a", "Y");
    EXPECT_THROW(collapse_by_label(two.build()), std::invalid_argument);
}

LabeledGraph single_label_graph(std::mt19937_64& rng) {
    LabeledGraph::Builder b;
    const int n = 2 + static_cast<int>(rng() % 30);
    const int labels = 1 + static_cast<int>(rng() % 6);
    for (int v = 0; v < n; ++v) b.add_label("n" + std::to_string(v), "t" + std::to_string(rng() % labels));
    for (int i = 0, m = static_cast<int>(rng() % 80); i < m; ++i)
        b.add_edge("n" + std::to_string(rng() % n), "n" + std::to_string(rng() % n),
                   static_cast<double>(1 + rng() % 4));
    return b.build();
}

TEST(Collapse, PreservesTreeScoresAndCrossWeight) {
    std::mt19937_64 rng(53);
    for (int iter = 0; iter < 30; ++iter) {
        auto g = single_label_graph(rng);
        auto c = collapse_by_label(g);
        double intra = 0.0;
        for (const auto& e : g.edges())
            if (g.labels(e.source)[0] == g.labels(e.target)[0]) intra += e.weight;
        EXPECT_EQ(total_weight(c), total_weight(g) - intra);
        for (int t = 0; t < 10; ++t) {
            auto tree = testing::random_tree(rng, g, 6, true);
            // Intra-label edges always sit inside one rank and cost their weight.
            EXPECT_EQ(score_tree(tree, g), score_tree(tree, c) + intra);
        }
    }
}

TEST(Exhaustive, Guards) {
    LabeledGraph::Builder b;
    for (int i = 0; i < 5; ++i) b.add_label("n" + std::to_string(i), "t" + std::to_string(i));
    auto g = b.build();
    EXPECT_THROW(exhaustive_tree_search(g, 3), std::invalid_argument);
    auto toy = testing::toy_graph();
    EXPECT_THROW(exhaustive_tree_search(toy, 0), std::invalid_argument);
    EXPECT_THROW(exhaustive_tree_search(toy, 6), std::invalid_argument);
}

TEST(Exhaustive, KnownInstances) {
    auto two = exhaustive_tree_search(testing::two_tier_graph(3, 9), 5);
    EXPECT_EQ(two.score, 0.0);

    LabeledGraph::Builder b;
    b.add_edge("a", "b", 2.0);
    b.add_edge("b", "a", 1.0);
    auto bare = b.build();
    auto none = exhaustive_tree_search(bare, 5);
    EXPECT_EQ(none.tree.leaf_count(), 1u);
    EXPECT_EQ(none.score, 3.0);

    auto toy = exhaustive_tree_search(testing::toy_graph(), 5);
    EXPECT_EQ(toy.score, score_tree(toy.tree, testing::toy_graph()));
    EXPECT_LE(toy.score, 5.0);
    EXPECT_EQ(exhaustive_tree_search(testing::toy_graph(), 1).score, 7.0);
}

TEST(Exhaustive, NeedsNegatedCriteria) {
    // Only "A" exists and holders must come last: a -> b with b holding A.
    LabeledGraph::Builder b;
    b.add_edge("a", "b");
    b.add_label("b", "A");
    auto g = b.build();
    auto best = exhaustive_tree_search(g, 2);
    EXPECT_EQ(best.score, 0.0);
    EXPECT_FALSE(best.tree.node(best.tree.root()).criterion);
}

TEST(Exhaustive, IsALowerBoundOnRandomTrees) {
    std::mt19937_64 rng(54);
    for (int iter = 0; iter < 40; ++iter) {
        auto g = testing::random_graph(rng, {.max_nodes = 8, .max_edges = 20, .max_labels = 3});
        auto best = exhaustive_tree_search(g, 4);
        EXPECT_EQ(best.score, score_tree(best.tree, g));
        EXPECT_LE(static_cast<int>(best.tree.leaf_count()), 4);
        for (int t = 0; t < 20; ++t) {
            auto tree = testing::random_tree(rng, g, 4);
            EXPECT_LE(best.score, score_tree(tree, g));
        }
        EXPECT_LE(best.score, score_tree(prune(greedy(g), 4), g));
    }
}

}  // namespace
}  // namespace agony
