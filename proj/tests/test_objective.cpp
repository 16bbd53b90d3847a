/*
Copyright 2026 The dgs Authors

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

#include <random>

#include "dgs/objective.hpp"
#include "support/test_support.hpp"

namespace dgs {
namespace {

FeatureMatrix features_1d(std::vector<double> xs) {
    const auto n = xs.size();
    return FeatureMatrix(n, 1, std::move(xs));
}

TEST(Cost, LexicographicOrder) {
    EXPECT_LT(Cost(1e300), Cost::infinity());
    EXPECT_LT(Cost::infinity(1), Cost::infinity(2));
    EXPECT_LT(Cost(1, 0.0), Cost(1, 0.5));
    EXPECT_EQ((Cost(2.0) + Cost::infinity()).value(), kInf);
    EXPECT_EQ(edge_penalty(kInf, 0), Cost{});
    EXPECT_EQ(edge_penalty(kInf, 3).infinite_units(), 3);
    EXPECT_TRUE(strictly_improves(Cost(-1, 5.0), 1e-9));
    EXPECT_FALSE(strictly_improves(Cost(-1e-12), 1e-9));
}

TEST(CoherenceL2, Examples) {
    const auto f = features_1d({0.0, 1.0, 7.5});
    EXPECT_EQ(coherence_l2({}, f), 0.0);
    const VertexId single[] = {2};
    EXPECT_EQ(coherence_l2(single, f), 0.0);
    const VertexId pair[] = {0, 1};
    EXPECT_DOUBLE_EQ(coherence_l2(pair, f), 0.5);

    // Grid scan over mu: the minimum of (mu)^2 + (1-mu)^2 is the closed form.
    double best = 1e9;
    for (int i = 0; i <= 10000; ++i) {
        const double mu = i / 10000.0;
        best = std::min(best, mu * mu + (1 - mu) * (1 - mu));
    }
    EXPECT_NEAR(best, 0.5, 1e-12);
}

TEST(UpdateCentroids, Examples) {
    const auto f = features_1d({0.0, 1.0});
    const auto c = update_centroids(OrderedPartition(2, {0, 1}), f);
    EXPECT_EQ(c.row(0)[0], 0.0);
    EXPECT_EQ(c.row(1)[0], 1.0);
    const auto one = update_centroids(OrderedPartition(1, {0, 0}), f);
    EXPECT_EQ(one.row(0)[0], 0.5);
    const auto empty = update_centroids(OrderedPartition(2, {0, 0}), f);
    EXPECT_TRUE(empty.is_defined(0));
    EXPECT_FALSE(empty.is_defined(1));
}

TEST(TotalCost, PathExamples) {
    const DirectedGraph g(3, {{0, 1}, {1, 2}});
    const auto f = features_1d({0.0, 0.0, 1.0});
    const Penalties pen{0.0, 5.0};
    const auto a = total_cost(g, f, OrderedPartition(2, {0, 0, 1}), pen);
    EXPECT_EQ(a.coherence, 0.0);
    EXPECT_EQ(a.forward_edges, 1);
    EXPECT_EQ(a.backward_edges, 0);
    EXPECT_EQ(a.total, Cost(0.0));

    const auto b = total_cost(g, f, OrderedPartition(2, {1, 1, 0}), pen);
    EXPECT_EQ(b.coherence, 0.0);
    EXPECT_EQ(b.forward_edges, 0);
    EXPECT_EQ(b.backward_edges, 1);
    EXPECT_EQ(b.total, Cost(5.0));
}

TEST(FixedCentroidCost, Examples) {
    const auto f1 = features_1d({0.0});
    const DirectedGraph g1(1, {});
    EXPECT_EQ(fixed_centroid_cost(g1, f1, OrderedPartition(1, {0}), Centroids::from_rows({{1.0}}), {}),
              Cost(1.0));

    const auto f2 = features_1d({0.0, 1.0});
    const DirectedGraph g2(2, {{0, 1}});
    EXPECT_EQ(fixed_centroid_cost(g2, f2, OrderedPartition(1, {0, 0}), Centroids::from_rows({{0.0}}),
                                  {3.0, kInf}),
              Cost(1.0));

    Centroids partial(2, 1);
    partial.set(0, std::vector<double>{0.0});
    EXPECT_THROW(fixed_centroid_cost(g2, f2, OrderedPartition(2, {0, 1}), partial, {}), ValidationError);
}

TEST(FixedCentroidCost, MatchesTotalCostAtMeans) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const auto g = testing::random_digraph(rng, 12, 30);
        const auto f = testing::random_features(rng, 12, 3);
        const auto p = testing::random_partition(rng, 12, 3);
        const Penalties pen{testing::pick_lambda(rng), testing::pick_lambda(rng)};
        auto c = update_centroids(p, f);
        EXPECT_TRUE(approx_equal(fixed_centroid_cost(g, f, p, c, pen), total_cost(g, f, p, pen).total, 1e-12));
    }
}

TEST(MoveDelta, Examples) {
    const DirectedGraph g(3, {});
    const auto f = features_1d({0.0, 1.0, 2.0});
    SolveState s(g, f, OrderedPartition(2, {0, 0, 1}), {});
    EXPECT_NEAR(s.move_delta(1, 1).value(), 0.0, 1e-15);

    // Involution: delta there plus delta back is zero.
    const auto there = s.move_delta(1, 1);
    s.move(1, 1);
    const auto back = s.move_delta(1, 0);
    EXPECT_NEAR((there + back).value(), 0.0, 1e-12);

    // Duplicate isolated points split across two groups.
    const auto fd = features_1d({3.0, 3.0});
    const DirectedGraph gd(2, {});
    SolveState sd(gd, fd, OrderedPartition(2, {0, 1}), {1.0, 1.0});
    EXPECT_EQ(sd.move_delta(0, 1), Cost(0.0));
}

TEST(MoveDelta, FourTermIdentityMatchesHartiganForm) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 3 + t % 20, d = 1 + t % 5, k = 2 + t % 3;
        const DirectedGraph g(n, {});
        const auto f = testing::random_features(rng, n, d);
        const SolveState s(g, f, testing::random_partition(rng, n, k), {});
        const VertexId v = static_cast<VertexId>(rng() % n);
        const GroupId to = static_cast<GroupId>((s.partition()[v] + 1 + rng() % (k - 1)) % k);
        const GroupId from = s.partition()[v];

        auto weighted_norm = [&](std::vector<VertexId> members) {
            std::vector<double> mean(d, 0.0);
            for (auto u : members)
                for (std::size_t c = 0; c < d; ++c) mean[c] += f.row(u)[c];
            double norm = 0.0;
            for (auto& x : mean) {
                x /= members.empty() ? 1.0 : static_cast<double>(members.size());
                norm += x * x;
            }
            return static_cast<double>(members.size()) * norm;
        };
        auto si = s.partition().members(from), sj = s.partition().members(to);
        auto si2 = si, sj2 = sj;
        si2.erase(std::find(si2.begin(), si2.end(), v));
        sj2.push_back(v);
        const double four_term = weighted_norm(si) + weighted_norm(sj) - weighted_norm(si2) - weighted_norm(sj2);
        EXPECT_NEAR(s.coherence_delta(v, to), four_term, 1e-9 * std::max(1.0, std::abs(four_term)));
    }
}

// Decomposition identity on random groups.
TEST(ObjectiveProperties, DecompositionIdentity) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 100, d = 1 + rng() % 16;
        const DirectedGraph g(n, {});
        const auto f = testing::random_features(rng, n, d, 10.0);
        const SolveState s(g, f, OrderedPartition::single_group(n), {});
        std::vector<VertexId> all(n);
        for (VertexId v = 0; v < n; ++v) all[v] = v;
        const double direct = coherence_l2(all, f);
        EXPECT_NEAR(s.group_coherence(0), direct, 1e-9 * std::max(1.0, s.squared_norm_sum(0)));
    }
}

TEST(ObjectiveProperties, MoveDeltaMatchesRecomputation) {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + rng() % 30, k = 2 + rng() % 4, d = 1 + rng() % 6;
        const auto g = testing::random_digraph(rng, n, 3 * n);
        const auto f = testing::random_features(rng, n, d);
        const Penalties pen{testing::pick_lambda(rng), testing::pick_lambda(rng)};
        const SolveState s(g, f, testing::random_partition(rng, n, k), pen);
        const VertexId v = static_cast<VertexId>(rng() % n);
        const GroupId to = static_cast<GroupId>((s.partition()[v] + 1 + rng() % (k - 1)) % k);

        auto moved = s.partition();
        moved.assign(v, to);
        const Cost before = total_cost(g, f, s.partition(), pen).total;
        const Cost after = total_cost(g, f, moved, pen).total;
        const Cost delta = s.move_delta(v, to);
        const Cost expected = after - before;
        EXPECT_EQ(delta.infinite_units(), expected.infinite_units());
        const double scale = std::max({1.0, before.finite_part(), after.finite_part()});
        EXPECT_NEAR(delta.finite_part(), expected.finite_part(), 1e-9 * scale);
        ++checked;
    }
    EXPECT_EQ(checked, 1000);
}

TEST(ObjectiveProperties, EdgeReversalSymmetry) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng() % 20, k = 1 + rng() % 5;
        const auto g = testing::random_digraph(rng, n, 40);
        const auto f = testing::random_features(rng, n, 2);
        const auto p = testing::random_partition(rng, n, k);
        std::vector<GroupId> flipped(n);
        for (VertexId v = 0; v < n; ++v) flipped[v] = static_cast<GroupId>(k - 1 - p[v]);
        const Penalties pen{testing::pick_lambda(rng), testing::pick_lambda(rng)};
        const auto a = total_cost(g, f, p, pen);
        const auto b = total_cost(g.reversed(), f, OrderedPartition(k, flipped), pen);
        EXPECT_EQ(a.forward_edges, b.forward_edges);
        EXPECT_EQ(a.backward_edges, b.backward_edges);
        EXPECT_TRUE(approx_equal(a.total, b.total, 1e-12));
    }
}

TEST(ObjectiveProperties, ZeroPenaltiesGiveKMeansSse) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng() % 60, k = 1 + rng() % 6, d = 1 + rng() % 8;
        const auto g = testing::random_digraph(rng, n, 2 * n);
        const auto f = testing::random_features(rng, n, d, 3.0);
        const auto p = testing::random_partition(rng, n, k);
        const double sse = testing::kmeans_sse(f, p.groups(), k);
        const auto c = total_cost(g, f, p, {0.0, 0.0});
        EXPECT_NEAR(c.total.value(), sse, 1e-9 * std::max(1.0, sse));
    }
}

TEST(ObjectiveProperties, CrossEdgesBoundedByM) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng() % 20;
        const auto g = testing::random_digraph(rng, n, 60);
        const auto p = testing::random_partition(rng, n, 1 + rng() % 5);
        const auto counts = count_cross_edges(g, p);
        std::int64_t within = 0;
        for (const auto& e : g.edges()) within += p[e.src] == p[e.dst];
        EXPECT_EQ(counts.forward + counts.backward + within, static_cast<std::int64_t>(g.num_edges()));
    }
}

TEST(SolveState, IncrementalMovesMatchRebuild) {
    std::mt19937_64 rng(41);
    const std::size_t n = 200, k = 5;
    const auto g = testing::random_digraph(rng, n, 800);
    const auto f = testing::random_features(rng, n, 4);
    SolveState s(g, f, testing::random_partition(rng, n, k), {0.5, 2.0});
    for (int step = 0; step < 5000; ++step) {
        s.move(static_cast<VertexId>(rng() % n), static_cast<GroupId>(rng() % k));
        if (step % 500 == 0) {
            EXPECT_TRUE(s.matches_rebuild(1e-9)) << "step " << step;
        }
    }
    EXPECT_TRUE(s.matches_rebuild(1e-9));
    EXPECT_TRUE(approx_equal(s.total(), total_cost(g, f, s.partition(), s.penalties()).total, 1e-9));
}

}  // namespace
}  // namespace dgs
