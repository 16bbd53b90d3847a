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

#include <cmath>
#include <random>

#include "dgs/driver.hpp"
#include "dgs/experiments.hpp"
#include "dgs/oracle.hpp"
#include "support/test_support.hpp"

namespace dgs {
namespace {

TEST(RandomInit, SingleGroup) {
    const auto p = random_init(50, 1, 3);
    EXPECT_EQ(p.group_sizes(), (std::vector<std::size_t>{50}));
}

TEST(RandomInit, Deterministic) {
    EXPECT_EQ(random_init(1000, 7, 42), random_init(1000, 7, 42));
    EXPECT_NE(random_init(1000, 7, 42), random_init(1000, 7, 43));
}

TEST(RandomInit, BalancedWithinFiveSigma) {
    const std::size_t n = 100'000, k = 5;
    const auto sizes = random_init(n, k, 2024).group_sizes();
    const double mean = static_cast<double>(n) / k;
    const double sigma = std::sqrt(n * (1.0 / k) * (1.0 - 1.0 / k));
    for (auto s : sizes) EXPECT_LE(std::abs(static_cast<double>(s) - mean), 5 * sigma);
}

TEST(RunIterative, FourPathTreeDp) {
    const DirectedGraph g(4, {{0, 1}, {1, 2}, {2, 3}});
    const FeatureMatrix f(4, 1, {0.0, 0.0, 1.0, 1.0});
    const Penalties pen{0.0, 1e5};
    const auto oracle = brute_force_dgs(g, f, pen, 2);
    ASSERT_EQ(oracle.partition.groups(), (std::vector<GroupId>{0, 0, 1, 1}));
    SolveConfig config;
    config.solver = SolverKind::TreeDp;
    config.restarts = 10;
    const auto r = multi_restart(g, f, pen, 2, config);
    EXPECT_EQ(r.partition.groups(), (std::vector<GroupId>{0, 0, 1, 1}));
    EXPECT_EQ(r.breakdown.coherence, 0.0);
    EXPECT_EQ(r.breakdown.forward_edges, 1);
    EXPECT_EQ(r.breakdown.backward_edges, 0);
    EXPECT_EQ(r.breakdown.total, Cost(0.0));
}

TEST(RunIterative, SingleGroupIsPlainCoherence) {
    std::mt19937_64 rng(4);
    const auto g = testing::random_arborescence(rng, 30);
    const auto f = testing::random_features(rng, 30, 3);
    std::vector<VertexId> all(30);
    for (VertexId v = 0; v < 30; ++v) all[v] = v;
    for (auto kind : {SolverKind::Greedy, SolverKind::TreeDp}) {
        SolveConfig config;
        config.solver = kind;
        const auto r = run_iterative(g, f, {1.0, kInf}, 1, config);
        EXPECT_EQ(r.iterations, 1);
        EXPECT_NEAR(r.breakdown.total.value(), coherence_l2(all, f), 1e-9);
    }
}

TEST(RunIterative, MaxItersOne) {
    const auto inst = gen_stree(200, 4, 4, 0.05, 1);
    for (auto kind : {SolverKind::Greedy, SolverKind::TreeDp, SolverKind::Mcut}) {
        SolveConfig config;
        config.solver = kind;
        config.max_iters = 1;
        const auto r = run_iterative(inst.graph, inst.features, {0.0, 1e5}, 4, config);
        EXPECT_EQ(r.iterations, 1);
        EXPECT_FALSE(r.converged) << to_string(kind);
    }
}

TEST(RunIterative, TreeDpRejectsNonTree) {
    const DirectedGraph g(3, {{0, 1}, {2, 1}});
    const FeatureMatrix f(3, 1);
    SolveConfig config;
    config.solver = SolverKind::TreeDp;
    EXPECT_THROW(run_iterative(g, f, {}, 2, config), StructureError);
}

TEST(RunIterative, BreakdownRevalidates) {
    const auto inst = gen_sdag(200, 3, 4, 0.05, 0.02, 9);
    for (auto kind : {SolverKind::Greedy, SolverKind::Mcut}) {
        SolveConfig config;
        config.solver = kind;
        config.seed = 5;
        const auto r = run_iterative(inst.graph, inst.features, {0.2, 3.0}, 4, config);
        const auto fresh = total_cost(inst.graph, inst.features, r.partition, {0.2, 3.0});
        EXPECT_TRUE(approx_equal(r.breakdown.total, fresh.total, 1e-9));
        EXPECT_EQ(r.breakdown.forward_edges, fresh.forward_edges);
    }
}

TEST(TreeDpIterations, MonotoneLoss) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = inject_noise(gen_stree(500, 5, 5, kDefaultVariance, seed), 0.3, seed + 100);
        SolveConfig config;
        config.solver = SolverKind::TreeDp;
        config.seed = seed;
        int violations = 0;
        config.on_step = [&](const StepEvent& e) {
            if (e.after - e.before > Cost(1e-7)) ++violations;
        };
        const auto r = run_iterative(inst.graph, inst.features, {0.0, 1e5}, 5, config);
        EXPECT_EQ(violations, 0);
        for (std::size_t i = 1; i < r.loss_trace.size(); ++i)
            EXPECT_FALSE(r.loss_trace[i] - r.loss_trace[i - 1] > Cost(1e-7)) << "iteration " << i;
    }
}

TEST(RepairEmptyGroups, NoOpWhenFull) {
    const DirectedGraph g(3, {});
    const FeatureMatrix f(3, 1, {0.0, 1.0, 2.0});
    SolveState s(g, f, OrderedPartition(2, {0, 1, 1}), {});
    EXPECT_EQ(repair_empty_groups(s), 0u);
    EXPECT_EQ(s.partition().groups(), (std::vector<GroupId>{0, 1, 1}));
}

TEST(RepairEmptyGroups, OutlierSeedsEmptyGroup) {
    const DirectedGraph g(4, {});
    const FeatureMatrix f(4, 1, {0.0, 0.1, 0.2, 9.0});
    SolveState s(g, f, OrderedPartition(2, {0, 0, 0, 0}), {});
    EXPECT_EQ(repair_empty_groups(s), 0u);
    EXPECT_EQ(s.partition().groups(), (std::vector<GroupId>{0, 0, 0, 1}));
}

TEST(RepairEmptyGroups, PigeonholeLeavesGroupEmpty) {
    const DirectedGraph g(1, {});
    const FeatureMatrix f(1, 1, {0.0});
    SolveState s(g, f, OrderedPartition(2, {0}), {});
    EXPECT_EQ(repair_empty_groups(s), 1u);
    EXPECT_EQ(s.count(1), 0u);
}

TEST(MultiRestart, SingleRestartMatchesRunIterative) {
    const auto inst = gen_sdag(200, 4, 4, 0.05, 0.02, 2);
    for (auto kind : {SolverKind::Greedy, SolverKind::Mcut}) {
        SolveConfig config;
        config.solver = kind;
        config.restarts = 1;
        config.seed = 11;
        const auto a = multi_restart(inst.graph, inst.features, {0.0, 1e5}, 4, config);
        const auto b = run_iterative(inst.graph, inst.features, {0.0, 1e5}, 4, config);
        EXPECT_EQ(a.partition, b.partition);
        EXPECT_EQ(a.breakdown.total, b.breakdown.total);
        EXPECT_EQ(a.seed, 11u);
    }
}

TEST(MultiRestart, ReturnsMinimumOverRestarts) {
    const auto inst = gen_sdag(200, 4, 4, 0.1, 0.02, 3);
    SolveConfig config;
    config.solver = SolverKind::Greedy;
    config.restarts = 6;
    config.seed = 20;
    config.threads = 3;
    const auto best = multi_restart(inst.graph, inst.features, {0.0, 5.0}, 4, config);
    for (int r = 0; r < 6; ++r) {
        SolveConfig one = config;
        one.seed = config.seed + static_cast<std::uint64_t>(r);
        const auto single = run_iterative(inst.graph, inst.features, {0.0, 5.0}, 4, one);
        EXPECT_LE(best.breakdown.total, single.breakdown.total);
    }
}

TEST(MultiRestart, DeterministicAcrossThreadCounts) {
    const auto inst = gen_stree(300, 4, 5, 0.05, 6);
    SolveConfig config;
    config.solver = SolverKind::TreeDp;
    config.restarts = 5;
    config.threads = 1;
    const auto a = multi_restart(inst.graph, inst.features, {0.0, 1e5}, 5, config);
    config.threads = 4;
    const auto b = multi_restart(inst.graph, inst.features, {0.0, 1e5}, 5, config);
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.breakdown.total, b.breakdown.total);
    EXPECT_EQ(a.seed, b.seed);
}

TEST(SolveConfig, Validation) {
    SolveConfig config;
    config.max_iters = 0;
    EXPECT_THROW(config.validate(), std::invalid_argument);
    config.max_iters = 1;
    config.restarts = 0;
    EXPECT_THROW(config.validate(), std::invalid_argument);
    EXPECT_THROW(parse_solver_kind("annealing"), std::invalid_argument);
    EXPECT_EQ(parse_solver_kind("mcut"), SolverKind::Mcut);
}

}  // namespace
}  // namespace dgs
