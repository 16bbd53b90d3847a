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

#include "dgs/max_flow.hpp"
#include "support/test_support.hpp"

namespace dgs {
namespace {

TEST(MaxFlow, SinglePath) {
    // s = 0, a = 1, t = 2
    FlowNetwork net(3, 0, 2);
    net.add_arc(0, 1, 3.0);
    net.add_arc(1, 2, 1.0);
    const auto cut = max_flow_min_cut(net);
    EXPECT_EQ(cut.value, Cost(1.0));
    EXPECT_EQ(cut.source_side, (std::vector<char>{1, 1, 0}));
}

TEST(MaxFlow, DirectArc) {
    FlowNetwork net(2, 0, 1);
    net.add_arc(0, 1, 7.0);
    EXPECT_EQ(max_flow_min_cut(net).value, Cost(7.0));
}

TEST(MaxFlow, TwoDisjointPaths) {
    // s = 0, a = 1, b = 2, t = 3
    FlowNetwork net(4, 0, 3);
    net.add_arc(0, 1, 2.0);
    net.add_arc(1, 3, 2.0);
    net.add_arc(0, 2, 5.0);
    net.add_arc(2, 3, 1.0);
    const auto cut = max_flow_min_cut(net);
    EXPECT_EQ(cut.value, Cost(3.0));
    EXPECT_EQ(cut_weight(net, cut.source_side), cut.value);
}

TEST(MaxFlow, InfiniteArcAvoidedWhenPossible) {
    FlowNetwork net(3, 0, 2);
    net.add_arc(0, 1, kInf);
    net.add_arc(1, 2, 4.5);
    net.add_arc(0, 2, 1.0);
    const auto cut = max_flow_min_cut(net);
    EXPECT_EQ(cut.value, Cost(5.5));
    EXPECT_TRUE(cut.source_side[1]);
}

TEST(MaxFlow, UnavoidableInfiniteCut) {
    FlowNetwork net(3, 0, 2);
    net.add_arc(0, 1, kInf);
    net.add_arc(1, 2, Cost(2, 0.25));
    const auto cut = max_flow_min_cut(net);
    EXPECT_EQ(cut.value.infinite_units(), 1);
    EXPECT_EQ(cut.value.finite_part(), 0.0);
}

TEST(MaxFlow, RejectsNegativeCapacity) {
    FlowNetwork net(2, 0, 1);
    EXPECT_THROW(net.add_arc(0, 1, -1.0), std::invalid_argument);
}

// Dyadic capacities sit exactly on the flow grid, so equality is exact.
TEST(MaxFlowProperties, MatchesBruteForce) {
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> cap(0, 64);
    for (int t = 0; t < 100; ++t) {
        const std::uint32_t nodes = 2 + static_cast<std::uint32_t>(rng() % 13);
        FlowNetwork net(nodes, 0, nodes - 1);
        const std::size_t arcs = rng() % (3 * nodes + 1);
        for (std::size_t a = 0; a < arcs; ++a) {
            const auto u = static_cast<std::uint32_t>(rng() % nodes);
            const auto v = static_cast<std::uint32_t>(rng() % nodes);
            if (u == v) continue;
            if (rng() % 20 == 0) net.add_arc(u, v, kInf);
            else net.add_arc(u, v, cap(rng) / 8.0);
        }
        const auto cut = max_flow_min_cut(net);
        EXPECT_EQ(cut.value, testing::brute_min_cut(net)) << "trial " << t;
        EXPECT_EQ(testing::brute_cut_weight(net, cut.source_side), cut.value) << "trial " << t;
        EXPECT_TRUE(cut.source_side[net.source]);
        EXPECT_FALSE(cut.source_side[net.sink]);
    }
}

TEST(MaxFlowProperties, RealCapacitiesWithinGridError) {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> cap(0.0, 10.0);
    for (int t = 0; t < 50; ++t) {
        const std::uint32_t nodes = 3 + static_cast<std::uint32_t>(rng() % 9);
        FlowNetwork net(nodes, 0, nodes - 1);
        for (std::size_t a = 0; a < 3 * nodes; ++a) {
            const auto u = static_cast<std::uint32_t>(rng() % nodes);
            const auto v = static_cast<std::uint32_t>(rng() % nodes);
            if (u != v) net.add_arc(u, v, cap(rng));
        }
        const auto cut = max_flow_min_cut(net);
        const auto brute = testing::brute_min_cut(net);
        EXPECT_NEAR(cut.value.value(), brute.value(), 1e-9);
        EXPECT_NEAR(cut_weight(net, cut.source_side).value(), brute.value(), 1e-9);
    }
}

}  // namespace
}  // namespace dgs
