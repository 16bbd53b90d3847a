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

#pragma once

#include <chrono>
#include <span>
#include <vector>

#include "dgs/cost.hpp"
#include "dgs/graph.hpp"
#include "dgs/max_flow.hpp"
#include "dgs/objective.hpp"
#include "dgs/repair.hpp"
#include "dgs/solve_config.hpp"

namespace dgs {

/// Two-group cut network: graph vertex v is node v, s = n, t = n + 1.
/// Source side of a cut = group 1 (index 0). Solvers read the largest
/// minimum-cut source side, so ties go to the lower group.
inline FlowNetwork build_cut_graph_k2(const DirectedGraph& graph, const FeatureMatrix& features,
                                      std::span<const double> mu1, std::span<const double> mu2,
                                      const Penalties& penalties) {
    const auto n = static_cast<std::uint32_t>(graph.num_vertices());
    FlowNetwork net(n + 2, n, n + 1);
    for (VertexId v = 0; v < n; ++v) {
        net.add_arc(net.source, v, squared_distance(features.row(v), mu2));
        net.add_arc(v, net.sink, squared_distance(features.row(v), mu1));
    }
    for (const auto& e : graph.edges()) {
        net.add_arc(e.src, e.dst, edge_penalty(penalties.lambda_f, 1));
        net.add_arc(e.dst, e.src, edge_penalty(penalties.lambda_b, 1));
    }
    return net;
}

struct TwoPartitionResult {
    OrderedPartition partition;
    Cost cost;       // fixed-centroid cost of `partition`
    Cost cut_value;  // value reported by the flow kernel
};

/// Exact fixed-centroid optimum for k = 2 via one minimum cut.
inline TwoPartitionResult solve_two_partition(const DirectedGraph& graph, const FeatureMatrix& features,
                                              std::span<const double> mu1, std::span<const double> mu2,
                                              const Penalties& penalties) {
    const auto net = build_cut_graph_k2(graph, features, mu1, mu2, penalties);
    const auto cut = max_flow_min_cut(net);
    const auto n = graph.num_vertices();
    std::vector<GroupId> groups(n);
    for (VertexId v = 0; v < n; ++v) groups[v] = cut.largest_source_side[v] ? 0 : 1;
    OrderedPartition partition(2, std::move(groups));
    const auto centroids = Centroids::from_rows({{mu1.begin(), mu1.end()}, {mu2.begin(), mu2.end()}});
    const Cost cost = fixed_centroid_cost(graph, features, partition, centroids, penalties);
    return {std::move(partition), cost, cut.value};
}

/// Network for redistributing S_i and S_j (i < j) with every other group and
/// all centroids fixed. Node x < vertices.size() stands for vertices[x].
struct PairCutNetwork {
    FlowNetwork net;
    std::vector<VertexId> vertices;
};

inline PairCutNetwork build_cut_graph_pair(const SolveState& state, GroupId i, GroupId j) {
    if (!(i < j && j < state.k())) throw std::invalid_argument("pair needs 0 <= i < j < k");
    const auto& graph = state.graph();
    const auto& features = state.features();
    const auto& part = state.partition();
    const auto& pen = state.penalties();

    PairCutNetwork out;
    std::vector<std::uint32_t> local(part.size(), UINT32_MAX);
    for (VertexId v = 0; v < part.size(); ++v) {
        if (part[v] == i || part[v] == j) {
            local[v] = static_cast<std::uint32_t>(out.vertices.size());
            out.vertices.push_back(v);
        }
    }
    const auto size = static_cast<std::uint32_t>(out.vertices.size());
    out.net = FlowNetwork(size + 2, size, size + 1);
    if (size == 0) return out;

    const auto mu_i = state.centroid(i);
    const auto mu_j = state.centroid(j);
    auto between = [i, j](GroupId g) { return i < g && g < j; };

    for (std::uint32_t x = 0; x < size; ++x) {
        const auto v = out.vertices[x];
        std::int64_t from_w = 0;  // |E(W, v)|
        std::int64_t to_w = 0;    // |E(v, W)|
        for (auto u : graph.in_neighbors(v)) from_w += between(part[u]);
        for (auto w : graph.out_neighbors(v)) to_w += between(part[w]);
        const Cost to_source = Cost(squared_distance(features.row(v), mu_j)) +
                               edge_penalty(pen.lambda_f, from_w) + edge_penalty(pen.lambda_b, to_w);
        const Cost to_sink = Cost(squared_distance(features.row(v), mu_i)) +
                             edge_penalty(pen.lambda_b, from_w) + edge_penalty(pen.lambda_f, to_w);
        out.net.add_arc(out.net.source, x, to_source);
        out.net.add_arc(x, out.net.sink, to_sink);
    }
    for (std::uint32_t x = 0; x < size; ++x) {
        for (auto w : graph.out_neighbors(out.vertices[x])) {
            if (local[w] == UINT32_MAX) continue;
            out.net.add_arc(x, local[w], edge_penalty(pen.lambda_f, 1));
            out.net.add_arc(local[w], x, edge_penalty(pen.lambda_b, 1));
        }
    }
    return out;
}

/// Optimal split of S_i and S_j for the current centroids, as a target group per
/// vertex of the pair network.
inline std::vector<GroupId> solve_pair_partition(const SolveState& state, GroupId i, GroupId j) {
    const auto pair = build_cut_graph_pair(state, i, j);
    std::vector<GroupId> targets(pair.vertices.size());
    if (pair.vertices.empty()) return targets;
    const auto cut = max_flow_min_cut(pair.net);
    for (std::size_t x = 0; x < pair.vertices.size(); ++x) targets[x] = cut.largest_source_side[x] ? i : j;
    return targets;
}

/// One Mcut pair step: cut, commit if the total cost drops by more than
/// config.commit_tol, otherwise roll back. Pairs with an empty group are skipped.
inline bool mcut_pair_step(SolveState& state, GroupId i, GroupId j, const SolveConfig& config) {
    if (state.count(i) == 0 || state.count(j) == 0) return false;
    const auto pair = build_cut_graph_pair(state, i, j);
    const auto cut = max_flow_min_cut(pair.net);

    const Cost before = state.total();
    std::vector<std::pair<VertexId, GroupId>> undo;
    for (std::size_t x = 0; x < pair.vertices.size(); ++x) {
        const auto v = pair.vertices[x];
        const GroupId target = cut.largest_source_side[x] ? i : j;
        const GroupId current = state.partition()[v];
        if (target == current) continue;
        undo.emplace_back(v, current);
        state.move(v, target);
    }
    if (undo.empty()) return false;
    const Cost after = state.total();
    if (!strictly_improves(after - before, config.commit_tol) ||
        (config.forbid_empty && (state.count(i) == 0 || state.count(j) == 0))) {
        for (auto it = undo.rbegin(); it != undo.rend(); ++it) state.move(it->first, it->second);
        state.refresh();
        return false;
    }
    // Cached sums drift after bulk moves; a pair step is O(n) anyway.
    state.refresh();
    if (config.on_step) config.on_step({StepEvent::Kind::PairStep, state.partition(), before, state.total()});
    return true;
}

/// Iterative two-group search: sweeps all pairs i < j in lexicographic order,
/// updating the two centroids after each pair, until a sweep commits nothing,
/// the relative improvement drops below rel_tol, or max_iters sweeps ran.
/// Returns the lowest-cost partition seen.
inline SolveResult run_mcut(const DirectedGraph& graph, const FeatureMatrix& features, const Penalties& penalties,
                            std::size_t k, OrderedPartition init, const SolveConfig& config) {
    config.validate();
    penalties.validate();
    if (k < 2) throw std::invalid_argument("mcut needs k >= 2");
    if (init.k() != k) throw std::invalid_argument("initial partition has the wrong k");
    const auto start = std::chrono::steady_clock::now();

    SolveState state(graph, features, std::move(init), penalties);
    SolveResult result;
    result.seed = config.seed;
    OrderedPartition best = state.partition();
    Cost best_loss = state.total();
    Cost previous = best_loss;

    for (int it = 1; it <= config.max_iters; ++it) {
        result.iterations = it;
        if (config.repair_empty || config.forbid_empty) result.empty_groups = repair_empty_groups(state);
        std::size_t committed = 0;
        for (GroupId i = 0; i < k; ++i)
            for (GroupId j = i + 1; j < k; ++j) committed += mcut_pair_step(state, i, j, config);
        const Cost loss = state.total();
        result.loss_trace.push_back(loss);
        if (loss < best_loss) {
            best_loss = loss;
            best = state.partition();
        }
        if (committed == 0 || relative_improvement(previous, loss) < config.rel_tol) {
            result.converged = true;
            break;
        }
        previous = loss;
    }
    result.partition = std::move(best);
    result.breakdown = total_cost(graph, features, result.partition, penalties);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace dgs
