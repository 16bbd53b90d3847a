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

#include <limits>
#include <vector>

#include "dgs/cost.hpp"
#include "dgs/graph.hpp"
#include "dgs/objective.hpp"

namespace dgs {

/// Roots of a forest of arborescences, ascending. Throws StructureError on a
/// vertex with in-degree > 1 or on a cycle.
inline std::vector<VertexId> check_arborescence(const DirectedGraph& graph) {
    const auto n = static_cast<VertexId>(graph.num_vertices());
    std::vector<VertexId> roots;
    for (VertexId v = 0; v < n; ++v) {
        const auto deg = graph.in_degree(v);
        if (deg > 1) throw StructureError(v, "in-degree " + std::to_string(deg) + " > 1, not an arborescence");
        if (deg == 0) roots.push_back(v);
    }
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack(roots.begin(), roots.end());
    std::size_t reached = 0;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        seen[v] = 1;
        ++reached;
        for (auto w : graph.out_neighbors(v)) stack.push_back(w);
    }
    if (reached < n) {
        for (VertexId v = 0; v < n; ++v)
            if (!seen[v]) throw StructureError(v, "vertex lies on a directed cycle");
    }
    return roots;
}

/// Dynamic-programming tables, row-major n x k.
///   cost(v, i)   optimal cost of the subtree below v with v in group i
///   below(v, i)  min_{j<i} cost(v, j), infinite for i = 0
///   above(v, i)  min_{j>i} cost(v, j), infinite for i = k-1
/// The *_arg tables hold the lowest j attaining each minimum.
struct DpTables {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<Cost> cost;
    std::vector<Cost> below;
    std::vector<Cost> above;
    std::vector<GroupId> below_arg;
    std::vector<GroupId> above_arg;

    std::size_t at(VertexId v, GroupId i) const { return static_cast<std::size_t>(v) * k + i; }
};

/// How a child edge was resolved during backtracking.
enum class ChildBranch { Same, Forward, Backward };

struct TreePartitionResult {
    OrderedPartition partition;
    Cost cost;
    DpTables tables;
};

namespace detail {

/// Vertices in an order where every parent precedes its children.
inline std::vector<VertexId> preorder(const DirectedGraph& graph, const std::vector<VertexId>& roots) {
    std::vector<VertexId> order;
    order.reserve(graph.num_vertices());
    std::vector<VertexId> stack;
    for (auto r : roots) {
        stack.push_back(r);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            order.push_back(v);
            const auto kids = graph.out_neighbors(v);
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
        }
    }
    return order;
}

struct BranchChoice {
    Cost cost;
    ChildBranch branch;
};

/// min(same, lambda_f + above, lambda_b + below); ties prefer Same, then Forward.
inline BranchChoice best_branch(const DpTables& t, VertexId child, GroupId i, const Penalties& pen) {
    BranchChoice best{t.cost[t.at(child, i)], ChildBranch::Same};
    if (i + 1 < t.k) {
        const Cost fwd = edge_penalty(pen.lambda_f, 1) + t.above[t.at(child, i)];
        if (fwd < best.cost) best = {fwd, ChildBranch::Forward};
    }
    if (i > 0) {
        const Cost bwd = edge_penalty(pen.lambda_b, 1) + t.below[t.at(child, i)];
        if (bwd < best.cost) best = {bwd, ChildBranch::Backward};
    }
    return best;
}

}  // namespace detail

/// Exact minimizer of the fixed-centroid objective on a forest of arborescences.
/// Groups whose centroid is undefined are never chosen. Runs in O(nd + nk + m).
inline TreePartitionResult solve_tree_partition(const DirectedGraph& graph, const FeatureMatrix& features,
                                                const Centroids& centroids, const Penalties& penalties) {
    const auto roots = check_arborescence(graph);
    const std::size_t n = graph.num_vertices();
    const std::size_t k = centroids.k;
    if (features.rows() != n || centroids.d != features.dim())
        throw ValidationError("features/centroids do not match the graph");
    if (k == 0) throw ValidationError("need k >= 1 centroids");

    DpTables t;
    t.n = n;
    t.k = k;
    t.cost.assign(n * k, Cost{});
    t.below.assign(n * k, Cost{});
    t.above.assign(n * k, Cost{});
    t.below_arg.assign(n * k, 0);
    t.above_arg.assign(n * k, 0);

    const auto order = detail::preorder(graph, roots);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const VertexId v = *it;
        for (GroupId i = 0; i < k; ++i) {
            Cost c = centroids.is_defined(i) ? Cost(squared_distance(features.row(v), centroids.row(i)))
                                             : Cost::forbidden();
            for (auto w : graph.out_neighbors(v)) c += detail::best_branch(t, w, i, penalties).cost;
            t.cost[t.at(v, i)] = c;
        }
        // prefix / suffix minima over the group index
        t.below[t.at(v, 0)] = Cost::forbidden();
        for (GroupId i = 1; i < k; ++i) {
            const Cost& prev = t.below[t.at(v, i - 1)];
            const Cost& c = t.cost[t.at(v, i - 1)];
            if (i == 1 || c < prev) {
                t.below[t.at(v, i)] = c;
                t.below_arg[t.at(v, i)] = i - 1;
            } else {
                t.below[t.at(v, i)] = prev;
                t.below_arg[t.at(v, i)] = t.below_arg[t.at(v, i - 1)];
            }
        }
        t.above[t.at(v, static_cast<GroupId>(k - 1))] = Cost::forbidden();
        for (GroupId i = static_cast<GroupId>(k - 1); i-- > 0;) {
            const Cost& next = t.above[t.at(v, i + 1)];
            const Cost& c = t.cost[t.at(v, i + 1)];
            if (i + 2 == k || c <= next) {
                t.above[t.at(v, i)] = c;
                t.above_arg[t.at(v, i)] = i + 1;
            } else {
                t.above[t.at(v, i)] = next;
                t.above_arg[t.at(v, i)] = t.above_arg[t.at(v, i + 1)];
            }
        }
    }

    std::vector<GroupId> groups(n, 0);
    Cost total;
    for (auto r : roots) {
        GroupId best = 0;
        for (GroupId i = 1; i < k; ++i)
            if (t.cost[t.at(r, i)] < t.cost[t.at(r, best)]) best = i;
        groups[r] = best;
        total += t.cost[t.at(r, best)];
    }
    for (auto v : order) {
        const auto i = groups[v];
        for (auto w : graph.out_neighbors(v)) {
            switch (detail::best_branch(t, w, i, penalties).branch) {
                case ChildBranch::Same: groups[w] = i; break;
                case ChildBranch::Forward: groups[w] = t.above_arg[t.at(w, i)]; break;
                case ChildBranch::Backward: groups[w] = t.below_arg[t.at(w, i)]; break;
            }
        }
    }
    return {OrderedPartition(k, std::move(groups)), total, std::move(t)};
}

}  // namespace dgs
