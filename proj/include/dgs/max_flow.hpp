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

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "dgs/cost.hpp"

namespace dgs {

/// s-t flow network. Arc capacities are extended reals: a capacity with
/// infinite units stands for units * B + finite, where B exceeds the sum of
/// all finite capacities, so minimum cuts avoid infinite arcs when they can.
struct FlowNetwork {
    struct Arc {
        std::uint32_t from;
        std::uint32_t to;
        Cost capacity;
    };

    std::uint32_t num_nodes = 0;
    std::uint32_t source = 0;
    std::uint32_t sink = 0;
    std::vector<Arc> arcs;

    FlowNetwork() = default;
    FlowNetwork(std::uint32_t nodes, std::uint32_t s, std::uint32_t t) : num_nodes(nodes), source(s), sink(t) {}

    void add_arc(std::uint32_t from, std::uint32_t to, Cost capacity) {
        if (capacity.infinite_units() < 0 || capacity.finite_part() < 0 || !std::isfinite(capacity.finite_part()))
            throw std::invalid_argument("arc capacities must be non-negative");
        arcs.push_back({from, to, capacity});
    }
    void add_arc(std::uint32_t from, std::uint32_t to, double capacity) {
        add_arc(from, to, std::isinf(capacity) ? Cost::infinity() : Cost(capacity));
    }
};

struct MinCut {
    Cost value;
    /// source_side[x] for every node of the network; true for s, false for t.
    /// The smallest minimum-cut source side.
    std::vector<char> source_side;
    /// The largest minimum-cut source side: every node that cannot reach t.
    std::vector<char> largest_source_side;
};

namespace detail {

using FlowInt = __int128;

/// Capacities are snapped to multiples of 2^-40.
inline constexpr double kFlowGridScale = 1099511627776.0;  // 2^40

inline FlowInt to_grid(double x) { return static_cast<FlowInt>(std::llround(x * kFlowGridScale)); }

/// Large finite values overflow llround; split into high and low parts.
inline FlowInt to_grid_wide(double x) {
    if (x * kFlowGridScale < 9.0e18) return to_grid(x);
    const double hi = std::floor(x);
    return static_cast<FlowInt>(static_cast<std::int64_t>(hi)) * static_cast<FlowInt>(1ULL << 40) +
           to_grid(x - hi);
}

inline double from_grid(FlowInt x) {
    const FlowInt whole = x >> 40;
    const FlowInt frac = x - (whole << 40);
    return static_cast<double>(static_cast<std::int64_t>(whole)) +
           static_cast<double>(static_cast<std::int64_t>(frac)) / kFlowGridScale;
}

/// Dinic's blocking-flow max flow on integer capacities.
class Dinic {
public:
    explicit Dinic(std::uint32_t n) : head_(n, -1), level_(n), iter_(n) {}

    void add_edge(std::uint32_t u, std::uint32_t v, FlowInt cap) {
        edges_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(edges_.size() - 1);
        edges_.push_back({u, head_[v], 0});
        head_[v] = static_cast<int>(edges_.size() - 1);
    }

    FlowInt run(std::uint32_t s, std::uint32_t t) {
        FlowInt flow = 0;
        while (bfs(s, t)) {
            iter_ = head_;
            while (const FlowInt pushed = augment(s, t)) flow += pushed;
        }
        return flow;
    }

    /// Residual reachability from s after run().
    std::vector<char> reachable_from(std::uint32_t s) const {
        std::vector<char> seen(head_.size(), 0);
        std::vector<std::uint32_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (int e = head_[u]; e != -1; e = edges_[e].next) {
                if (edges_[e].cap > 0 && !seen[edges_[e].to]) {
                    seen[edges_[e].to] = 1;
                    stack.push_back(edges_[e].to);
                }
            }
        }
        return seen;
    }

    /// Nodes that can still reach t in the residual graph after run().
    std::vector<char> reaching(std::uint32_t t) const {
        std::vector<char> seen(head_.size(), 0);
        std::vector<std::uint32_t> stack{t};
        seen[t] = 1;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (int e = head_[u]; e != -1; e = edges_[e].next) {
                const auto from = edges_[e].to;
                if (edges_[e ^ 1].cap > 0 && !seen[from]) {
                    seen[from] = 1;
                    stack.push_back(from);
                }
            }
        }
        return seen;
    }

private:
    struct Edge {
        std::uint32_t to;
        int next;
        FlowInt cap;
    };

    bool bfs(std::uint32_t s, std::uint32_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::uint32_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (int e = head_[u]; e != -1; e = edges_[e].next) {
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    // One augmenting path in the level graph, found with an explicit stack.
    FlowInt augment(std::uint32_t s, std::uint32_t t) {
        std::vector<int> path;
        std::uint32_t u = s;
        while (true) {
            if (u == t) {
                FlowInt bottleneck = edges_[path.front()].cap;
                for (int e : path) bottleneck = std::min(bottleneck, edges_[e].cap);
                for (int e : path) {
                    edges_[e].cap -= bottleneck;
                    edges_[e ^ 1].cap += bottleneck;
                }
                return bottleneck;
            }
            int& e = iter_[u];
            while (e != -1 && !(edges_[e].cap > 0 && level_[edges_[e].to] == level_[u] + 1)) e = edges_[e].next;
            if (e != -1) {
                path.push_back(e);
                u = edges_[e].to;
                continue;
            }
            // dead end: retreat and prune
            if (path.empty()) return 0;
            level_[u] = -1;
            const int back = path.back();
            path.pop_back();
            u = edges_[back ^ 1].to;
            iter_[u] = edges_[iter_[u]].next;
        }
    }

    std::vector<int> head_;
    std::vector<Edge> edges_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace detail

/// Minimum s-t cut. The source side is the residual reachability set of s.
inline MinCut max_flow_min_cut(const FlowNetwork& net) {
    using detail::FlowInt;
    if (net.source >= net.num_nodes || net.sink >= net.num_nodes || net.source == net.sink)
        throw std::invalid_argument("invalid source/sink");

    FlowInt finite_total = 0;
    for (const auto& a : net.arcs) finite_total += detail::to_grid_wide(a.capacity.finite_part());
    const FlowInt big = finite_total + detail::to_grid(1.0);

    detail::Dinic dinic(net.num_nodes);
    for (const auto& a : net.arcs) {
        if (a.from == a.to) continue;
        const FlowInt cap = static_cast<FlowInt>(a.capacity.infinite_units()) * big +
                            detail::to_grid_wide(a.capacity.finite_part());
        dinic.add_edge(a.from, a.to, cap);
    }
    const FlowInt flow = dinic.run(net.source, net.sink);
    MinCut cut;
    cut.value = Cost(static_cast<std::int64_t>(flow / big), detail::from_grid(flow % big));
    cut.source_side = dinic.reachable_from(net.source);
    cut.largest_source_side = dinic.reaching(net.sink);
    for (auto& x : cut.largest_source_side) x = !x;
    return cut;
}

/// Total capacity of arcs leaving `source_side`, in the network's own units.
inline Cost cut_weight(const FlowNetwork& net, const std::vector<char>& source_side) {
    Cost total;
    for (const auto& a : net.arcs)
        if (source_side[a.from] && !source_side[a.to]) total += a.capacity;
    return total;
}

}  // namespace dgs
