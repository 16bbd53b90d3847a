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

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <vector>

#include "dgs/cost.hpp"
#include "dgs/objective.hpp"
#include "dgs/repair.hpp"
#include "dgs/solve_config.hpp"

namespace dgs {

struct MoveChoice {
    GroupId target;
    Cost delta;
};

/// Evaluates every target group for one vertex in O(kd + deg v). Neighbor
/// groups are binned once; cross-edge counts per target come from prefix sums.
class MoveEvaluator {
public:
    explicit MoveEvaluator(std::size_t k) : out_(k), in_(k) {}

    MoveChoice best_move(const SolveState& state, VertexId v, bool forbid_empty = false) {
        const std::size_t k = state.k();
        const GroupId current = state.partition()[v];
        MoveChoice best{current, Cost{}};
        if (k == 1) return best;
        if (forbid_empty && state.count(current) == 1) return best;

        std::fill(out_.begin(), out_.end(), 0);
        std::fill(in_.begin(), in_.end(), 0);
        const auto& part = state.partition();
        for (auto w : state.graph().out_neighbors(v)) ++out_[part[w]];
        for (auto u : state.graph().in_neighbors(v)) ++in_[part[u]];
        const auto out_total = static_cast<std::int64_t>(state.graph().out_degree(v));
        const auto in_total = static_cast<std::int64_t>(state.graph().in_degree(v));

        // Cross-edge counts of v's edges if v sat in group t.
        std::int64_t out_below = 0;
        std::int64_t in_below = 0;
        forward_.resize(k);
        backward_.resize(k);
        for (GroupId t = 0; t < k; ++t) {
            const auto out_above = out_total - out_below - out_[t];
            const auto in_above = in_total - in_below - in_[t];
            forward_[t] = out_above + in_below;
            backward_[t] = out_below + in_above;
            out_below += out_[t];
            in_below += in_[t];
        }

        const auto& pen = state.penalties();
        for (GroupId t = 0; t < k; ++t) {
            if (t == current) continue;
            const Cost delta = Cost(state.coherence_delta(v, t)) +
                               penalty_cost(pen, forward_[t] - forward_[current], backward_[t] - backward_[current]);
            if (delta < best.delta) best = {t, delta};
        }
        return best;
    }

private:
    std::vector<std::int64_t> out_;
    std::vector<std::int64_t> in_;
    std::vector<std::int64_t> forward_;
    std::vector<std::int64_t> backward_;
};

/// Lowest-delta target for v; (current group, 0) when no move improves.
inline MoveChoice best_move(const SolveState& state, VertexId v, bool forbid_empty = false) {
    MoveEvaluator eval(state.k());
    return eval.best_move(state, v, forbid_empty);
}

/// Greedy local search: each scan visits the vertices in a fresh seeded random
/// order and immediately commits every strictly improving best move. Stops
/// after a scan with no commit or after max_iters scans.
inline SolveResult run_greedy(const DirectedGraph& graph, const FeatureMatrix& features, const Penalties& penalties,
                              std::size_t k, OrderedPartition init, const SolveConfig& config) {
    config.validate();
    penalties.validate();
    if (init.k() != k) throw std::invalid_argument("initial partition has the wrong k");
    const auto start = std::chrono::steady_clock::now();

    SolveState state(graph, features, std::move(init), penalties);
    SolveResult result;
    result.seed = config.seed;
    if (config.forbid_empty) result.empty_groups = repair_empty_groups(state);

    std::mt19937_64 rng(config.seed);
    std::vector<VertexId> order(graph.num_vertices());
    std::iota(order.begin(), order.end(), VertexId{0});
    MoveEvaluator eval(k);

    for (int it = 1; it <= config.max_iters; ++it) {
        result.iterations = it;
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t moves = 0;
        for (auto v : order) {
            const auto choice = eval.best_move(state, v, config.forbid_empty);
            if (choice.target == state.partition()[v] || !strictly_improves(choice.delta, config.commit_tol))
                continue;
            const Cost before = state.total();
            state.move(v, choice.target);
            ++moves;
            if (config.on_step)
                config.on_step({StepEvent::Kind::GreedyMove, state.partition(), before, state.total()});
        }
        if (config.refresh_interval > 0 && it % config.refresh_interval == 0) state.refresh();
        result.loss_trace.push_back(state.total());
        if (moves == 0) {
            result.converged = true;
            break;
        }
    }
    result.partition = state.partition();
    result.breakdown = total_cost(graph, features, result.partition, penalties);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace dgs
