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
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "dgs/greedy.hpp"
#include "dgs/mcut.hpp"
#include "dgs/objective.hpp"
#include "dgs/repair.hpp"
#include "dgs/solve_config.hpp"
#include "dgs/tree_dp.hpp"

namespace dgs {

/// Uniform random group per vertex; deterministic per (n, k, seed).
inline OrderedPartition random_init(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<GroupId> pick(0, static_cast<GroupId>(k - 1));
    std::vector<GroupId> groups(n);
    for (auto& g : groups) g = pick(rng);
    return OrderedPartition(k, std::move(groups));
}

namespace detail {

/// Alternates centroid updates with the exact tree DP partition step.
inline SolveResult run_tree_dp(const DirectedGraph& graph, const FeatureMatrix& features, const Penalties& penalties,
                               std::size_t /*k*/, OrderedPartition init, const SolveConfig& config) {
    check_arborescence(graph);
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    result.seed = config.seed;

    OrderedPartition current = std::move(init);
    Cost previous = total_cost(graph, features, current, penalties).total;
    OrderedPartition best = current;
    Cost best_loss = previous;

    for (int it = 1; it <= config.max_iters; ++it) {
        result.iterations = it;
        if (config.repair_empty || config.forbid_empty) {
            SolveState state(graph, features, current, penalties);
            if (has_empty_group(state)) {
                result.empty_groups = repair_empty_groups(state);
                current = state.partition();
            }
        }
        const auto centroids = update_centroids(current, features);
        const Cost before = fixed_centroid_cost(graph, features, current, centroids, penalties);
        auto dp = solve_tree_partition(graph, features, centroids, penalties);
        current = std::move(dp.partition);
        const Cost loss = total_cost(graph, features, current, penalties).total;
        if (config.on_step) config.on_step({StepEvent::Kind::TreeDpStep, current, before, dp.cost});
        result.loss_trace.push_back(loss);
        if (loss < best_loss) {
            best_loss = loss;
            best = current;
        }
        if (relative_improvement(previous, loss) < config.rel_tol) {
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

}  // namespace detail

/// One run of the iterative scheme from a random initialization seeded with
/// config.seed, using the configured partition step.
inline SolveResult run_iterative(const DirectedGraph& graph, const FeatureMatrix& features, const Penalties& penalties,
                                 std::size_t k, const SolveConfig& config) {
    config.validate();
    penalties.validate();
    if (features.rows() != graph.num_vertices())
        throw ValidationError("feature rows do not match the vertex count");
    auto init = random_init(graph.num_vertices(), k, config.seed);
    switch (config.solver) {
        case SolverKind::TreeDp: return detail::run_tree_dp(graph, features, penalties, k, std::move(init), config);
        case SolverKind::Mcut: return run_mcut(graph, features, penalties, k, std::move(init), config);
        case SolverKind::Greedy: break;
    }
    return run_greedy(graph, features, penalties, k, std::move(init), config);
}

/// Runs restarts with seeds seed, seed+1, ... and keeps the lowest loss
/// (ties: lowest seed). Restarts run on up to config.threads workers.
inline SolveResult multi_restart(const DirectedGraph& graph, const FeatureMatrix& features, const Penalties& penalties,
                                 std::size_t k, const SolveConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto restarts = static_cast<std::size_t>(config.restarts);
    std::vector<SolveResult> results(restarts);
    std::vector<std::exception_ptr> errors(restarts);

    auto run_one = [&](std::size_t r) {
        try {
            SolveConfig cfg = config;
            cfg.seed = config.seed + r;
            results[r] = run_iterative(graph, features, penalties, k, cfg);
        } catch (...) {
            errors[r] = std::current_exception();
        }
    };

    unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, restarts));
    // A step observer is user code; keep it single-threaded.
    if (workers <= 1 || config.on_step) {
        for (std::size_t r = 0; r < restarts; ++r) run_one(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < restarts; r = next++) run_one(r);
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r)
        if (results[r].breakdown.total < results[best].breakdown.total) best = r;
    SolveResult out = std::move(results[best]);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace dgs
