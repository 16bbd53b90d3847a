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

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dgs/cost.hpp"
#include "dgs/graph.hpp"
#include "dgs/objective.hpp"

namespace dgs {

enum class SolverKind { Greedy, TreeDp, Mcut };

inline std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::Greedy: return "greedy";
        case SolverKind::TreeDp: return "treedp";
        case SolverKind::Mcut: return "mcut";
    }
    return "?";
}

inline SolverKind parse_solver_kind(std::string_view name) {
    if (name == "greedy") return SolverKind::Greedy;
    if (name == "treedp") return SolverKind::TreeDp;
    if (name == "mcut") return SolverKind::Mcut;
    throw std::invalid_argument("unknown solver '" + std::string(name) + "' (greedy|treedp|mcut)");
}

/// One committed optimization step, reported to SolveConfig::on_step.
struct StepEvent {
    enum class Kind { GreedyMove, PairStep, TreeDpStep };
    Kind kind;
    const OrderedPartition& partition;  // state after the step
    Cost before;
    Cost after;
};

struct SolveConfig {
    int max_iters = 100;
    int restarts = 10;
    std::uint64_t seed = 0;
    double rel_tol = 1e-9;
    SolverKind solver = SolverKind::Greedy;
    bool forbid_empty = false;
    bool repair_empty = true;
    /// Worker threads for restarts; 0 = hardware concurrency.
    unsigned threads = 0;
    /// Greedy rebuilds its cached sums from scratch every this many scans.
    int refresh_interval = 64;
    /// Minimum improvement for a greedy move or Mcut pair step to be committed.
    double commit_tol = 1e-9;
    std::function<void(const StepEvent&)> on_step;

    void validate() const {
        if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
        if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
        if (!(rel_tol >= 0)) throw std::invalid_argument("rel_tol must be >= 0");
    }
};

struct SolveResult {
    OrderedPartition partition;
    CostBreakdown breakdown;
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    double seconds = 0.0;
    /// Groups still empty after repair (only when n < k).
    std::size_t empty_groups = 0;
    /// total cost after every outer iteration
    std::vector<Cost> loss_trace;
};

/// (old - new) / max(old, 1) on finite parts; any change of infinite units
/// counts as a large relative change.
inline double relative_improvement(const Cost& previous, const Cost& current) {
    if (previous.infinite_units() != current.infinite_units())
        return previous.infinite_units() > current.infinite_units() ? kInf : -kInf;
    return (previous.finite_part() - current.finite_part()) / std::max(previous.finite_part(), 1.0);
}

}  // namespace dgs
