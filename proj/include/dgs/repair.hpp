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

#include <cstddef>
#include <optional>

#include "dgs/objective.hpp"

namespace dgs {

/// Reseeds every empty group with the vertex farthest from its own group mean
/// (taken only from groups with at least two members; ties go to the lowest id).
/// Returns how many groups remain empty, which is nonzero only when n < k.
inline std::size_t repair_empty_groups(SolveState& state) {
    const auto n = static_cast<VertexId>(state.partition().size());
    while (true) {
        std::optional<GroupId> empty;
        for (GroupId g = 0; g < state.k(); ++g) {
            if (state.count(g) == 0) {
                empty = g;
                break;
            }
        }
        if (!empty) return 0;

        std::optional<VertexId> farthest;
        double best = -1.0;
        for (VertexId v = 0; v < n; ++v) {
            const auto g = state.partition()[v];
            if (state.count(g) < 2) continue;
            const double dist = state.distance_to_mean(v, g);
            if (dist > best) {
                best = dist;
                farthest = v;
            }
        }
        if (!farthest) {
            std::size_t remaining = 0;
            for (GroupId g = 0; g < state.k(); ++g) remaining += state.count(g) == 0;
            return remaining;
        }
        state.move(*farthest, *empty);
    }
}

inline bool has_empty_group(const SolveState& state) {
    for (GroupId g = 0; g < state.k(); ++g)
        if (state.count(g) == 0) return true;
    return false;
}

}  // namespace dgs
