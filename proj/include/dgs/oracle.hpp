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
#include <functional>
#include <optional>
#include <vector>

#include "dgs/cost.hpp"
#include "dgs/graph.hpp"
#include "dgs/objective.hpp"

// Exhaustive solvers. Exponential in n; meant as ground truth for tests and
// for tiny inputs only.

namespace dgs {

inline constexpr double kOracleGuard = 1e7;

class OracleSizeError : public Error {
public:
    using Error::Error;
};

struct OracleResult {
    OrderedPartition partition;
    Cost cost;
};

namespace detail {

/// Visits every assignment in lexicographic order (vertex 0 most significant)
/// and keeps the first strict minimum of `score`.
inline OracleResult enumerate_assignments(std::size_t n, std::size_t k,
                                          const std::function<Cost(const OrderedPartition&)>& score) {
    if (k == 0) throw ValidationError("k must be >= 1");
    if (std::pow(static_cast<double>(k), static_cast<double>(n)) > kOracleGuard)
        throw OracleSizeError("k^n exceeds the oracle guard of 1e7");
    OrderedPartition current(k, std::vector<GroupId>(n, 0));
    std::optional<OracleResult> best;
    while (true) {
        const Cost c = score(current);
        if (!best || c < best->cost) best = OracleResult{current, c};
        // odometer: last vertex is the fastest digit
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (current[static_cast<VertexId>(pos)] + 1 < k) {
                current.assign(static_cast<VertexId>(pos), current[static_cast<VertexId>(pos)] + 1);
                break;
            }
            current.assign(static_cast<VertexId>(pos), 0);
            if (pos == 0) return *best;
        }
        if (n == 0) return *best;
    }
}

}  // namespace detail

/// Global minimizer of total_cost over all k^n ordered partitions.
inline OracleResult brute_force_dgs(const DirectedGraph& graph, const FeatureMatrix& features,
                                    const Penalties& penalties, std::size_t k) {
    return detail::enumerate_assignments(graph.num_vertices(), k, [&](const OrderedPartition& p) {
        return total_cost(graph, features, p, penalties).total;
    });
}

/// Global minimizer of fixed_centroid_cost. Groups with undefined centroids
/// are forbidden.
inline OracleResult brute_force_fixed_centroids(const DirectedGraph& graph, const FeatureMatrix& features,
                                                const Centroids& centroids, const Penalties& penalties,
                                                std::size_t k) {
    return detail::enumerate_assignments(graph.num_vertices(), k, [&](const OrderedPartition& p) {
        for (VertexId v = 0; v < p.size(); ++v)
            if (!centroids.is_defined(p[v])) return Cost::forbidden();
        return fixed_centroid_cost(graph, features, p, centroids, penalties);
    });
}

}  // namespace dgs
