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

#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dgs/cost.hpp"
#include "dgs/graph.hpp"

namespace dgs {

inline double squared_norm(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double t = a[c] - b[c];
        s += t * t;
    }
    return s;
}

/// k x d centroid matrix; rows of empty groups are flagged undefined.
struct Centroids {
    std::size_t k = 0;
    std::size_t d = 0;
    std::vector<double> mu;
    std::vector<char> defined;

    Centroids() = default;
    Centroids(std::size_t k_, std::size_t d_) : k(k_), d(d_), mu(k_ * d_, 0.0), defined(k_, 0) {}

    /// Builds fully defined centroids from rows.
    static Centroids from_rows(const std::vector<std::vector<double>>& rows) {
        Centroids c(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t g = 0; g < rows.size(); ++g) c.set(static_cast<GroupId>(g), rows[g]);
        return c;
    }

    std::span<const double> row(GroupId g) const { return {mu.data() + g * d, d}; }
    bool is_defined(GroupId g) const { return defined[g] != 0; }
    void set(GroupId g, std::span<const double> values) {
        std::copy(values.begin(), values.end(), mu.begin() + static_cast<std::ptrdiff_t>(g * d));
        defined[g] = 1;
    }
};

struct CostBreakdown {
    double coherence = 0.0;
    std::int64_t forward_edges = 0;
    std::int64_t backward_edges = 0;
    Cost total;
};

enum class EdgeKind { Within, Forward, Backward };

inline EdgeKind classify_edge(GroupId src_group, GroupId dst_group) {
    if (src_group == dst_group) return EdgeKind::Within;
    return src_group < dst_group ? EdgeKind::Forward : EdgeKind::Backward;
}

struct CrossEdgeCounts {
    std::int64_t forward = 0;
    std::int64_t backward = 0;
};

inline CrossEdgeCounts count_cross_edges(const DirectedGraph& graph, const OrderedPartition& partition) {
    CrossEdgeCounts counts;
    for (const auto& e : graph.edges()) {
        switch (classify_edge(partition[e.src], partition[e.dst])) {
            case EdgeKind::Forward: ++counts.forward; break;
            case EdgeKind::Backward: ++counts.backward; break;
            case EdgeKind::Within: break;
        }
    }
    return counts;
}

inline Cost penalty_cost(const Penalties& penalties, std::int64_t forward, std::int64_t backward) {
    return edge_penalty(penalties.lambda_f, forward) + edge_penalty(penalties.lambda_b, backward);
}

/// min_mu sum ||a(v) - mu||^2 over `members`, evaluated around the mean in two passes.
inline double coherence_l2(std::span<const VertexId> members, const FeatureMatrix& features) {
    if (members.size() < 2) return 0.0;
    const std::size_t d = features.dim();
    std::vector<double> mean(d, 0.0);
    for (auto v : members) {
        const auto a = features.row(v);
        for (std::size_t c = 0; c < d; ++c) mean[c] += a[c];
    }
    for (auto& x : mean) x /= static_cast<double>(members.size());
    double total = 0.0;
    for (auto v : members) total += squared_distance(features.row(v), mean);
    return total;
}

/// Group means; empty groups stay undefined.
inline Centroids update_centroids(const OrderedPartition& partition, const FeatureMatrix& features) {
    const std::size_t k = partition.k();
    const std::size_t d = features.dim();
    Centroids c(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (VertexId v = 0; v < partition.size(); ++v) {
        const auto g = partition[v];
        ++counts[g];
        const auto a = features.row(v);
        for (std::size_t j = 0; j < d; ++j) c.mu[g * d + j] += a[j];
    }
    for (std::size_t g = 0; g < k; ++g) {
        if (counts[g] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) c.mu[g * d + j] /= static_cast<double>(counts[g]);
        c.defined[g] = 1;
    }
    return c;
}

namespace detail {

inline void check_sizes(const DirectedGraph& graph, const FeatureMatrix& features,
                        const OrderedPartition& partition) {
    if (features.rows() != graph.num_vertices() || partition.size() != graph.num_vertices())
        throw ValidationError("graph, features and partition disagree on the vertex count");
}

inline double fixed_coherence(const FeatureMatrix& features, const OrderedPartition& partition,
                              const Centroids& centroids) {
    double total = 0.0;
    for (VertexId v = 0; v < partition.size(); ++v) {
        const auto g = partition[v];
        if (!centroids.is_defined(g))
            throw ValidationError("group " + std::to_string(g + 1) +
                                  " is nonempty but its centroid is undefined");
        total += squared_distance(features.row(v), centroids.row(g));
    }
    return total;
}

}  // namespace detail

/// q(S | lambda_f, lambda_b, L2) recomputed from scratch.
inline CostBreakdown total_cost(const DirectedGraph& graph, const FeatureMatrix& features,
                                const OrderedPartition& partition, const Penalties& penalties) {
    detail::check_sizes(graph, features, partition);
    CostBreakdown out;
    out.coherence = detail::fixed_coherence(features, partition, update_centroids(partition, features));
    const auto counts = count_cross_edges(graph, partition);
    out.forward_edges = counts.forward;
    out.backward_edges = counts.backward;
    out.total = Cost(out.coherence) + penalty_cost(penalties, counts.forward, counts.backward);
    return out;
}

/// q(S, {mu_i} | lambda_f, lambda_b) for arbitrary centroids.
inline Cost fixed_centroid_cost(const DirectedGraph& graph, const FeatureMatrix& features,
                                const OrderedPartition& partition, const Centroids& centroids,
                                const Penalties& penalties) {
    detail::check_sizes(graph, features, partition);
    if (centroids.k != partition.k() || centroids.d != features.dim())
        throw ValidationError("centroid matrix shape does not match k x d");
    const auto counts = count_cross_edges(graph, partition);
    return Cost(detail::fixed_coherence(features, partition, centroids)) +
           penalty_cost(penalties, counts.forward, counts.backward);
}

/// Partition plus running per-group sums: member counts, feature sums and
/// squared-norm sums. Supports O(d + deg v) move deltas and commits.
class SolveState {
public:
    SolveState(const DirectedGraph& graph, const FeatureMatrix& features, OrderedPartition partition,
               Penalties penalties)
        : graph_(&graph), features_(&features), penalties_(penalties), partition_(std::move(partition)) {
        detail::check_sizes(graph, features, partition_);
        refresh();
    }

    const DirectedGraph& graph() const { return *graph_; }
    const FeatureMatrix& features() const { return *features_; }
    const Penalties& penalties() const { return penalties_; }
    const OrderedPartition& partition() const { return partition_; }
    std::size_t k() const { return partition_.k(); }
    std::size_t dim() const { return features_->dim(); }

    std::size_t count(GroupId g) const { return counts_[g]; }
    std::span<const double> sum(GroupId g) const { return {sums_.data() + g * dim(), dim()}; }
    double squared_norm_sum(GroupId g) const { return sqnorms_[g]; }

    std::vector<double> centroid(GroupId g) const {
        std::vector<double> mu(dim(), 0.0);
        if (counts_[g] == 0) return mu;
        const auto s = sum(g);
        for (std::size_t c = 0; c < dim(); ++c) mu[c] = s[c] / static_cast<double>(counts_[g]);
        return mu;
    }

    Centroids centroids() const {
        Centroids c(k(), dim());
        for (GroupId g = 0; g < k(); ++g)
            if (counts_[g] > 0) c.set(g, centroid(g));
        return c;
    }

    /// Coherence of group g from the decomposition sum||a||^2 - |S| ||mu||^2.
    double group_coherence(GroupId g) const {
        if (counts_[g] == 0) return 0.0;
        return sqnorms_[g] - squared_norm(sum(g)) / static_cast<double>(counts_[g]);
    }

    CostBreakdown breakdown() const {
        CostBreakdown out;
        out.coherence = coherence_;
        out.forward_edges = forward_;
        out.backward_edges = backward_;
        out.total = Cost(coherence_) + penalty_cost(penalties_, forward_, backward_);
        return out;
    }
    Cost total() const { return breakdown().total; }

    /// Squared distance from a(v) to the mean of group g (g must be nonempty).
    double distance_to_mean(VertexId v, GroupId g) const {
        const auto a = features_->row(v);
        const auto s = sum(g);
        const double inv = 1.0 / static_cast<double>(counts_[g]);
        double dist = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) {
            const double t = a[c] - s[c] * inv;
            dist += t * t;
        }
        return dist;
    }

    /// Change in L2 coherence when v moves to group `to`:
    /// n_j/(n_j+1) ||a - mu_j||^2 - n_i/(n_i-1) ||a - mu_i||^2.
    double coherence_delta(VertexId v, GroupId to) const {
        const GroupId from = partition_[v];
        if (from == to) return 0.0;
        double delta = 0.0;
        const auto nj = static_cast<double>(counts_[to]);
        if (counts_[to] > 0) delta += nj / (nj + 1.0) * distance_to_mean(v, to);
        const auto ni = static_cast<double>(counts_[from]);
        if (counts_[from] > 1) delta -= ni / (ni - 1.0) * distance_to_mean(v, from);
        return delta;
    }

    /// (delta forward, delta backward) edge counts when v moves to group `to`.
    CrossEdgeCounts edge_delta(VertexId v, GroupId to) const {
        const GroupId from = partition_[v];
        CrossEdgeCounts delta;
        auto tally = [&delta](EdgeKind kind, int sign) {
            if (kind == EdgeKind::Forward) delta.forward += sign;
            else if (kind == EdgeKind::Backward) delta.backward += sign;
        };
        for (auto w : graph_->out_neighbors(v)) {
            const auto gw = partition_[w];
            tally(classify_edge(from, gw), -1);
            tally(classify_edge(to, gw), +1);
        }
        for (auto u : graph_->in_neighbors(v)) {
            const auto gu = partition_[u];
            tally(classify_edge(gu, from), -1);
            tally(classify_edge(gu, to), +1);
        }
        return delta;
    }

    Cost move_delta(VertexId v, GroupId to) const {
        const auto edges = edge_delta(v, to);
        return Cost(coherence_delta(v, to)) + penalty_cost(penalties_, edges.forward, edges.backward);
    }

    /// Commits v -> `to`, updating every cached statistic in O(d + deg v).
    void move(VertexId v, GroupId to) {
        const GroupId from = partition_[v];
        if (from == to) return;
        const auto edges = edge_delta(v, to);
        coherence_ += coherence_delta(v, to);
        forward_ += edges.forward;
        backward_ += edges.backward;

        const auto a = features_->row(v);
        const double norm = squared_norm(a);
        for (std::size_t c = 0; c < a.size(); ++c) {
            sums_[from * dim() + c] -= a[c];
            sums_[to * dim() + c] += a[c];
        }
        sqnorms_[from] -= norm;
        sqnorms_[to] += norm;
        --counts_[from];
        ++counts_[to];
        if (counts_[from] == 0) {
            std::fill_n(sums_.begin() + static_cast<std::ptrdiff_t>(from * dim()), dim(), 0.0);
            sqnorms_[from] = 0.0;
        }
        partition_.assign(v, to);
    }

    /// Recomputes all cached statistics from scratch in vertex-id order.
    void refresh() {
        const std::size_t kk = k();
        const std::size_t d = dim();
        counts_.assign(kk, 0);
        sums_.assign(kk * d, 0.0);
        sqnorms_.assign(kk, 0.0);
        for (VertexId v = 0; v < partition_.size(); ++v) {
            const auto g = partition_[v];
            const auto a = features_->row(v);
            ++counts_[g];
            for (std::size_t c = 0; c < d; ++c) sums_[g * d + c] += a[c];
            sqnorms_[g] += squared_norm(a);
        }
        coherence_ = 0.0;
        for (VertexId v = 0; v < partition_.size(); ++v)
            coherence_ += distance_to_mean(v, partition_[v]);
        const auto cross = count_cross_edges(*graph_, partition_);
        forward_ = cross.forward;
        backward_ = cross.backward;
    }

    /// Compares every cached statistic against a from-scratch rebuild.
    bool matches_rebuild(double rel_tol) const {
        SolveState fresh(*graph_, *features_, partition_, penalties_);
        auto close = [rel_tol](double a, double b, double scale) {
            return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b), scale});
        };
        if (fresh.counts_ != counts_ || fresh.forward_ != forward_ || fresh.backward_ != backward_)
            return false;
        for (std::size_t g = 0; g < k(); ++g) {
            if (!close(fresh.sqnorms_[g], sqnorms_[g], 0.0)) return false;
            for (std::size_t c = 0; c < dim(); ++c)
                if (!close(fresh.sums_[g * dim() + c], sums_[g * dim() + c], fresh.sqnorms_[g]))
                    return false;
        }
        return close(fresh.coherence_, coherence_, 0.0);
    }

private:
    const DirectedGraph* graph_;
    const FeatureMatrix* features_;
    Penalties penalties_;
    OrderedPartition partition_;
    std::vector<std::size_t> counts_;
    std::vector<double> sums_;
    std::vector<double> sqnorms_;
    double coherence_ = 0.0;
    std::int64_t forward_ = 0;
    std::int64_t backward_ = 0;
};

/// q(S') - q(S) for moving v to group `to`; does not modify the state.
inline Cost move_delta(const SolveState& state, VertexId v, GroupId to) { return state.move_delta(v, to); }

}  // namespace dgs
