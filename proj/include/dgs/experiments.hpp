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
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dgs/driver.hpp"
#include "dgs/graph.hpp"
#include "dgs/objective.hpp"

namespace dgs {

/// Default per-dimension feature variance of the synthetic generators
/// (per-dimension standard deviation 0.1).
inline constexpr double kDefaultVariance = 0.01;

struct SyntheticInstance {
    DirectedGraph graph;
    FeatureMatrix features;
    OrderedPartition ground_truth;
    Centroids true_centroids;
    double variance = kDefaultVariance;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

inline void draw_feature(std::mt19937_64& rng, std::span<const double> centre, double variance,
                         std::span<double> out) {
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = variance > 0 ? centre[c] + noise(rng) : centre[c];
}

}  // namespace detail

/// Random recursive tree: vertex v > 0 gets an edge from a uniformly random
/// earlier vertex. Vertices are split into k contiguous blocks of n/k, block i
/// drawing features from Normal(centroid_i, variance * I); centroids are
/// uniform on [0,1]^d.
inline SyntheticInstance gen_stree(std::size_t n, std::size_t d, std::size_t k, double variance, std::uint64_t seed) {
    if (k == 0 || n == 0 || n % k != 0) throw std::invalid_argument("n must be a positive multiple of k");
    if (!(variance >= 0)) throw std::invalid_argument("variance must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Centroids centroids(k, d);
    for (GroupId g = 0; g < k; ++g) {
        std::vector<double> row(d);
        for (auto& x : row) x = unit(rng);
        centroids.set(g, row);
    }
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (VertexId v = 1; v < n; ++v) {
        std::uniform_int_distribution<VertexId> parent(0, v - 1);
        edges.push_back({parent(rng), v});
    }
    const std::size_t block = n / k;
    std::vector<GroupId> truth(n);
    FeatureMatrix features(n, d);
    for (VertexId v = 0; v < n; ++v) {
        truth[v] = static_cast<GroupId>(v / block);
        detail::draw_feature(rng, centroids.row(truth[v]), variance, features.row(v));
    }
    return {DirectedGraph(n, std::move(edges)), std::move(features), OrderedPartition(k, std::move(truth)),
            std::move(centroids), variance};
}

/// gen_stree plus an independent Bernoulli(edge_prob) edge u -> v for every
/// pair u < v. Pair edges may duplicate tree edges.
inline SyntheticInstance gen_sdag(std::size_t n, std::size_t d, std::size_t k, double variance, double edge_prob,
                                  std::uint64_t seed) {
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge_prob must lie in [0, 1]");
    auto inst = gen_stree(n, d, k, variance, seed);
    if (edge_prob == 0.0) return inst;

    std::vector<Edge> edges = inst.graph.edges();
    std::mt19937_64 rng(detail::mix_seed(seed, 0x5dacULL));
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    // Geometric skipping over the pair index (u, v) in row-major order.
    std::uint64_t idx = 0;
    VertexId u = 0;
    std::uint64_t row_start = 0;  // index of pair (u, u+1)
    auto next_gap = [&]() -> std::uint64_t {
        if (edge_prob >= 1.0) return 0;
        std::geometric_distribution<std::uint64_t> gap(edge_prob);
        return gap(rng);
    };
    for (idx = next_gap(); idx < pairs; idx += 1 + next_gap()) {
        while (idx >= row_start + (n - 1 - u)) {
            row_start += n - 1 - u;
            ++u;
        }
        const auto v = static_cast<VertexId>(u + 1 + (idx - row_start));
        edges.push_back({u, v});
    }
    inst.graph = DirectedGraph(n, std::move(edges));
    return inst;
}

/// With probability p per vertex, replaces its feature by a fresh draw around
/// a uniformly chosen true centroid. Graph and ground truth are unchanged.
inline SyntheticInstance inject_noise(SyntheticInstance instance, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
    if (p == 0.0) return instance;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(p);
    std::uniform_int_distribution<GroupId> pick(0, static_cast<GroupId>(instance.true_centroids.k - 1));
    for (VertexId v = 0; v < instance.features.rows(); ++v) {
        if (!flip(rng)) continue;
        const GroupId c = pick(rng);
        detail::draw_feature(rng, instance.true_centroids.row(c), instance.variance, instance.features.row(v));
    }
    return instance;
}

/// Adjusted Rand Index (permutation model) of two labelings of the same n
/// items. Group order and label values are ignored.
inline double adjusted_rand_index(const std::vector<GroupId>& a, const std::vector<GroupId>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ARI needs partitions of the same size");
    if (a.size() < 2) throw std::invalid_argument("ARI needs at least two items");
    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };

    std::map<std::pair<GroupId, GroupId>, std::size_t> joint;
    std::map<GroupId, std::size_t> rows;
    std::map<GroupId, std::size_t> cols;
    for (std::size_t v = 0; v < a.size(); ++v) {
        ++joint[{a[v], b[v]}];
        ++rows[a[v]];
        ++cols[b[v]];
    }
    double index = 0.0;
    for (const auto& [key, count] : joint) index += choose2(static_cast<double>(count));
    double sum_rows = 0.0;
    for (const auto& [key, count] : rows) sum_rows += choose2(static_cast<double>(count));
    double sum_cols = 0.0;
    for (const auto& [key, count] : cols) sum_cols += choose2(static_cast<double>(count));

    const double expected = sum_rows * sum_cols / choose2(static_cast<double>(a.size()));
    const double max_index = 0.5 * (sum_rows + sum_cols);
    // identical set partitions <=> every row and column maps to a single cell
    if (joint.size() == rows.size() && joint.size() == cols.size()) return 1.0;
    if (max_index == expected) return 0.0;
    return (index - expected) / (max_index - expected);
}

inline double adjusted_rand_index(const OrderedPartition& p, const OrderedPartition& q) {
    return adjusted_rand_index(p.groups(), q.groups());
}

enum class SyntheticModel { Tree, Dag };

struct SweepConfig {
    SyntheticModel model = SyntheticModel::Tree;
    std::size_t n = 1000;
    std::size_t d = 10;
    std::size_t k = 5;
    double variance = kDefaultVariance;
    double edge_prob = 0.01;
    std::vector<double> p_grid;
    std::vector<Penalties> penalties{{0.0, 0.0}, {0.0, 1e5}};
    /// Generator seeds per cell are seed, seed+1, ...; cell metrics are averaged.
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
    SolveConfig solve;
};

struct SweepRow {
    double p = 0.0;
    Penalties penalties;
    SolverKind solver = SolverKind::Greedy;
    double loss = 0.0;
    double ari = 0.0;
    double iterations = 0.0;
    double seconds = 0.0;
};

inline SyntheticInstance make_instance(const SweepConfig& cfg, std::uint64_t generator_seed) {
    return cfg.model == SyntheticModel::Tree
               ? gen_stree(cfg.n, cfg.d, cfg.k, cfg.variance, generator_seed)
               : gen_sdag(cfg.n, cfg.d, cfg.k, cfg.variance, cfg.edge_prob, generator_seed);
}

/// One row per (p, penalty setting), p-major. Each replicate r uses the base
/// instance from generator seed cfg.seed + r with noise level p applied to it.
inline std::vector<SweepRow> run_noise_sweep(const SweepConfig& cfg) {
    std::vector<SweepRow> rows;
    for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
        const double p = cfg.p_grid[pi];
        std::vector<SyntheticInstance> noisy;
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const std::uint64_t gen_seed = cfg.seed + r;
            noisy.push_back(inject_noise(make_instance(cfg, gen_seed), p, detail::mix_seed(gen_seed, pi + 1)));
        }
        for (const auto& pen : cfg.penalties) {
            SweepRow row;
            row.p = p;
            row.penalties = pen;
            row.solver = cfg.solve.solver;
            for (const auto& inst : noisy) {
                const auto res = multi_restart(inst.graph, inst.features, pen, cfg.k, cfg.solve);
                row.loss += res.breakdown.total.value();
                row.ari += adjusted_rand_index(res.partition, inst.ground_truth);
                row.iterations += res.iterations;
                row.seconds += res.seconds;
            }
            const auto reps = static_cast<double>(cfg.replicates);
            row.loss /= reps;
            row.ari /= reps;
            row.iterations /= reps;
            row.seconds /= reps;
            rows.push_back(row);
        }
    }
    return rows;
}

inline std::string format_extended(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "p,lambda_f,lambda_b,solver,loss,ari,iterations,seconds\n";
    for (const auto& r : rows) {
        out << format_extended(r.p) << ',' << format_extended(r.penalties.lambda_f) << ','
            << format_extended(r.penalties.lambda_b) << ',' << to_string(r.solver) << ','
            << format_extended(r.loss) << ',' << format_extended(r.ari) << ',' << format_extended(r.iterations)
            << ',' << format_extended(r.seconds) << '\n';
    }
}

}  // namespace dgs
