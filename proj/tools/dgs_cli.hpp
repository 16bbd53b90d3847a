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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgs/dgs.hpp"

namespace dgs::cli {

using json = nlohmann::json;

inline double parse_lambda(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") return kInf;
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used != text.size() || std::isnan(x) || x < 0)
        throw std::invalid_argument("penalty must be a non-negative number or 'inf', got '" + text + "'");
    return x;
}

inline json extended_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
    return json(x);
}

inline double extended_from_json(const json& j) {
    if (j.is_string()) return parse_lambda(j.get<std::string>());
    return j.get<double>();
}

/// Shortest round-trip text for a double, always with a decimal point.
inline std::string format_number(double x) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    return in;
}

/// Writes through a temporary file so a failed run never leaves a partial result.
template <typename Writer>
void write_atomically(const std::string& path, Writer&& writer) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        writer(out);
        out.flush();
        if (!out) throw std::runtime_error("write to '" + path + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

inline json result_json(const DirectedGraph& graph, std::size_t k, const Penalties& pen, const std::string& algo,
                        const SolveResult& res) {
    json j;
    j["n"] = graph.num_vertices();
    j["m"] = graph.num_edges();
    j["k"] = k;
    j["lambda_f"] = extended_to_json(pen.lambda_f);
    j["lambda_b"] = extended_to_json(pen.lambda_b);
    j["algo"] = algo;
    j["seed"] = res.seed;
    std::vector<std::uint64_t> assignment;
    assignment.reserve(res.partition.size());
    for (auto g : res.partition.groups()) assignment.push_back(g + 1);
    j["assignment"] = assignment;
    j["coherence"] = res.breakdown.coherence;
    j["forward_edges"] = res.breakdown.forward_edges;
    j["backward_edges"] = res.breakdown.backward_edges;
    j["total"] = extended_to_json(res.breakdown.total.value());
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["seconds"] = res.seconds;
    return j;
}

/// Reads a partition from either a result JSON ("assignment", 1-indexed) or a
/// "vertex_id,group" file.
inline OrderedPartition read_partition_file(const std::string& path) {
    auto in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto j = json::parse(text);
        std::vector<GroupId> groups;
        std::size_t k = 1;
        for (const auto& g : j.at("assignment")) {
            const auto value = g.get<std::uint64_t>();
            if (value == 0) throw std::runtime_error("assignment groups are 1-indexed");
            groups.push_back(static_cast<GroupId>(value - 1));
            k = std::max<std::size_t>(k, value);
        }
        if (j.contains("k")) k = std::max(k, j.at("k").get<std::size_t>());
        return OrderedPartition(k, std::move(groups));
    }
    std::istringstream is(text);
    return load_partition(is);
}

struct LoadedInput {
    DirectedGraph graph;
    FeatureMatrix features;
};

inline LoadedInput load_input(const std::string& graph_path, const std::string& features_path) {
    LoadedInput input;
    {
        auto in = open_input(graph_path);
        input.graph = load_graph(in);
    }
    auto in = open_input(features_path);
    input.features = load_features(in, input.graph);
    return input;
}

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (auto tok : detail::split(text, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(std::string(tok)));
    }
    return out;
}

/// "lf:lb,lf:lb,..."
inline std::vector<Penalties> parse_penalty_list(const std::string& text) {
    std::vector<Penalties> out;
    for (auto tok : detail::split(text, ',')) {
        if (tok.empty()) continue;
        const auto parts = detail::split(tok, ':');
        if (parts.size() != 2) throw std::invalid_argument("penalty settings look like 'lambda_f:lambda_b'");
        out.push_back({parse_lambda(std::string(parts[0])), parse_lambda(std::string(parts[1]))});
    }
    return out;
}

/// Entry point shared by the executable and the tests. Results go to files;
/// `out` receives only eval output, `err` diagnostics.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ordered segmentation of directed graphs with node features"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads for restarts (0 = all cores)");

    // solve / oracle share the input flags
    std::string graph_path, features_path, out_path, truth_path, lambda_f_text = "0", lambda_b_text = "0";
    std::string algo = "greedy";
    std::size_t k = 0;
    SolveConfig solve_cfg;

    auto* solve = app.add_subcommand("solve", "partition a graph with node features");
    solve->add_option("--graph", graph_path, "edge-list file")->required();
    solve->add_option("--features", features_path, "feature file")->required();
    solve->add_option("--k", k, "number of groups")->required()->check(CLI::PositiveNumber);
    solve->add_option("--lambda-f", lambda_f_text, "forward edge penalty (number or inf)");
    solve->add_option("--lambda-b", lambda_b_text, "backward edge penalty (number or inf)");
    solve->add_option("--algo", algo, "greedy | treedp | mcut")->check(CLI::IsMember({"greedy", "treedp", "mcut"}));
    solve->add_option("--restarts", solve_cfg.restarts, "random restarts")->check(CLI::PositiveNumber);
    solve->add_option("--max-iters", solve_cfg.max_iters, "iteration cap per restart")->check(CLI::PositiveNumber);
    solve->add_option("--seed", solve_cfg.seed, "base seed");
    solve->add_option("--truth", truth_path, "ground-truth partition; adds an 'ari' field");
    solve->add_flag("--forbid-empty", solve_cfg.forbid_empty, "never leave a group empty");
    solve->add_option("--out", out_path, "result JSON")->required();

    auto* oracle = app.add_subcommand("oracle", "exhaustive exact solve (k^n <= 1e7)");
    oracle->add_option("--graph", graph_path)->required();
    oracle->add_option("--features", features_path)->required();
    oracle->add_option("--k", k)->required()->check(CLI::PositiveNumber);
    oracle->add_option("--lambda-f", lambda_f_text);
    oracle->add_option("--lambda-b", lambda_b_text);
    oracle->add_option("--out", out_path)->required();

    std::string model = "tree", out_prefix;
    std::size_t n = 1000, d = 10, clusters = 5;
    double variance = kDefaultVariance, edge_prob = 0.01, noise_p = 0.0;
    std::uint64_t synth_seed = 0;
    auto* synth = app.add_subcommand("synth", "generate a synthetic tree or DAG instance");
    synth->add_option("--model", model, "tree | dag")->check(CLI::IsMember({"tree", "dag"}));
    synth->add_option("--n", n)->check(CLI::PositiveNumber);
    synth->add_option("--d", d)->check(CLI::PositiveNumber);
    synth->add_option("--clusters", clusters)->check(CLI::PositiveNumber);
    synth->add_option("--variance", variance, "per-dimension feature variance")->check(CLI::NonNegativeNumber);
    synth->add_option("--edge-prob", edge_prob)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--noise-p", noise_p)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--seed", synth_seed);
    synth->add_option("--out-prefix", out_prefix, "writes PREFIX.edges, PREFIX.features, PREFIX.truth")->required();

    std::string pred_path;
    auto* eval = app.add_subcommand("eval", "adjusted Rand index between two partitions");
    eval->add_option("--pred", pred_path)->required();
    eval->add_option("--truth", truth_path)->required();

    SweepConfig sweep_cfg;
    std::string p_grid_text = "0,0.1,0.2,0.3,0.4,0.5", penalties_text = "0:0,0:1e5";
    auto* sweep = app.add_subcommand("sweep", "ARI vs noise sweep, CSV output");
    sweep->add_option("--model", model)->check(CLI::IsMember({"tree", "dag"}));
    sweep->add_option("--algo", algo)->check(CLI::IsMember({"greedy", "treedp", "mcut"}));
    sweep->add_option("--n", n)->check(CLI::PositiveNumber);
    sweep->add_option("--d", d)->check(CLI::PositiveNumber);
    sweep->add_option("--clusters", clusters)->check(CLI::PositiveNumber);
    sweep->add_option("--variance", variance)->check(CLI::NonNegativeNumber);
    sweep->add_option("--edge-prob", edge_prob)->check(CLI::Range(0.0, 1.0));
    sweep->add_option("--p-grid", p_grid_text, "comma-separated noise levels");
    sweep->add_option("--penalties", penalties_text, "comma-separated lambda_f:lambda_b settings");
    sweep->add_option("--replicates", sweep_cfg.replicates, "generator seeds averaged per cell")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--restarts", solve_cfg.restarts)->check(CLI::PositiveNumber);
    sweep->add_option("--max-iters", solve_cfg.max_iters)->check(CLI::PositiveNumber);
    sweep->add_option("--seed", solve_cfg.seed);
    sweep->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        solve_cfg.threads = threads;
        if (solve->parsed()) {
            const auto input = load_input(graph_path, features_path);
            const Penalties pen{parse_lambda(lambda_f_text), parse_lambda(lambda_b_text)};
            solve_cfg.solver = parse_solver_kind(algo);
            const auto res = multi_restart(input.graph, input.features, pen, k, solve_cfg);
            auto j = result_json(input.graph, k, pen, algo, res);
            if (!truth_path.empty()) j["ari"] = adjusted_rand_index(res.partition, read_partition_file(truth_path));
            write_atomically(out_path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
        } else if (oracle->parsed()) {
            const auto input = load_input(graph_path, features_path);
            const Penalties pen{parse_lambda(lambda_f_text), parse_lambda(lambda_b_text)};
            const auto start = std::chrono::steady_clock::now();
            const auto best = brute_force_dgs(input.graph, input.features, pen, k);
            SolveResult res;
            res.partition = best.partition;
            res.breakdown = total_cost(input.graph, input.features, best.partition, pen);
            res.iterations = 1;
            res.converged = true;
            res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const auto j = result_json(input.graph, k, pen, "oracle", res);
            write_atomically(out_path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
        } else if (synth->parsed()) {
            auto inst = model == "tree" ? gen_stree(n, d, clusters, variance, synth_seed)
                                        : gen_sdag(n, d, clusters, variance, edge_prob, synth_seed);
            inst = inject_noise(std::move(inst), noise_p, detail::mix_seed(synth_seed, 1));
            write_atomically(out_prefix + ".edges", [&](std::ostream& os) { write_graph(os, inst.graph); });
            write_atomically(out_prefix + ".features", [&](std::ostream& os) { write_features(os, inst.features); });
            write_atomically(out_prefix + ".truth", [&](std::ostream& os) { write_partition(os, inst.ground_truth); });
        } else if (eval->parsed()) {
            out << format_number(adjusted_rand_index(read_partition_file(pred_path), read_partition_file(truth_path)))
                << '\n';
        } else if (sweep->parsed()) {
            sweep_cfg.model = model == "tree" ? SyntheticModel::Tree : SyntheticModel::Dag;
            sweep_cfg.n = n;
            sweep_cfg.d = d;
            sweep_cfg.k = clusters;
            sweep_cfg.variance = variance;
            sweep_cfg.edge_prob = edge_prob;
            sweep_cfg.p_grid = parse_list(p_grid_text);
            sweep_cfg.penalties = parse_penalty_list(penalties_text);
            sweep_cfg.seed = solve_cfg.seed;
            solve_cfg.solver = parse_solver_kind(algo);
            sweep_cfg.solve = solve_cfg;
            const auto rows = run_noise_sweep(sweep_cfg);
            write_atomically(out_path, [&](std::ostream& os) { write_sweep_csv(os, rows); });
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace dgs::cli
