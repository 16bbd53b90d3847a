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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgs {

using VertexId = std::uint32_t;
/// Zero-based group index; group g here is S_{g+1} in the ordered partition.
using GroupId = std::uint32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class StructureError : public Error {
public:
    StructureError(VertexId vertex, const std::string& what)
        : Error(what + " (vertex " + std::to_string(vertex) + ")"), vertex_(vertex) {}
    VertexId vertex() const { return vertex_; }

private:
    VertexId vertex_;
};

struct Edge {
    VertexId src;
    VertexId dst;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable directed multigraph with out- and in-adjacency in CSR form.
class DirectedGraph {
public:
    DirectedGraph() = default;

    DirectedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        for (const auto& e : edges_) {
            if (e.src >= n_ || e.dst >= n_)
                throw ValidationError("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                                      " has an endpoint outside [0, " + std::to_string(n_) + ")");
            if (e.src == e.dst)
                throw StructureError(e.src, "self-loop rejected");
        }
        build_csr(out_offsets_, out_targets_, [](const Edge& e) { return std::pair{e.src, e.dst}; });
        build_csr(in_offsets_, in_sources_, [](const Edge& e) { return std::pair{e.dst, e.src}; });
    }

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const VertexId> out_neighbors(VertexId v) const {
        return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
    }
    std::span<const VertexId> in_neighbors(VertexId v) const {
        return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
    }
    std::size_t out_degree(VertexId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
    std::size_t in_degree(VertexId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

    /// Same vertex set, every edge reversed.
    DirectedGraph reversed() const {
        std::vector<Edge> rev;
        rev.reserve(edges_.size());
        for (const auto& e : edges_) rev.push_back({e.dst, e.src});
        return DirectedGraph(n_, std::move(rev));
    }

private:
    template <typename Key>
    void build_csr(std::vector<std::size_t>& offsets, std::vector<VertexId>& targets, Key key) const {
        offsets.assign(n_ + 1, 0);
        for (const auto& e : edges_) ++offsets[key(e).first + 1];
        for (std::size_t v = 0; v < n_; ++v) offsets[v + 1] += offsets[v];
        targets.resize(edges_.size());
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (const auto& e : edges_) {
            auto [from, to] = key(e);
            targets[cursor[from]++] = to;
        }
    }

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<VertexId> out_targets_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<VertexId> in_sources_;
};

/// Row-major n x d matrix of finite features, one row per vertex.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n, std::size_t d) : n_(n), d_(d), values_(n * d, 0.0) {}
    FeatureMatrix(std::size_t n, std::size_t d, std::vector<double> values)
        : n_(n), d_(d), values_(std::move(values)) {
        if (values_.size() != n_ * d_) throw ValidationError("feature buffer size does not match n*d");
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!std::isfinite(values_[i]))
                throw ValidationError("non-finite feature value for vertex " + std::to_string(i / d_));
    }

    std::size_t rows() const { return n_; }
    std::size_t dim() const { return d_; }

    std::span<const double> row(VertexId v) const { return {values_.data() + v * d_, d_}; }
    std::span<double> row(VertexId v) { return {values_.data() + v * d_, d_}; }
    const std::vector<double>& data() const { return values_; }

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> values_;
};

/// Assignment of every vertex to one of k ordered groups. Empty groups are allowed.
class OrderedPartition {
public:
    OrderedPartition() = default;
    OrderedPartition(std::size_t k, std::vector<GroupId> groups) : k_(k), groups_(std::move(groups)) {
        if (k_ == 0) throw ValidationError("partition needs k >= 1");
        for (std::size_t v = 0; v < groups_.size(); ++v)
            if (groups_[v] >= k_)
                throw ValidationError("vertex " + std::to_string(v) + " assigned to group " +
                                      std::to_string(groups_[v] + 1) + " > k=" + std::to_string(k_));
    }

    /// All n vertices in group 0.
    static OrderedPartition single_group(std::size_t n, std::size_t k = 1) {
        return OrderedPartition(k, std::vector<GroupId>(n, 0));
    }

    std::size_t k() const { return k_; }
    std::size_t size() const { return groups_.size(); }
    GroupId operator[](VertexId v) const { return groups_[v]; }
    void assign(VertexId v, GroupId g) { groups_[v] = g; }
    const std::vector<GroupId>& groups() const { return groups_; }

    std::vector<std::size_t> group_sizes() const {
        std::vector<std::size_t> sizes(k_, 0);
        for (auto g : groups_) ++sizes[g];
        return sizes;
    }

    std::vector<VertexId> members(GroupId g) const {
        std::vector<VertexId> out;
        for (VertexId v = 0; v < groups_.size(); ++v)
            if (groups_[v] == g) out.push_back(v);
        return out;
    }

    friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;

private:
    std::size_t k_ = 1;
    std::vector<GroupId> groups_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline bool skip_line(std::string_view line) { return line.empty() || line.front() == '#'; }

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const auto b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

inline std::uint64_t parse_uint(std::string_view tok, std::size_t line, const char* what) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
        throw ParseError(line, std::string("expected non-negative integer ") + what + ", got '" +
                                   std::string(tok) + "'");
    return value;
}

inline double parse_double(std::string_view tok, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
        throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
    return value;
}

}  // namespace detail

/// Reads the edge-list format: optional header line holding n, then "src dst"
/// lines; '#' lines are comments. Without a header n = 1 + max id.
inline DirectedGraph load_graph(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    bool seen_first = false;
    bool has_header = false;
    std::uint64_t declared_n = 0;
    std::uint64_t max_id = 0;
    bool any_edge = false;
    std::vector<Edge> edges;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (detail::skip_line(line)) continue;
        const auto tokens = detail::split_ws(line);
        if (!seen_first) {
            seen_first = true;
            if (tokens.size() == 1) {
                has_header = true;
                declared_n = detail::parse_uint(tokens[0], line_no, "vertex count");
                continue;
            }
        }
        if (tokens.size() != 2) throw ParseError(line_no, "expected 'src dst'");
        const auto src = detail::parse_uint(tokens[0], line_no, "source id");
        const auto dst = detail::parse_uint(tokens[1], line_no, "target id");
        if (has_header && (src >= declared_n || dst >= declared_n))
            throw ParseError(line_no, "vertex id " + std::to_string(std::max(src, dst)) +
                                          " out of bounds for n=" + std::to_string(declared_n));
        if (src > UINT32_MAX - 1 || dst > UINT32_MAX - 1) throw ParseError(line_no, "vertex id too large");
        if (src == dst)
            throw StructureError(static_cast<VertexId>(src),
                                 "self-loop rejected at line " + std::to_string(line_no));
        max_id = std::max({max_id, src, dst});
        any_edge = true;
        edges.push_back({static_cast<VertexId>(src), static_cast<VertexId>(dst)});
    }
    const std::size_t n = has_header ? declared_n : (any_edge ? max_id + 1 : 0);
    return DirectedGraph(n, std::move(edges));
}

inline void write_graph(std::ostream& out, const DirectedGraph& g) {
    out << g.num_vertices() << '\n';
    for (const auto& e : g.edges()) out << e.src << ' ' << e.dst << '\n';
}

/// Reads "vertex_id,f1,...,fd" rows; every vertex of `graph` must appear exactly once.
inline FeatureMatrix load_features(std::istream& in, const DirectedGraph& graph) {
    const std::size_t n = graph.num_vertices();
    std::string raw;
    std::size_t line_no = 0;
    std::size_t d = 0;
    bool dim_known = false;
    std::vector<double> values;
    std::vector<char> seen(n, 0);

    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (detail::skip_line(line)) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() < 2) throw ParseError(line_no, "expected 'vertex_id,f1,...,fd'");
        const auto id = detail::parse_uint(fields[0], line_no, "vertex id");
        if (id >= n)
            throw ParseError(line_no, "vertex id " + std::to_string(id) + " not in graph (n=" +
                                          std::to_string(n) + ")");
        if (!dim_known) {
            d = fields.size() - 1;
            dim_known = true;
            values.assign(n * d, 0.0);
        } else if (fields.size() - 1 != d) {
            throw ParseError(line_no, "dimension mismatch: expected " + std::to_string(d) +
                                          " values, got " + std::to_string(fields.size() - 1));
        }
        if (seen[id]) throw ParseError(line_no, "duplicate row for vertex " + std::to_string(id));
        seen[id] = 1;
        for (std::size_t c = 0; c < d; ++c) {
            const double x = detail::parse_double(fields[c + 1], line_no);
            if (!std::isfinite(x))
                throw ParseError(line_no, "non-finite value for vertex " + std::to_string(id));
            values[id * d + c] = x;
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!seen[v]) throw ValidationError("missing feature row for vertex " + std::to_string(v));
    return FeatureMatrix(n, d, std::move(values));
}

inline void write_features(std::ostream& out, const FeatureMatrix& f) {
    const auto old_precision = out.precision(17);
    for (VertexId v = 0; v < f.rows(); ++v) {
        out << v;
        for (double x : f.row(v)) out << ',' << x;
        out << '\n';
    }
    out.precision(old_precision);
}

/// Reads "vertex_id,group" rows with 1-indexed groups; k = largest group seen.
inline OrderedPartition load_partition(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
    std::uint64_t max_id = 0;
    std::uint64_t k = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (detail::skip_line(line)) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != 2) throw ParseError(line_no, "expected 'vertex_id,group'");
        const auto id = detail::parse_uint(fields[0], line_no, "vertex id");
        const auto g = detail::parse_uint(fields[1], line_no, "group");
        if (g == 0) throw ParseError(line_no, "groups are 1-indexed");
        rows.emplace_back(id, g);
        max_id = std::max(max_id, id);
        k = std::max(k, g);
    }
    if (rows.empty()) return OrderedPartition(1, {});
    std::vector<GroupId> groups(max_id + 1, 0);
    std::vector<char> seen(max_id + 1, 0);
    for (auto [id, g] : rows) {
        if (seen[id]) throw ValidationError("duplicate partition row for vertex " + std::to_string(id));
        seen[id] = 1;
        groups[id] = static_cast<GroupId>(g - 1);
    }
    for (std::size_t v = 0; v < seen.size(); ++v)
        if (!seen[v]) throw ValidationError("missing partition row for vertex " + std::to_string(v));
    return OrderedPartition(k, std::move(groups));
}

inline void write_partition(std::ostream& out, const OrderedPartition& p) {
    for (VertexId v = 0; v < p.size(); ++v) out << v << ',' << p[v] + 1 << '\n';
}

}  // namespace dgs
