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
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dgs {

/// Extended real used for every objective value.
///
/// A cost is a pair (infinite units, finite part) ordered lexicographically.
/// Any cost with a positive unit count behaves as +infinity against every
/// finite cost, so the arithmetic saturates the way an extended real should,
/// while two infinite costs can still be compared by how many infinite-weight
/// edges they carry. Signed unit counts appear only in deltas.
class Cost {
public:
    constexpr Cost() = default;
    constexpr explicit Cost(double finite) : finite_(finite) {}
    constexpr Cost(std::int64_t infinite_units, double finite)
        : units_(infinite_units), finite_(finite) {}

    static constexpr Cost infinity(std::int64_t units = 1) { return Cost(units, 0.0); }

    /// Marker cost for choices that are never allowed (e.g. a group without a
    /// centroid). Dominates any realistic count of infinite-weight edges.
    static constexpr Cost forbidden() { return Cost(std::int64_t{1} << 40, 0.0); }

    constexpr std::int64_t infinite_units() const { return units_; }
    constexpr double finite_part() const { return finite_; }
    constexpr bool is_finite() const { return units_ == 0; }

    /// Collapses to a plain double: +inf / -inf when infinite units remain.
    double value() const {
        if (units_ > 0) return std::numeric_limits<double>::infinity();
        if (units_ < 0) return -std::numeric_limits<double>::infinity();
        return finite_;
    }

    constexpr Cost& operator+=(const Cost& o) {
        units_ += o.units_;
        finite_ += o.finite_;
        return *this;
    }
    constexpr Cost& operator-=(const Cost& o) {
        units_ -= o.units_;
        finite_ -= o.finite_;
        return *this;
    }
    friend constexpr Cost operator+(Cost a, const Cost& b) { return a += b; }
    friend constexpr Cost operator-(Cost a, const Cost& b) { return a -= b; }
    friend constexpr Cost operator-(const Cost& a) { return Cost(-a.units_, -a.finite_); }

    friend constexpr bool operator==(const Cost& a, const Cost& b) {
        return a.units_ == b.units_ && a.finite_ == b.finite_;
    }
    friend constexpr std::partial_ordering operator<=>(const Cost& a, const Cost& b) {
        if (auto c = a.units_ <=> b.units_; c != 0) return c;
        return a.finite_ <=> b.finite_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Cost& c) {
        if (c.units_ == 0) return os << c.finite_;
        return os << (c.units_ > 0 ? "inf" : "-inf") << "[" << c.units_ << "; " << c.finite_ << "]";
    }

private:
    std::int64_t units_ = 0;
    double finite_ = 0.0;
};

/// True when `delta` lowers a cost by more than `tol` (an infinite-unit drop always counts).
inline bool strictly_improves(const Cost& delta, double tol) {
    return delta.infinite_units() < 0 || (delta.infinite_units() == 0 && delta.finite_part() < -tol);
}

/// Equal unit counts and finite parts within `rel` relative to max(1, |a|, |b|).
inline bool approx_equal(const Cost& a, const Cost& b, double rel) {
    if (a.infinite_units() != b.infinite_units()) return false;
    const double scale =
        std::max({1.0, std::abs(a.finite_part()), std::abs(b.finite_part())});
    return std::abs(a.finite_part() - b.finite_part()) <= rel * scale;
}

/// Edge weight on the extended non-negative reals.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Penalties {
    double lambda_f = 0.0;
    double lambda_b = 0.0;

    void validate() const {
        if (std::isnan(lambda_f) || std::isnan(lambda_b) || lambda_f < 0 || lambda_b < 0)
            throw std::invalid_argument("penalties must be non-negative (inf allowed)");
    }
};

/// lambda * count with 0 * inf = 0 and inf * count counted as infinite units.
inline Cost edge_penalty(double lambda, std::int64_t count) {
    if (count == 0 || lambda == 0.0) return Cost{};
    if (std::isinf(lambda)) return Cost::infinity(count);
    return Cost(lambda * static_cast<double>(count));
}

}  // namespace dgs
