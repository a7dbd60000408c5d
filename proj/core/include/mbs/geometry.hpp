#pragma once

#include "mbs/rational.hpp"

#include <compare>
#include <string>

namespace mbs {

/// A point of R^4 with exact rational coordinates. t is the time
/// coordinate; x1..x3 are spatial.
struct Point4 {
    Rat t, x1, x2, x3;

    Point4() = default;
    Point4(Rat t_, Rat x1_, Rat x2_ = 0, Rat x3_ = 0)
        : t(std::move(t_)), x1(std::move(x1_)), x2(std::move(x2_)), x3(std::move(x3_)) {}

    bool operator==(const Point4& o) const {
        return t == o.t && x1 == o.x1 && x2 == o.x2 && x3 == o.x3;
    }
    // Lexicographic; only used for deterministic container ordering.
    bool operator<(const Point4& o) const;

    bool spatial_2d() const { return x2 == 0 && x3 == 0; }

    std::string to_string() const; // "(t,x1,x2,x3)"
};

Point4 point_from_string(const std::string& text);

// Signed Lorentz interval: -(dt)^2 + sum of squared spatial differences.
Rat lorentz_interval(const Point4& x, const Point4& y);

// Causal order on Minkowski space: interval <= 0 and time does not decrease.
bool minkowski_leq(const Point4& x, const Point4& y);
bool minkowski_lt(const Point4& x, const Point4& y);

// Space-like related: causally incomparable either way.
bool slr(const Point4& x, const Point4& y);

// Squared Euclidean distance over all four coordinates.
Rat euclid_sq(const Point4& x, const Point4& y);

// Squared Euclidean distance over the spatial coordinates only.
Rat spatial_dist_sq(const Point4& x, const Point4& y);

// Point with a's spatial coordinates, lifted far enough in time to dominate
// b. Requires a.t >= b.t; uses the exact spatial norm when it is rational
// and a dyadic upper bound (2^-32 from above) otherwise, which keeps
// b <= up(a,b) exact either way.
Point4 up(const Point4& a, const Point4& b);

} // namespace mbs
