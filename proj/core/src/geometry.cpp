#include "mbs/geometry.hpp"

namespace mbs {

bool Point4::operator<(const Point4& o) const {
    if (t != o.t) return t < o.t;
    if (x1 != o.x1) return x1 < o.x1;
    if (x2 != o.x2) return x2 < o.x2;
    return x3 < o.x3;
}

std::string Point4::to_string() const {
    return "(" + rat_to_string(t) + "," + rat_to_string(x1) + "," + rat_to_string(x2) + "," +
           rat_to_string(x3) + ")";
}

Point4 point_from_string(const std::string& text) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw ParseError("point must look like (t,x1,x2,x3): '" + text + "'");
    std::string body = text.substr(1, text.size() - 2);
    std::string parts[4];
    int n = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || body[i] == ',') {
            if (n >= 4)
                throw ParseError("too many coordinates in '" + text + "'");
            parts[n++] = body.substr(start, i - start);
            start = i + 1;
        }
    }
    if (n != 4)
        throw ParseError("expected 4 coordinates in '" + text + "'");
    return Point4(rat_from_string(parts[0]), rat_from_string(parts[1]), rat_from_string(parts[2]),
                  rat_from_string(parts[3]));
}

Rat lorentz_interval(const Point4& x, const Point4& y) {
    Rat dt = x.t - y.t;
    Rat d1 = x.x1 - y.x1;
    Rat d2 = x.x2 - y.x2;
    Rat d3 = x.x3 - y.x3;
    return -dt * dt + d1 * d1 + d2 * d2 + d3 * d3;
}

bool minkowski_leq(const Point4& x, const Point4& y) {
    return x.t <= y.t && lorentz_interval(x, y) <= 0;
}

bool minkowski_lt(const Point4& x, const Point4& y) {
    return !(x == y) && minkowski_leq(x, y);
}

bool slr(const Point4& x, const Point4& y) {
    return !minkowski_leq(x, y) && !minkowski_leq(y, x);
}

Rat euclid_sq(const Point4& x, const Point4& y) {
    Rat dt = x.t - y.t;
    return dt * dt + spatial_dist_sq(x, y);
}

Rat spatial_dist_sq(const Point4& x, const Point4& y) {
    Rat d1 = x.x1 - y.x1;
    Rat d2 = x.x2 - y.x2;
    Rat d3 = x.x3 - y.x3;
    return d1 * d1 + d2 * d2 + d3 * d3;
}

Point4 up(const Point4& a, const Point4& b) {
    if (a.t < b.t)
        throw std::domain_error("up(a,b) requires a.t >= b.t");
    Rat dist_sq = spatial_dist_sq(a, b);
    Rat r;
    if (!rat_sqrt_exact(dist_sq, r))
        r = sqrt_upper_bound(dist_sq);
    return Point4(a.t + r, a.x1, a.x2, a.x3);
}

} // namespace mbs
