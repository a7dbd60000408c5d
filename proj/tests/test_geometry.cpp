#include "doctest.h"

#include "mbs/geometry.hpp"
#include "support.hpp"

#include <cmath>

using namespace mbs;

TEST_CASE("rational parsing and printing") {
    CHECK(rat_to_string(rat_from_string("3/6")) == "1/2");
    CHECK(rat_to_string(rat_from_string("-4/2")) == "-2");
    CHECK(rat_to_string(rat_from_string("7")) == "7");
    CHECK_THROWS_AS(rat_from_string("1.5"), ParseError);
    CHECK_THROWS_AS(rat_from_string("1/0"), ParseError);
    CHECK_THROWS_AS(rat_from_string(""), ParseError);
}

TEST_CASE("lorentz interval on the pinned examples") {
    Point4 o(0, 0, 0, 0);
    CHECK(lorentz_interval(o, Point4(1, 0, 0, 0)) == Rat(-1));
    CHECK(lorentz_interval(o, Point4(0, 1, 0, 0)) == Rat(1));
    // -(2)^2 + 1 + 1 + 1
    CHECK(lorentz_interval(o, Point4(2, 1, 1, 1)) == Rat(-1));
    CHECK(lorentz_interval(Point4(2, 1, 1, 1), o) == Rat(-1)); // symmetric
}

TEST_CASE("causal order basics") {
    Point4 o(0, 0, 0, 0);
    CHECK(minkowski_leq(o, o));
    CHECK(minkowski_leq(o, Point4(1, 1, 0, 0)));  // light-like
    CHECK(!minkowski_leq(o, Point4(1, 2, 0, 0))); // interval 3 > 0
    CHECK(!minkowski_lt(o, o));
}

TEST_CASE("space-like relatedness") {
    CHECK(slr(Point4(0, 1, 0, 0), Point4(0, -1, 0, 0)));
    Point4 x(1, 2, 3, 4);
    CHECK(!slr(x, x));
    CHECK(!slr(Point4(0, 0, 0, 0), Point4(1, 0, 0, 0)));
}

TEST_CASE("euclidean squared distance") {
    Point4 x(3, 1, -2, 5);
    CHECK(euclid_sq(x, x) == Rat(0));
    CHECK(euclid_sq(Point4(0, 0, 0, 0), Point4(0, 1, 1, 0)) == Rat(2));
}

TEST_CASE("up: exact perfect-square norms") {
    Point4 a(0, 0, 0, 0), b(0, 3, 4, 0);
    CHECK(up(a, b) == Point4(5, 0, 0, 0));
    Point4 c(2, 7, -1, 3);
    CHECK(up(c, c) == c);
    CHECK(up(Point4(2, 0, 0, 0), Point4(1, 1, 0, 0)) == Point4(3, 0, 0, 0));
    CHECK(minkowski_leq(Point4(1, 1, 0, 0), Point4(3, 0, 0, 0)));
}

TEST_CASE("up: precondition and irrational norms") {
    CHECK_THROWS_AS(up(Point4(0, 0, 0, 0), Point4(1, 1, 0, 0)), std::domain_error);
    // spatial distance sqrt(2): the bound overshoots by at most 2^-32
    Point4 a(0, 0, 0, 0), b(0, 1, 1, 0);
    Point4 r = up(a, b);
    CHECK(minkowski_leq(b, r));
    CHECK(r.x1 == a.x1);
    Rat excess = r.t * r.t - Rat(2); // r.t >= sqrt(2)
    CHECK(excess >= 0);
    // (sqrt(2) + 2^-32)^2 - 2 < 2^-30
    CHECK(excess < make_rat(1, 1l << 30));
}

TEST_CASE("sqrt upper bound is exact on dyadic squares") {
    CHECK(sqrt_upper_bound(Rat(25)) == Rat(5));
    CHECK(sqrt_upper_bound(make_rat(1, 4)) == make_rat(1, 2));
    CHECK(sqrt_upper_bound(Rat(0)) == Rat(0));
}

TEST_CASE("order laws on random rational points") {
    testsupport::Rng rng(20240401);
    for (int trial = 0; trial < 10000; ++trial) {
        Point4 x = testsupport::random_point(rng);
        Point4 y = testsupport::random_point(rng);
        Point4 z = testsupport::random_point(rng);
        CHECK(minkowski_leq(x, x));
        if (minkowski_leq(x, y) && minkowski_leq(y, x))
            CHECK(x == y);
        if (minkowski_leq(x, y) && minkowski_leq(y, z))
            CHECK(minkowski_leq(x, z));
        // trichotomy: exactly one of {x<y, y<x, x=y, slr}
        int states = (minkowski_lt(x, y) ? 1 : 0) + (minkowski_lt(y, x) ? 1 : 0) +
                     (x == y ? 1 : 0) + (slr(x, y) ? 1 : 0);
        CHECK(states == 1);
        CHECK(slr(x, y) == slr(y, x));
        CHECK(lorentz_interval(x, y) == lorentz_interval(y, x));
    }
}

TEST_CASE("up dominates whenever the precondition holds") {
    testsupport::Rng rng(20240402);
    for (int trial = 0; trial < 2000; ++trial) {
        Point4 a = testsupport::random_point(rng);
        Point4 b = testsupport::random_point(rng);
        if (a.t < b.t)
            std::swap(a, b);
        Point4 r = up(a, b);
        CHECK(minkowski_leq(b, r));
        CHECK(minkowski_leq(a, r));
        CHECK(r.x1 == a.x1);
        CHECK(r.x2 == a.x2);
        CHECK(r.x3 == a.x3);
    }
}

TEST_CASE("interval sign agrees with floating evaluation off the boundary") {
    testsupport::Rng rng(20240403);
    for (int trial = 0; trial < 5000; ++trial) {
        Point4 x = testsupport::random_point(rng);
        Point4 y = testsupport::random_point(rng);
        Rat exact = lorentz_interval(x, y);
        if (exact == 0)
            continue; // light-like boundary: float ties excluded
        double dt = rat_to_double(x.t) - rat_to_double(y.t);
        double d1 = rat_to_double(x.x1) - rat_to_double(y.x1);
        double d2 = rat_to_double(x.x2) - rat_to_double(y.x2);
        double d3 = rat_to_double(x.x3) - rat_to_double(y.x3);
        double approx = -dt * dt + d1 * d1 + d2 * d2 + d3 * d3;
        if (std::abs(approx) > 1e-9)
            CHECK((exact > 0) == (approx > 0));
    }
}
