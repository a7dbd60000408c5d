#include "doctest.h"

#include "mbs/catalog.hpp"
#include "mbs/sites.hpp"

using namespace mbs;

namespace {

SiteSet lattice_sites(long n) {
    SiteSet s;
    s.tail = TailKind::Affine;
    s.base = Point4(0, 0, 0, 0);
    s.step = Point4(0, 1, 0, 0);
    for (long k = 0; k < n; ++k)
        s.sample.push_back(Point4(0, Rat(k), 0, 0));
    return s;
}

} // namespace

TEST_CASE("integer quadratic solver") {
    // n^2 - 4 <= 0 on n >= 0: {0,1,2}
    IndexSelection a = solve_quadratic(Rat(1), Rat(0), Rat(-4), 0, false);
    CHECK(a.ranges == std::vector<std::pair<long, long>>{{0, 2}});
    CHECK(!a.infinite());
    // strict: {0,1}
    IndexSelection b = solve_quadratic(Rat(1), Rat(0), Rat(-4), 0, true);
    CHECK(b.ranges == std::vector<std::pair<long, long>>{{0, 1}});
    // -n^2 + 4 <= 0: n >= 2
    IndexSelection c = solve_quadratic(Rat(-1), Rat(0), Rat(4), 0, false);
    CHECK(c.ranges.empty());
    CHECK(c.all_from == 2);
    // always: -n^2 - 4 <= 0
    IndexSelection d = solve_quadratic(Rat(-1), Rat(0), Rat(-4), 3, false);
    CHECK(d.all_from == 3);
    // never: n^2 + 1 <= 0
    CHECK(solve_quadratic(Rat(1), Rat(0), Rat(1), 0, false).empty());
    // linear: 2n - 5 <= 0 -> {0,1,2}; -2n + 5 <= 0 -> n >= 3
    CHECK(solve_quadratic(Rat(0), Rat(2), Rat(-5), 0, false).ranges ==
          std::vector<std::pair<long, long>>{{0, 2}});
    CHECK(solve_quadratic(Rat(0), Rat(-2), Rat(5), 0, false).all_from == 3);
    // roots at 1 and 2: n^2 - 3n + 2 <= 0 -> {1,2}
    IndexSelection e = solve_quadratic(Rat(1), Rat(-3), Rat(2), 0, false);
    CHECK(e.ranges == std::vector<std::pair<long, long>>{{1, 2}});
}

TEST_CASE("selection intersection") {
    IndexSelection a, b;
    a.add_range(0, 5);
    a.add_all_from(10);
    b.add_range(3, 12);
    IndexSelection c = intersect(a, b);
    CHECK(c.contains(3));
    CHECK(c.contains(5));
    CHECK(!c.contains(6));
    CHECK(c.contains(11));
    CHECK(!c.contains(13));
    b.add_all_from(20);
    IndexSelection d = intersect(a, b);
    CHECK(d.all_from == 20);
}

TEST_CASE("affine sites: below and within") {
    SiteSet s = lattice_sites(4); // (0,k) for all k
    IndexSelection below = s.below(Point4(2, 0, 0, 0), false);
    CHECK(below.ranges == std::vector<std::pair<long, long>>{{0, 2}});
    CHECK(s.below(Point4(-1, 0, 0, 0), false).empty());
    // equality handling: (0,0) itself
    CHECK(s.below(Point4(0, 0, 0, 0), false).contains(0));
    CHECK(!s.below(Point4(0, 0, 0, 0), true).contains(0));
    // a point high up dominates a long but finite stretch
    IndexSelection wide = s.below(Point4(100, 50, 0, 0), false);
    CHECK(!wide.infinite());
    CHECK(wide.contains(0));
    CHECK(wide.contains(150));
    CHECK(!wide.contains(151));
    // ball of squared radius 5 around (0,2): sites 0..4
    IndexSelection ball = s.within(Point4(0, 2, 0, 0), Rat(5));
    CHECK(ball.ranges == std::vector<std::pair<long, long>>{{0, 4}});
    CHECK(s.pairwise_slr_symbolic() == true);
}

TEST_CASE("invseq sites: accumulation behavior") {
    SiteSet s;
    s.tail = TailKind::InvSeq;
    s.limit = Point4(0, make_rat(1, 2), 0, 0);
    s.dir = Point4(0, make_rat(-1, 2), 0, 0);
    s.first = 2; // sites (0, 1/2 - 1/(2m)), m = 2,3,...
    // any point strictly above the limit in time dominates a whole tail
    IndexSelection above = s.below(Point4(1, make_rat(1, 2), 0, 0), false);
    CHECK(above.infinite());
    // on the slice nothing is comparable
    CHECK(s.below(Point4(0, make_rat(1, 2), 0, 0), false).empty());
    // every ball around the limit contains a tail
    IndexSelection ball = s.within(s.limit, make_rat(1, 100));
    CHECK(ball.infinite());
    // balls around (0, 1/4) ((m=2)'s site) eventually isolate it
    IndexSelection iso = s.within(Point4(0, make_rat(1, 4), 0, 0), make_rat(1, 10000));
    CHECK(!iso.infinite());
    CHECK(iso.contains(0));
    CHECK(iso.count() == 1);
    CHECK(s.pairwise_slr_symbolic() == true);
}

TEST_CASE("cone sites: frozen selections on the wrapped sample") {
    CatalogProduct wrapped = gen_wrapped(6);
    const SiteSet& s = wrapped.model->sites;
    CHECK(s.sample_count() == 6);
    // everything on or above the apex dominates the whole family
    CHECK(s.below(Point4(0, 0, 0, 0), true).infinite());
    CHECK(s.below(Point4(1, 0, 0, 0), true).infinite());
    // on the axis strictly below the apex: nothing
    CHECK(s.below(Point4(-2, 0, 0, 0), false).empty());
    // at the apex time over the first site's direction: exactly radii 1..4
    Point4 over_first(0, s.sample[0].x1, s.sample[0].x2, 0);
    IndexSelection sel = s.below(over_first, false);
    CHECK(!sel.undecided);
    CHECK(!sel.infinite());
    CHECK(sel.count() == 4);
    // slightly later it turns infinite
    IndexSelection later = s.below(Point4(make_rat(1, 2), over_first.x1, over_first.x2, 0), false);
    CHECK(later.infinite());
}

TEST_CASE("wrapped generation invariants at a larger size") {
    CatalogProduct wrapped = gen_wrapped(24);
    const SiteSet& s = wrapped.model->sites;
    for (long r = 1; r <= 24; ++r) {
        const Point4& e = s.sample[static_cast<std::size_t>(r - 1)];
        CHECK(e.t == Rat(-r));
        CHECK(e.x1 * e.x1 + e.x2 * e.x2 == Rat(r) * Rat(r)); // exactly on the cone
    }
    for (long i = 0; i < 24; ++i)
        for (long j = i + 1; j < 24; ++j) {
            CHECK(slr(s.sample[i], s.sample[j]));
            CHECK(euclid_sq(s.sample[i], s.sample[j]) >= 2);
        }
}
