#include "doctest.h"

#include "mbs/catalog.hpp"
#include "mbs/histories.hpp"
#include "support.hpp"

using namespace mbs;

TEST_CASE("undividedness on the accumulation model") {
    CatalogProduct p = gen_lw1(4);
    const MbsModel& m = *p.model;
    Scenario a = m.scenario("a"), b = m.scenario("b");
    // at the two-sided limit the scenarios divide
    CHECK(!undivided(m, a, b, Point4(0, 0, 0, 0)));
    // at a splitting point they divide
    CHECK(!undivided(m, a, b, Point4(0, 1, 0, 0)));
    // far out on the slice they stay undivided, with an explicit witness
    CHECK(undivided(m, a, b, Point4(0, 3, 0, 0)));
    auto w = undivided_witness(m, a, b, Point4(0, 3, 0, 0));
    REQUIRE(w.has_value());
    CHECK(minkowski_lt(Point4(0, 3, 0, 0), *w));
    CHECK(in_overlap(m, *w, a, b));
    // outside the overlap region: domain error
    CHECK_THROWS_AS(undivided(m, a, b, Point4(5, 0, 0, 0)), std::domain_error);
}

TEST_CASE("undivided witnesses exist off the splitting set on random models") {
    testsupport::Rng rng(41001);
    for (int trial = 0; trial < 40; ++trial) {
        MbsModel m = testsupport::random_valid_model(rng, 4, 4);
        for (const auto& [key, pts] : m.splitting) {
            Scenario a, b;
            a.label = key.a;
            b.label = key.b;
            Point4 probe = pts[0];
            probe.t -= 2;
            if (!in_overlap(m, probe, a, b))
                continue;
            if (undivided(m, a, b, probe)) {
                auto w = undivided_witness(m, a, b, probe);
                REQUIRE(w.has_value());
                CHECK(minkowski_lt(probe, *w));
                CHECK(in_overlap(m, *w, a, b));
            }
        }
    }
}

TEST_CASE("undividedness is an equivalence among scenarios through an event") {
    testsupport::Rng rng(41002);
    for (int trial = 0; trial < 40; ++trial) {
        MbsModel m = testsupport::random_valid_model(rng, 6, 5);
        int n = static_cast<int>(m.family.explicit_count());
        Point4 at = testsupport::random_point(rng, 4, 2);
        std::vector<int> through;
        std::vector<Scenario> scen(n);
        for (int i = 0; i < n; ++i)
            scen[i].label = i;
        for (int i = 0; i < n; ++i) {
            bool in = true;
            for (int j = 0; j < n && in; ++j)
                if (!in_overlap(m, at, scen[i], scen[j]) &&
                    event_class(m, at, scen[i]).members.contains(scen[j], m.family))
                    in = false;
            through.push_back(i);
        }
        auto und = [&](int i, int j) {
            if (i == j)
                return true;
            if (!in_overlap(m, at, scen[i], scen[j]))
                return false; // different events entirely; skip
            return undivided(m, scen[i], scen[j], at);
        };
        for (int i : through)
            for (int j : through) {
                if (!in_overlap(m, at, scen[i], scen[j]))
                    continue;
                CHECK(und(i, j) == und(j, i));
                for (int k : through) {
                    if (!in_overlap(m, at, scen[j], scen[k]) ||
                        !in_overlap(m, at, scen[i], scen[k]))
                        continue;
                    if (und(i, j) && und(j, k))
                        CHECK(und(i, k));
                }
            }
    }
}

TEST_CASE("elementary possibilities partition the scenarios through an event") {
    testsupport::Rng rng(41003);
    for (int trial = 0; trial < 60; ++trial) {
        MbsModel m = testsupport::random_valid_model(rng, 6, 5);
        Point4 at = testsupport::random_point(rng, 4, 2);
        Scenario rep;
        rep.label = 0;
        EventClass e = event_class(m, at, rep);
        auto cells = elementary_possibilities(m, e);
        std::uint64_t seen = 0;
        for (const auto& cell : cells) {
            CHECK(cell.members.mask != 0);          // nonempty
            CHECK((cell.members.mask & seen) == 0); // pairwise disjoint
            seen |= cell.members.mask;
        }
        CHECK(seen == e.members.mask); // cover exactly the scenarios through it
    }
}

TEST_CASE("possibilities at concrete events") {
    SUBCASE("measurement event splits two ways") {
        CatalogProduct p = gen_epr_bohm();
        Scenario pm = p.model->scenario("pm");
        EventClass left = event_class(*p.model, Point4(0, -1, 0, 0), pm);
        auto cells = elementary_possibilities(*p.model, left);
        REQUIRE(cells.size() == 2);
        CHECK(cells[0].members.mask != cells[1].members.mask);
    }
    SUBCASE("limit choice point splits two ways") {
        CatalogProduct p = gen_lw1(4);
        Scenario a = p.model->scenario("a");
        EventClass origin = event_class(*p.model, Point4(0, 0, 0, 0), a);
        auto cells = elementary_possibilities(*p.model, origin);
        REQUIRE(cells.size() == 2);
        CHECK((cells[0].members.mask | cells[1].members.mask) == 0b11);
    }
    SUBCASE("non-choice point has a single cell") {
        CatalogProduct p = gen_lw1(4);
        Scenario a = p.model->scenario("a");
        EventClass side = event_class(*p.model, Point4(0, 3, 0, 0), a);
        auto cells = elementary_possibilities(*p.model, side);
        REQUIRE(cells.size() == 1);
        CHECK(cells[0].members.mask == 0b11);
    }
    SUBCASE("indexed site splits by its bit") {
        CatalogProduct p = gen_m2(4, "finitely-many-zeros");
        Scenario ones = p.model->scenario("z{}");
        EventClass site = event_class(*p.model, p.model->sites.site(2), ones);
        auto cells = elementary_possibilities(*p.model, site);
        REQUIRE(cells.size() == 2);
        CHECK(cells[0].site == 2);
        CHECK(cells[0].bit == 0);
        CHECK(cells[1].bit == 1);
    }
    SUBCASE("indexed family off the sites is unsupported") {
        CatalogProduct p = gen_m2(4, "finitely-many-zeros");
        Scenario ones = p.model->scenario("z{}");
        EventClass off = event_class(*p.model, Point4(0, 0, 0, 0), ones);
        CHECK_THROWS_AS(elementary_possibilities(*p.model, off), UnsupportedError);
    }
}

TEST_CASE("scenario sets along the vertical chain of the line model") {
    CatalogProduct p = gen_imptop(4);
    const MbsModel& m = *p.model;
    // z at (3/2, 0): the sites at spatial 0 and 1 lie strictly below
    Scenario s2 = m.scenario("z{0,1}");
    ScenarioSet sigma = scenario_set_at(m, Point4(make_rat(3, 2), 0, 0, 0), s2);
    CHECK(sigma.cs.value_at(0) == 0);
    CHECK(sigma.cs.value_at(1) == 0);
    CHECK(!sigma.cs.constrains(2));
    // the first chain element is not in the overlap of z{} and z{0}
    CHECK(!in_overlap(m, Point4(make_rat(1, 2), 0, 0, 0), m.scenario("z{}"), m.scenario("z{0}")));
}

TEST_CASE("chain compactness: empty intersection needs all zeros") {
    CatalogProduct p = gen_imptop(4);
    const ChainDescriptor* chain = p.model->chain("Z");
    REQUIRE(chain);
    ChainWitness w = chain_compactness_witness(*p.model, *chain);
    CHECK(!w.has_witness);
    REQUIRE(w.accumulated.cs.tail.has_value());
    CHECK(w.accumulated.cs.tail->second == 0); // all-zeros sequence required
    std::string cert = w.certificate(*p.model);
    CHECK(cert.find("empty intersection") != std::string::npos);
}

TEST_CASE("chain compactness: the finite family variant has a witness") {
    CatalogProduct p = gen_imptop(4, "all-strings");
    const ChainDescriptor* chain = p.model->chain("Z");
    REQUIRE(chain);
    ChainWitness w = chain_compactness_witness(*p.model, *chain);
    REQUIRE(w.has_witness);
    // the witness is the all-zeros string over the four sites
    CHECK(p.model->family.scenario_to_string(*w.witness) == "z{0,1,2,3}");
}

TEST_CASE("chain compactness: finite families always produce witnesses") {
    testsupport::Rng rng(41004);
    for (int trial = 0; trial < 30; ++trial) {
        MbsModel m = testsupport::random_valid_model(rng, 4, 4);
        // an ascending explicit chain under one scenario label
        ChainDescriptor chain;
        chain.name = "c";
        Scenario s;
        s.label = 0;
        for (int i = 0; i < 3; ++i)
            chain.elems.emplace_back(Point4(Rat(-5 + 3 * i), 0, 0, 0), s);
        ChainWitness w = chain_compactness_witness(m, chain);
        CHECK(w.has_witness);
    }
}

TEST_CASE("chain through the wrapped apex pins the scenario") {
    CatalogProduct p = gen_wrapped(6);
    const MbsModel& m = *p.model;
    Scenario g = m.scenario("z{}");
    ChainDescriptor chain;
    chain.name = "axis";
    for (int k = 3; k >= 1; --k)
        chain.elems.emplace_back(Point4(Rat(-k), 0, 0, 0), g);
    chain.elems.emplace_back(Point4(0, 0, 0, 0), g);
    ChainWitness w = chain_compactness_witness(m, chain);
    REQUIRE(w.has_witness);
    CHECK(m.family.scenario_to_string(*w.witness) == "z{}");
    // below the apex the class is unconstrained; at the apex it collapses
    EventClass below = event_class(m, Point4(-1, 0, 0, 0), g);
    CHECK(!below.members.cs.tail.has_value());
    CHECK(below.members.cs.fixed.empty());
    EventClass apex = event_class(m, Point4(0, 0, 0, 0), g);
    REQUIRE(apex.members.cs.tail.has_value());
    CHECK(apex.members.cs.tail->second == 1);
}

TEST_CASE("unsupported chains are rejected") {
    CatalogProduct p = gen_imptop(3);
    ChainDescriptor bad;
    bad.name = "down";
    bad.symbolic = true;
    bad.base = Point4(0, 0, 0, 0);
    bad.step = Point4(-1, 0, 0, 0); // descending: not lower bounded
    CHECK_THROWS_AS(chain_compactness_witness(*p.model, bad), UnsupportedError);
}
