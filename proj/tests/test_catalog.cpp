#include "doctest.h"

#include "mbs/catalog.hpp"
#include "mbs/detect.hpp"
#include "mbs/histories.hpp"

using namespace mbs;

TEST_CASE("every catalog entry builds and validates") {
    for (const auto& entry : catalog_entries()) {
        CatalogProduct p = catalog_build(entry.name);
        CHECK(validate(*p.model).clean());
    }
    CHECK_THROWS_AS(catalog_build("nope"), std::invalid_argument);
}

TEST_CASE("unknown entries list the alternatives") {
    try {
        catalog_build("m3");
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("epr-bohm") != std::string::npos);
        CHECK(msg.find("wrapped") != std::string::npos);
    }
}

TEST_CASE("two-station expected verdict table") {
    CatalogProduct p = gen_epr_bohm();
    TransitionSet T = *p.transitions;
    T.choose({"+", "+"});
    CHECK(check_finfb(T).funny);
    T.choose({"-", "-"});
    CHECK(check_finfb(T).funny);
    T.choose({"+", "-"});
    CHECK(!check_finfb(T).funny);
    T.choose({"-", "+"});
    CHECK(!check_finfb(T).funny);
}

TEST_CASE("countable-row expected verdict table") {
    CatalogProduct p = gen_m2(12, "finitely-many-zeros");
    CHECK(check_inffb(p.model->family, p.model->sites, ZeroOneRule{0, {}}).funny);
    CHECK(check_cfb_symbolic(p.model->family, p.model->sites, ZeroOneRule{0, {}}).funny);
    CHECK(check_postulate_b(p.model->family, *p.x_rule).holds);
}

TEST_CASE("wrapped expected verdict table at the acceptance size") {
    CatalogProduct p = gen_wrapped(16);
    const MbsModel& m = *p.model;
    CHECK(m.sites.sample_count() == 16);
    CHECK(check_inffb(m.family, m.sites, *p.default_rule).funny);
    CHECK(!check_epsfb(m, *p.default_rule).funny);
    CHECK(!check_postulate_a(m, *p.default_rule).holds);
    CHECK(check_postulate_b(m.family, *p.x_rule).holds);
}

TEST_CASE("midline accumulation expected verdict table") {
    CatalogProduct p = gen_eps2d(8);
    const MbsModel& m = *p.model;
    EpsResult eps = check_epsfb(m, *p.default_rule);
    CHECK(eps.funny);
    CHECK(check_postulate_a(m, *p.default_rule).holds);
    // sampled sites alone never witness the finitary kind
    TransitionSet T;
    T.name = "eps2d-sample";
    T.model = &m;
    T.family = m.family;
    Scenario ones = m.scenario("z{}");
    for (long i = 0; i < m.sites.sample_count(); ++i) {
        TransitionPoint pt;
        pt.id = "q" + std::to_string(i);
        pt.loc = m.sites.site(i);
        pt.rep = ones;
        EventClass e = event_class(m, *pt.loc, ones);
        pt.histories = e.members;
        pt.cells = elementary_possibilities(m, e);
        pt.chosen = p.default_rule->bit(i) == 0 ? 0 : 1;
        if (pt.cells[pt.chosen].bit != p.default_rule->bit(i))
            pt.chosen = 1 - pt.chosen;
        T.pts.push_back(std::move(pt));
    }
    CHECK(!check_finfb(T).funny);
}

TEST_CASE("angle parameters really trace the half-angle recurrence") {
    // cot(pi/8) = 1 + sqrt(2): the bound must sit within 2^-31 above it
    CatalogProduct p = gen_wrapped(3);
    const Point4& e2 = p.model->sites.sample[1];
    // recover t_2 from the direction: x = (1-t^2)/(1+t^2), y = 2t/(1+t^2)
    Rat x = e2.x1 / Rat(2), y = e2.x2 / Rat(2);
    Rat t = (1 - x) / y;
    Rat err = t * t - (t * 2 + 1); // t^2 - 2t - 1 = 0 at the true cotangent
    CHECK(err >= 0);
    CHECK(err < make_rat(1, 1l << 28));
}

TEST_CASE("lattice entry drives the chain construction") {
    CatalogProduct p = gen_lattice(8);
    MingapResult r = check_min_gap_no_inffb(*p.model, make_rat(1, 2), *p.default_rule);
    CHECK(r.posc_holds);
    CHECK(r.verdict_none);
}
