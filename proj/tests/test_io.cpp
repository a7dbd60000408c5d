#include "doctest.h"

#include "mbs/catalog.hpp"
#include "mbs/detect.hpp"
#include "mbs/histories.hpp"
#include "mbs/model_io.hpp"

#include <sstream>

using namespace mbs;

namespace {

MbsModel reparse(const MbsModel& m) {
    std::string text = serialize_model(m);
    std::istringstream in(text);
    return parse_model(in, "roundtrip");
}

} // namespace

TEST_CASE("serialize/parse round trip is stable") {
    for (const auto& entry : catalog_entries()) {
        CatalogProduct p = catalog_build(entry.name);
        MbsModel back = reparse(*p.model);
        CHECK(serialize_model(back) == serialize_model(*p.model));
    }
}

TEST_CASE("round trip preserves verdicts") {
    SUBCASE("infinitary verdict on the countable row") {
        CatalogProduct p = gen_m2(6, "finitely-many-zeros");
        MbsModel back = reparse(*p.model);
        CHECK(check_inffb(back.family, back.sites, ZeroOneRule{0, {}}).funny ==
              check_inffb(p.model->family, p.model->sites, ZeroOneRule{0, {}}).funny);
    }
    SUBCASE("chain verdict on the line model") {
        CatalogProduct p = gen_imptop(4);
        MbsModel back = reparse(*p.model);
        const ChainDescriptor* chain = back.chain("Z");
        REQUIRE(chain);
        CHECK(!chain_compactness_witness(back, *chain).has_witness);
    }
    SUBCASE("choice points on the accumulation model") {
        CatalogProduct p = gen_lw1(4);
        MbsModel back = reparse(*p.model);
        Scenario a = back.scenario("a"), b = back.scenario("b");
        CHECK(classify_choice_point(back, Point4(0, 0, 0, 0), a, b) == ChoiceVerdict::Yes);
    }
    SUBCASE("epsilon verdict on the wrapped model") {
        CatalogProduct p = gen_wrapped(8);
        MbsModel back = reparse(*p.model);
        CHECK(!check_epsfb(back, ZeroOneRule{0, {}}).funny);
    }
}

TEST_CASE("parse errors carry positions") {
    std::istringstream in("family explicit a b\nsplit a c : (0,0,0,0)\n");
    try {
        parse_model(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("unknown scenario") != std::string::npos);
    }
    std::istringstream bad_point("family explicit a b\nsplit a b : (0,0,0)\n");
    CHECK_THROWS_AS(parse_model(bad_point), ParseError);
    std::istringstream no_family("split a b : (0,0,0,0)\n");
    CHECK_THROWS_AS(parse_model(no_family), ParseError);
    std::istringstream bad_site("family free-binary\nsite 0 (0,0,0,0)\nsite 2 (0,1,0,0)\n");
    CHECK_THROWS_AS(parse_model(bad_site), ParseError);
}

TEST_CASE("tampered cone samples are rejected on load") {
    CatalogProduct p = gen_wrapped(6);
    std::string text = serialize_model(*p.model);
    // move one site off the cone
    auto pos = text.find("site 2 ");
    REQUIRE(pos != std::string::npos);
    auto end = text.find('\n', pos);
    text = text.substr(0, pos) + "site 2 (-3,3,0,0)" + text.substr(end);
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_model(in), ParseError);
}

TEST_CASE("annotations and explicit chains survive the round trip") {
    MbsModel m;
    m.name = "annotated";
    m.family = explicit_family({"a", "b"});
    m.splitting[PairKey(0, 1)] = {Point4(0, 0, 0, 0)};
    m.annotations[{"a", Point4(0, 0, 0, 0)}] = "prepared state";
    ChainDescriptor chain;
    chain.name = "c";
    chain.elems.emplace_back(Point4(-1, 0, 0, 0), m.scenario("a"));
    chain.elems.emplace_back(Point4(2, 0, 0, 0), m.scenario("a"));
    m.chains.push_back(chain);
    MbsModel back = reparse(m);
    CHECK(back.annotations.at({"a", Point4(0, 0, 0, 0)}) == "prepared state");
    REQUIRE(back.chain("c"));
    CHECK(back.chain("c")->elems.size() == 2);
    CHECK(chain_compactness_witness(back, *back.chain("c")).has_witness);
}

TEST_CASE("svg rendering is deterministic and sane") {
    CatalogProduct p = gen_lw1(5);
    std::string one = render_svg(*p.model);
    std::string two = render_svg(*p.model);
    CHECK(one == two);
    CHECK(one.find("<svg") == 0);
    // 2n sampled splitting marks plus 3 sampled elements per sequence
    std::size_t circles = 0;
    for (std::size_t at = one.find("<circle"); at != std::string::npos;
         at = one.find("<circle", at + 1))
        ++circles;
    CHECK(circles == 10 + 6 + 2); // marks + sequence samples + two limit rings
    CHECK(one.find("limit (0,0,0,0)") != std::string::npos);

    CatalogProduct imptop = gen_imptop(4);
    std::string svg = render_svg(*imptop.model);
    CHECK(svg.find("chain Z") != std::string::npos);

    MbsModel empty;
    empty.family = explicit_family({"a"});
    std::string blank = render_svg(empty);
    CHECK(blank.find("<svg") == 0); // empty axes document

    CatalogProduct wrapped = gen_wrapped(4);
    CHECK_THROWS_AS(render_svg(*wrapped.model), UnsupportedError); // not 2D
}
