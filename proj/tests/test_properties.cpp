#include "doctest.h"

#include "mbs/scenario.hpp"
#include "mbs/sites.hpp"
#include "support.hpp"

using namespace mbs;

TEST_CASE("quadratic solver agrees with direct evaluation") {
    testsupport::Rng rng(61001);
    std::uniform_int_distribution<long> coeff(-40, 40), den(1, 5), lo_d(0, 6);
    for (int trial = 0; trial < 4000; ++trial) {
        Rat A = make_rat(coeff(rng), den(rng));
        Rat B = make_rat(coeff(rng), den(rng));
        Rat C = make_rat(coeff(rng), den(rng));
        long lo = lo_d(rng);
        bool strict = trial % 2 == 0;
        IndexSelection sel = solve_quadratic(A, B, C, lo, strict);
        REQUIRE(!sel.undecided);
        auto direct = [&](long n) {
            Rat v = A * Rat(n) * Rat(n) + B * Rat(n) + C;
            return strict ? v < 0 : v <= 0;
        };
        for (long n = lo; n < lo + 120; ++n)
            CHECK(sel.contains(n) == direct(n));
        // the symbolic tail must agree far out as well
        for (long n : {1000l, 44721l, 1000000l})
            if (n >= lo)
                CHECK(sel.contains(n) == direct(n));
        // nothing below lo is ever selected
        CHECK(!sel.contains(lo - 1));
    }
}

TEST_CASE("selection intersection is pointwise conjunction") {
    testsupport::Rng rng(61002);
    std::uniform_int_distribution<long> small(0, 30);
    std::uniform_int_distribution<int> coin(0, 3);
    auto random_selection = [&] {
        IndexSelection s;
        int ranges = coin(rng);
        for (int i = 0; i < ranges; ++i) {
            long a = small(rng);
            s.add_range(a, a + small(rng) % 7);
        }
        if (coin(rng) == 0)
            s.add_all_from(small(rng) + 10);
        s.normalize();
        return s;
    };
    for (int trial = 0; trial < 3000; ++trial) {
        IndexSelection a = random_selection();
        IndexSelection b = random_selection();
        IndexSelection c = intersect(a, b);
        for (long n = 0; n < 80; ++n)
            CHECK(c.contains(n) == (a.contains(n) && b.contains(n)));
        for (long n : {500l, 12345l})
            CHECK(c.contains(n) == (a.contains(n) && b.contains(n)));
    }
}

TEST_CASE("restricting a selection below a cap") {
    IndexSelection s;
    s.add_range(2, 5);
    s.add_all_from(9);
    s.normalize();
    s.restrict_below(12);
    CHECK(s.contains(4));
    CHECK(s.contains(11));
    CHECK(!s.contains(12));
    CHECK(!s.infinite());
}

TEST_CASE("constraint merge is conjunction") {
    testsupport::Rng rng(61003);
    std::uniform_int_distribution<long> idx(0, 9);
    std::uniform_int_distribution<int> bit(0, 1), kind(0, 5);
    ScenarioFamily fam = symbolic_family(FamilyKind::FreeBinary);
    auto random_cs = [&] {
        ConstraintSet cs;
        int steps = kind(rng) + 1;
        for (int i = 0; i < steps; ++i) {
            if (kind(rng) == 0)
                cs.require_tail(idx(rng), bit(rng));
            else
                cs.require(idx(rng), bit(rng));
        }
        return cs;
    };
    auto random_scenario = [&] {
        Scenario s;
        int z = kind(rng);
        for (int i = 0; i < z; ++i)
            s.zeros.insert(idx(rng));
        if (kind(rng) == 0)
            s.zeros_from = idx(rng) + 4;
        return s;
    };
    for (int trial = 0; trial < 4000; ++trial) {
        ConstraintSet a = random_cs();
        ConstraintSet b = random_cs();
        ConstraintSet merged = a;
        merged.merge(b);
        for (int probe = 0; probe < 8; ++probe) {
            Scenario s = random_scenario();
            bool in_a = !a.contradictory && fam.contains(s, a);
            bool in_b = !b.contradictory && fam.contains(s, b);
            bool in_m = !merged.contradictory && fam.contains(s, merged);
            CHECK(in_m == (in_a && in_b));
        }
    }
}

TEST_CASE("constraint subset test is sound") {
    testsupport::Rng rng(61004);
    std::uniform_int_distribution<long> idx(0, 7);
    std::uniform_int_distribution<int> bit(0, 1), kind(0, 4);
    for (FamilyKind fk : {FamilyKind::FreeBinary, FamilyKind::FinitelyManyZeros}) {
        ScenarioFamily fam = symbolic_family(fk);
        for (int trial = 0; trial < 2000; ++trial) {
            ConstraintSet a, b;
            for (int i = 0; i < 3; ++i) {
                if (kind(rng) == 0)
                    a.require_tail(idx(rng), bit(rng));
                else
                    a.require(idx(rng), bit(rng));
            }
            for (int i = 0; i < 2; ++i) {
                if (kind(rng) == 0)
                    b.require_tail(idx(rng), bit(rng));
                else
                    b.require(idx(rng), bit(rng));
            }
            ScenarioSet sa = ScenarioSet::of_constraints(a);
            ScenarioSet sb = ScenarioSet::of_constraints(b);
            if (!sa.subset_of(sb, fam))
                continue;
            // soundness: every satisfier of a satisfies b
            for (int probe = 0; probe < 12; ++probe) {
                Scenario s;
                int z = kind(rng);
                for (int i = 0; i < z; ++i)
                    s.zeros.insert(idx(rng));
                if (fk == FamilyKind::FreeBinary && kind(rng) == 0)
                    s.zeros_from = idx(rng);
                if (fam.contains(s, a))
                    CHECK(fam.contains(s, b));
            }
        }
    }
}
