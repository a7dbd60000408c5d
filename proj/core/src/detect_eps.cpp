#include "mbs/detect.hpp"

#include <sstream>

namespace mbs {

namespace {

std::vector<Rat> delta_ladder(std::vector<Rat> user) {
    std::vector<Rat> out{Rat(1), make_rat(1, 2), make_rat(1, 4)};
    for (auto& d : user)
        out.push_back(d);
    return out;
}

ConstraintSet rule_on(const ZeroOneRule& f, const IndexSelection& sel) {
    ConstraintSet cs;
    sel.for_each([&](long n) { cs.require(n, f.bit(n)); });
    if (sel.all_from) {
        long from = *sel.all_from;
        std::set<long> except;
        for (const auto& [i, b] : f.exceptions)
            if (i >= from && b != f.default_bit) {
                except.insert(i);
                cs.require(i, b);
            }
        cs.require_tail(from, f.default_bit, except);
    }
    return cs;
}

} // namespace

// -- epsilon funny business ---------------------------------------------------------

EpsResult check_epsfb(const MbsModel& model, const ZeroOneRule& f, std::vector<Rat> deltas) {
    if (!model.indexed())
        throw UnsupportedError("epsilon check needs an indexed (located) site family");
    const SiteSet& sites = model.sites;
    EpsResult r;
    r.rule_text = f.to_string();
    std::vector<Rat> ladder = delta_ladder(std::move(deltas));

    auto ball_trace = [&](const Point4& center, EpsCandidate& cand) {
        for (const Rat& d : ladder) {
            Rat d_sq = d * d;
            IndexSelection sel = sites.within(center, d_sq);
            if (sel.undecided) {
                cand.trace.push_back("delta=" + rat_to_string(d) + ": tail undecided");
                continue;
            }
            ConstraintSet cs = rule_on(f, sel);
            bool sat = model.family.satisfiable(cs);
            cand.trace.push_back("delta=" + rat_to_string(d) + ": sites " + sel.to_string() +
                                 " -> joint outcome " + (sat ? "possible" : "empty"));
        }
    };

    // declared accumulation point
    if (sites.tail == TailKind::InvSeq) {
        EpsCandidate cand;
        cand.point = sites.limit;
        cand.is_accumulation = true;
        ball_trace(sites.limit, cand);
        // every ball contains the whole tail past some index; the rule's
        // default bit decides all of them
        bool default_zero = f.default_bit == 0;
        bool family_blocks = model.family.kind == FamilyKind::FinitelyManyZeros ||
                             model.family.kind == FamilyKind::AtMostKZeros;
        if (default_zero && family_blocks) {
            cand.witness = true;
            cand.reason = "every neighborhood contains an infinite tail of sites forced to 0; "
                          "the family admits only finitely many zeros";
        } else {
            cand.reason = "tail constraints stay satisfiable in every neighborhood";
        }
        r.candidates.push_back(std::move(cand));
    }

    // sample sites: exact isolation
    for (long n = 0; n < sites.sample_count(); ++n) {
        const Point4& e = sites.sample[static_cast<std::size_t>(n)];
        if (sites.tail == TailKind::InvSeq && e == sites.limit)
            continue; // already handled as the accumulation point
        EpsCandidate cand;
        cand.point = e;
        Rat iso_sq(0);
        bool isolated = false;
        // min squared gap to the other samples
        Rat gap(0);
        bool have_gap = false;
        for (long m = 0; m < sites.sample_count(); ++m)
            if (m != n) {
                Rat d = euclid_sq(e, sites.sample[static_cast<std::size_t>(m)]);
                if (!have_gap || d < gap) {
                    gap = d;
                    have_gap = true;
                }
            }
        Rat probe = have_gap ? gap : Rat(1);
        for (int tries = 0; tries < 48 && probe > 0; ++tries) {
            IndexSelection sel = sites.within(e, probe);
            if (!sel.undecided && !sel.infinite()) {
                bool only_self = true;
                sel.for_each([&](long k) {
                    if (k != n)
                        only_self = false;
                });
                if (only_self) {
                    isolated = true;
                    iso_sq = probe;
                    break;
                }
            }
            probe /= 2;
        }
        if (isolated) {
            cand.reason = "isolating neighborhood of squared radius " + rat_to_string(iso_sq) +
                          ": joint outcome there is the single chosen outcome, nonempty";
        } else {
            ball_trace(e, cand);
            cand.reason = "no isolating neighborhood found; sampled neighborhoods recorded";
        }
        r.candidates.push_back(std::move(cand));
    }

    for (const auto& c : r.candidates)
        if (c.witness) {
            r.funny = true;
            r.witness_point = c.point;
            break;
        }
    return r;
}

std::string EpsResult::render() const {
    std::ostringstream out;
    out << "check: epsfb\n";
    out << "rule: f = " << rule_text << "\n";
    for (const auto& c : candidates) {
        out << "  candidate " << c.point.to_string() << (c.is_accumulation ? " (accumulation)" : "")
            << ": " << (c.witness ? "WITNESS" : "not a witness") << " -- " << c.reason << "\n";
        for (const auto& t : c.trace)
            out << "    " << t << "\n";
    }
    out << "verdict: " << (funny ? "EPSFB" : "NONE");
    if (witness_point)
        out << " at " << witness_point->to_string();
    out << "\n";
    return out.str();
}

// -- postulate A ----------------------------------------------------------------------

PostAResult check_postulate_a(const MbsModel& model, const ZeroOneRule& f,
                              std::vector<Rat> deltas) {
    PostAResult r;
    r.via_eps = true;
    r.eps = check_epsfb(model, f, std::move(deltas));
    r.holds = r.eps.funny;
    r.scope_note = "decided through the epsilon-neighborhood equivalence on the reduced set";
    return r;
}

PostAResult check_postulate_a_direct(const TransitionSet& T) {
    if (T.family.kind != FamilyKind::Explicit)
        throw UnsupportedError("direct evaluation needs an explicit scenario family");
    PostAResult r;
    r.scope_note = "the set S consists of the points with chosen outcomes; candidate points x "
                   "range over the whole presentation";
    const int n = static_cast<int>(T.pts.size());
    auto in_s = [&](int i) { return T.pts[i].chosen >= 0; };
    for (int e = 0; e < n; ++e) {
        if (!in_s(e))
            continue;
        bool found = false;
        for (int h = 0; h < static_cast<int>(T.family.explicit_count()) && !found; ++h) {
            Scenario sh;
            sh.label = h;
            if (!T.pts[e].cell().contains(sh, T.family))
                continue;
            for (int x = 0; x < n && !found; ++x) {
                if (T.relation(e, x) != Rel::Lt)
                    continue; // need x strictly above e
                if (!T.pts[x].histories.contains(sh, T.family))
                    continue;
                bool ok = true;
                for (int e2 = 0; e2 < n && ok; ++e2) {
                    if (!in_s(e2))
                        continue;
                    if (T.pts[e2].cell().contains(sh, T.family))
                        continue; // h in f(e2): no requirement
                    if (T.relation(e2, x) != Rel::Slr)
                        ok = false;
                }
                if (ok) {
                    found = true;
                    r.selector_table.push_back("F(" + T.pts[e].id + ") = <" +
                                               T.family.scenario_to_string(sh) + ", " +
                                               T.pts[x].id + ">");
                }
            }
        }
        if (!found) {
            r.holds = true;
            r.critical_point = T.pts[e].id;
            return r;
        }
    }
    r.holds = false;
    return r;
}

std::string PostAResult::render() const {
    std::ostringstream out;
    out << "check: postulate-a\n";
    if (via_eps) {
        out << eps.render();
        out << "equivalence: postulate A <=> epsilon funny business on this presentation\n";
    } else {
        for (const auto& line : selector_table)
            out << "  " << line << "\n";
        if (critical_point)
            out << "  no admissible selector at " << *critical_point << "\n";
    }
    out << "note: " << scope_note << "\n";
    out << "verdict: postulate A " << (holds ? "HOLDS" : "FAILS") << "\n";
    return out.str();
}

// -- postulate B ----------------------------------------------------------------------

PostBResult check_postulate_b(const ScenarioFamily& family, const ZeroOneRule& x_rule,
                              long spot_check) {
    PostBResult r;
    r.finite_subsets.label = "(a) every finite subset fits a history";
    r.whole_set.label = "(b) no history contains the whole set";

    switch (family.kind) {
    case FamilyKind::FinitelyManyZeros:
    case FamilyKind::FreeBinary:
        r.finite_subsets.pass = true;
        r.finite_subsets.note = "family closure: finite constraint sets are satisfiable";
        break;
    case FamilyKind::AtMostKZeros: {
        long zero_demand_everywhere = x_rule.default_bit == 0 ? family.n + 1 : 0;
        for (const auto& [i, b] : x_rule.exceptions)
            if (b == 0)
                ++zero_demand_everywhere;
        r.finite_subsets.pass = zero_demand_everywhere <= family.n;
        r.finite_subsets.note = r.finite_subsets.pass
                                    ? "zero demand within budget on every finite subset"
                                    : "some finite subset already exceeds the zero budget";
        break;
    }
    case FamilyKind::AllStrings:
        r.finite_subsets.pass = true;
        r.finite_subsets.note = "finite family realizes any consistent finite assignment";
        break;
    case FamilyKind::Explicit:
        throw UnsupportedError("rule-based postulate B needs a symbolic family");
    }
    for (long m = 1; m <= spot_check; ++m) {
        if (family.kind == FamilyKind::AllStrings && m > family.n)
            break;
        ConstraintSet cs;
        for (long i = 0; i < m; ++i)
            cs.require(i, x_rule.bit(i));
        bool sat = family.satisfiable(cs);
        r.items.push_back("prefix of size " + std::to_string(m) + ": " +
                          (sat ? "fits a history" : "fits none"));
        if (!sat && r.finite_subsets.pass) {
            r.finite_subsets.pass = false;
            r.finite_subsets.note += "; spot check failed at size " + std::to_string(m);
        }
    }

    ConstraintSet whole;
    if (family.kind == FamilyKind::AllStrings) {
        for (long i = 0; i < family.n; ++i)
            whole.require(i, x_rule.bit(i));
    } else {
        std::set<long> except;
        for (const auto& [i, b] : x_rule.exceptions)
            if (b != x_rule.default_bit)
                except.insert(i);
        whole.require_tail(0, x_rule.default_bit, except);
        for (const auto& [i, b] : x_rule.exceptions)
            whole.require(i, b);
    }
    if (family.satisfiable(whole)) {
        r.whole_set.pass = false;
        r.containing_history = family.witness(whole);
        r.whole_set.note =
            "history " + family.scenario_to_string(*r.containing_history) + " contains the set";
    } else {
        r.whole_set.pass = true;
        r.whole_set.note = "the accumulated membership constraints are unsatisfiable";
    }
    r.holds = r.finite_subsets.pass && r.whole_set.pass;
    return r;
}

PostBResult check_postulate_b_finite(const ScenarioFamily& family,
                                     const std::vector<std::pair<std::string, ScenarioSet>>& xs) {
    PostBResult r;
    r.finite_subsets.label = "(a) every finite subset fits a history";
    r.whole_set.label = "(b) no history contains the whole set";
    ScenarioSet meet = ScenarioSet::all(family);
    for (const auto& [id, membership] : xs) {
        meet.intersect(membership);
        if (meet.empty(family)) {
            r.items.push_back("prefix through '" + id + "' fits no history");
            break;
        }
        r.items.push_back("prefix through '" + id + "' fits a history");
    }
    if (!meet.empty(family)) {
        r.finite_subsets.pass = true;
        r.finite_subsets.note = "the whole finite set fits a history";
        r.whole_set.pass = false;
        r.containing_history = meet.witness(family);
        r.whole_set.note =
            "history " + family.scenario_to_string(*r.containing_history) + " contains the set";
    } else {
        r.finite_subsets.pass = false;
        r.finite_subsets.note = "a finite prefix already fits no history (the set is finite)";
        r.whole_set.pass = true;
        r.whole_set.note = "no history contains the set";
    }
    r.holds = r.finite_subsets.pass && r.whole_set.pass; // always false on finite sets
    return r;
}

std::string PostBResult::render(const ScenarioFamily& family) const {
    std::ostringstream out;
    out << "check: postulate-b\n";
    out << "family: " << family.describe() << "\n";
    for (const auto& line : items)
        out << "  " << line << "\n";
    for (const ClauseCheck* c : {&finite_subsets, &whole_set})
        out << "  clause " << c->label << ": " << (c->pass ? "holds" : "fails") << " -- "
            << c->note << "\n";
    out << "verdict: postulate B " << (holds ? "HOLDS" : "FAILS") << "\n";
    return out.str();
}

// -- minimum gap / chain construction ---------------------------------------------------

MingapResult check_min_gap_no_inffb(const MbsModel& model, const Rat& delta, const ZeroOneRule& f,
                                    long steps) {
    if (!model.indexed())
        throw UnsupportedError("minimum-gap analysis needs an indexed site family");
    if (delta <= 0)
        throw std::domain_error("delta must be positive");
    MingapResult r;
    const SiteSet& sites = model.sites;

    switch (model.family.kind) {
    case FamilyKind::FinitelyManyZeros:
    case FamilyKind::FreeBinary:
    case FamilyKind::AllStrings:
        r.premise_no_finfb = true;
        break;
    case FamilyKind::AtMostKZeros:
        r.premise_no_finfb = false;
        r.failure = "finitary funny business is possible in this family (zero budget); "
                    "the minimum-gap fact does not apply";
        return r;
    case FamilyKind::Explicit:
        throw UnsupportedError("minimum-gap analysis needs a symbolic family");
    }

    switch (sites.tail) {
    case TailKind::None:
        r.posc_holds = true;
        r.posc_reason = "finitely many sites: every point dominates finitely many, under any shift";
        break;
    case TailKind::Affine: {
        Rat A = sites.step.x1 * sites.step.x1 + sites.step.x2 * sites.step.x2 +
                sites.step.x3 * sites.step.x3 - sites.step.t * sites.step.t;
        if (A <= 0)
            throw std::domain_error("affine site family is not pairwise space-like");
        r.posc_holds = true;
        r.posc_reason = "sites run along a space-like line: every point dominates a bounded "
                        "index interval, and a time shift keeps it bounded";
        break;
    }
    case TailKind::InvSeq: {
        r.posc_holds = false;
        Point4 lo(sites.limit.t - delta / 2, sites.limit.x1, sites.limit.x2, sites.limit.x3);
        Point4 hi(sites.limit.t + delta / 2, sites.limit.x1, sites.limit.x2, sites.limit.x3);
        r.posc_reason = "convergent sequence: " + lo.to_string() + " dominates " +
                        sites.below(lo, true).to_string() + " but its shift " + hi.to_string() +
                        " dominates " + sites.below(hi, true).to_string();
        r.failure = "condition fails on the descriptor (accumulating sites)";
        return r;
    }
    case TailKind::Cone: {
        r.posc_holds = false;
        Point4 lo(-delta / 2, 0, 0, 0);
        Point4 hi(delta / 2, 0, 0, 0);
        r.posc_reason = "sites escape to the past: " + lo.to_string() + " dominates " +
                        sites.below(lo, true).to_string() + " but its shift " + hi.to_string() +
                        " dominates " + sites.below(hi, true).to_string();
        r.failure = "condition fails on the descriptor (new sites keep entering under shifts)";
        return r;
    }
    }

    // the chain construction: iterated time shifts, per-slab finite meets
    if (!sites.infinite()) {
        ConstraintSet cs;
        for (long i = 0; i < sites.sample_count(); ++i)
            cs.require(i, f.bit(i));
        bool sat = model.family.satisfiable(cs);
        r.slabs.push_back("finite site set: single slab, joint outcome " +
                          std::string(sat ? "possible" : "empty"));
        r.verdict_none = true; // finite sets never carry the infinitary kind
        if (sat)
            r.witness = model.family.witness(cs);
        return r;
    }

    Point4 x = sites.site(0);
    std::set<long> covered{0};
    ConstraintSet acc;
    acc.require(0, f.bit(0));
    r.slabs.push_back("l0 = " + x.to_string() + " (site 0), constraint g(0)=" +
                      std::to_string(f.bit(0)));
    for (long k = 1; k <= steps; ++k) {
        x = Point4(x.t + delta, x.x1, x.x2, x.x3);
        IndexSelection below = sites.below(x, true);
        if (below.undecided || below.infinite())
            throw UnsupportedError("slab is not finite; the gap condition reasoning broke down");
        IndexSelection fresh;
        below.for_each([&](long i) {
            if (covered.insert(i).second) {
                fresh.add(i);
                acc.require(i, f.bit(i));
            }
        });
        fresh.normalize();
        bool sat = model.family.satisfiable(acc);
        std::ostringstream slab;
        slab << "x" << k << " = " << x.to_string() << ", new sites " << fresh.to_string()
             << ", accumulated joint outcome " << (sat ? "possible" : "empty");
        r.slabs.push_back(slab.str());
        if (!sat) {
            r.family_not_chain_compact = true;
            r.failure = "a finite stage already fails; the rule conflicts with itself";
            return r;
        }
    }

    // the full limit: every site eventually falls below some chain element
    IndexSelection everything;
    everything.add_all_from(0);
    ConstraintSet whole = rule_on(f, everything);
    if (model.family.satisfiable(whole)) {
        r.verdict_none = true;
        r.witness = model.family.witness(whole);
        r.slabs.push_back("limit: the accumulated constraints stay satisfiable; containing "
                          "history " +
                          model.family.scenario_to_string(*r.witness));
    } else {
        r.family_not_chain_compact = true;
        r.failure = "the chain has no containing history in the declared family: the "
                    "presentation is not chain-compact (not a Minkowskian branching structure), "
                    "so the minimum-gap fact does not apply";
    }
    return r;
}

std::string MingapResult::render(const ScenarioFamily& family) const {
    std::ostringstream out;
    out << "check: mingap\n";
    out << "premise (no finitary funny business): " << (premise_no_finfb ? "holds" : "fails")
        << "\n";
    out << "uniform-gap condition: " << (posc_holds ? "holds" : "fails") << " -- " << posc_reason
        << "\n";
    for (const auto& s : slabs)
        out << "  " << s << "\n";
    if (verdict_none) {
        out << "verdict: NONE (no infinitary funny business from this site family)\n";
        if (witness)
            out << "  containing history: " << family.scenario_to_string(*witness) << "\n";
    } else {
        out << "verdict: not applicable -- " << failure << "\n";
    }
    return out.str();
}

} // namespace mbs
