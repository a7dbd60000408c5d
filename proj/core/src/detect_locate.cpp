#include "mbs/detect.hpp"

#include <algorithm>
#include <sstream>

namespace mbs {

namespace {

// base + sqrt(disc), disc >= 0; exact ordering without evaluating roots
struct QuadVal {
    Rat base;
    Rat disc;
};

// sign of a + sqrt(b) - sqrt(c), exact
int sign_root_expr(const Rat& a, const Rat& b, const Rat& c) {
    if (a >= 0) {
        // compare (a + sqrt(b))^2 with c
        Rat t = c - a * a - b; // 2a sqrt(b) vs t
        if (t < 0)
            return 1;
        Rat lhs = 4 * a * a * b;
        Rat rhs = t * t;
        if (lhs > rhs)
            return 1;
        if (lhs < rhs)
            return -1;
        return 0;
    }
    // a < 0: sqrt(b) vs sqrt(c) - a, rhs > 0
    Rat s = b - c - a * a; // vs -2a sqrt(c) >= 0
    if (s < 0)
        return -1;
    Rat lhs = s * s;
    Rat rhs = 4 * a * a * c;
    if (lhs > rhs)
        return 1;
    if (lhs < rhs)
        return -1;
    return 0;
}

int cmp(const QuadVal& p, const QuadVal& q) {
    return sign_root_expr(p.base - q.base, p.disc, q.disc);
}

std::string quadval_str(const QuadVal& v) {
    Rat root;
    if (rat_sqrt_exact(v.disc, root))
        return rat_to_string(v.base + root);
    return rat_to_string(v.base) + "+sqrt(" + rat_to_string(v.disc) + ")";
}

ConstraintSet rule_on_selection(const ZeroOneRule& f, const IndexSelection& sel) {
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

Rat rat_abs(const Rat& v) { return v < 0 ? Rat(-v) : v; }

} // namespace

// -- construct_inffb_from_finfb -----------------------------------------------------

bool Fin2InfResult::all_pass() const {
    for (const auto& c : clauses)
        if (!c.pass)
            return false;
    return !clauses.empty();
}

Fin2InfResult construct_inffb_from_finfb(const TransitionSet& T, const FinfbResult& w,
                                         const Scenario& h_s) {
    if (!w.funny || !reverify_finfb(T, w))
        throw std::domain_error("the finitary witness fails its recheck");
    std::vector<int> ab = w.a1;
    ab.insert(ab.end(), w.a2.begin(), w.a2.end());
    for (int i : ab)
        if (!T.pts[i].histories.contains(h_s, T.family))
            throw std::domain_error("point '" + T.pts[i].id +
                                    "' does not lie in the carrier history");
    for (int i : ab)
        if (!T.pts[i].loc)
            throw UnsupportedError("region construction needs located witness points");
    if (!T.model)
        throw UnsupportedError("region construction needs a backing model");
    const MbsModel& model = *T.model;

    Fin2InfResult r;
    std::string scen = T.family.scenario_to_string(h_s);
    r.region = "{ x in h_" + scen + " : x strictly above no witness point }  u  A1 u A2";

    // the outcome the carrier history takes at an event
    auto carrier_cell = [&](const Point4& at) -> ScenarioSet {
        EventClass e = event_class(model, at, h_s);
        for (const auto& cell : elementary_possibilities(model, e))
            if (cell.members.contains(h_s, T.family))
                return cell.members;
        throw std::logic_error("carrier history missing from its own outcome partition");
    };

    struct SamplePt {
        std::string id;
        Point4 loc;
        ScenarioSet cell;
    };
    std::vector<SamplePt> samples;
    for (int i : ab)
        samples.push_back({T.pts[i].id, *T.pts[i].loc, T.pts[i].cell()});

    // clause (1): an unbounded space-like ray stays inside the region
    {
        Rat t0 = samples[0].loc.t;
        for (const auto& s : samples)
            t0 = std::max(t0, s.loc.t);
        Rat R(1);
        for (const auto& s : samples)
            R = std::max(R, Rat(rat_abs(t0 - s.loc.t) + rat_abs(s.loc.x1) + 1));
        bool ray_ok = true;
        for (int k = 0; k < 3; ++k) {
            Point4 q(t0, R + k, 0, 0);
            for (int i : ab)
                if (!slr(q, *T.pts[i].loc))
                    ray_ok = false;
            if (ray_ok) {
                samples.push_back({"ray" + std::to_string(k), q, carrier_cell(q)});
                r.sample_notes.push_back("ray point " + q.to_string() +
                                         " is space-like to every witness point (checked exactly)");
            }
        }
        r.clauses.push_back(
            {"(1) card(S') >= omega", ray_ok,
             ray_ok ? "the ray (" + rat_to_string(t0) + ", " + rat_to_string(R) +
                          "+k, 0, 0), k in N, lies in the region: spatial escape keeps every "
                          "point space-like to the witnesses"
                    : "could not certify an infinite subset"});
    }

    // a probe below each witness point, when it stays inside the region
    for (int i : ab) {
        Point4 p(T.pts[i].loc->t - 1, T.pts[i].loc->x1, T.pts[i].loc->x2, T.pts[i].loc->x3);
        bool inside = true;
        for (int j : ab)
            if (minkowski_lt(*T.pts[j].loc, p))
                inside = false;
        if (inside)
            samples.push_back({"below:" + T.pts[i].id, p, carrier_cell(p)});
    }

    // clause (2): everything is presented as an event of the carrier history
    {
        bool ok = true;
        for (const auto& s : samples) {
            EventClass e = event_class(model, s.loc, h_s);
            if (!e.members.contains(h_s, T.family))
                ok = false;
        }
        r.clauses.push_back({"(2) finite subsets lie in a history", ok,
                             ok ? "every member is an event of h_" + scen +
                                      " (memberships checked on all samples)"
                                : "a sampled member escapes the carrier history"});
    }

    // clause (3): monotonicity of the derived product function
    {
        bool ok = true;
        std::string bad;
        for (std::size_t i = 0; i < samples.size() && ok; ++i)
            for (std::size_t j = 0; j < samples.size(); ++j) {
                if (i == j)
                    continue;
                if (!minkowski_lt(samples[i].loc, samples[j].loc))
                    continue;
                // need f'(later) subset of f'(earlier)
                ScenarioSet later = samples[j].cell;
                if (!later.subset_of(samples[i].cell, T.family)) {
                    ok = false;
                    bad = samples[i].id + " < " + samples[j].id;
                    break;
                }
            }
        r.clauses.push_back(
            {"(3) monotonicity along <", ok,
             ok ? "on the region the derived function follows the carrier history's outcomes, "
                  "nested along any causal pair (all sampled pairs checked)"
                : "violated at " + bad});
    }

    // clause (4): the joint outcome over the region is empty
    {
        ScenarioSet meet = ScenarioSet::all(T.family);
        for (int i : ab)
            meet.intersect(T.pts[i].cell());
        bool empty = meet.empty(T.family);
        r.clauses.push_back({"(4) joint outcome over S' empty", empty,
                             empty ? "the region contains A1 u A2, whose joint outcome is "
                                     "already empty"
                                   : "witness meet unexpectedly nonempty"});
    }
    return r;
}

Fin2InfResult construct_inffb_from_finfb_symbolic(const ScenarioFamily& family,
                                                  const SiteSet& sites, const ZeroOneRule& f,
                                                  const IndexSelection& a,
                                                  const IndexSelection& b) {
    auto symbolic = sites.pairwise_slr_symbolic();
    if (!symbolic.has_value() || !*symbolic)
        throw std::domain_error("site family is not certifiably pairwise space-like");
    IndexSelection both = intersect(a, a); // copy
    for (auto [lo, hi] : b.ranges)
        both.add_range(lo, hi);
    if (b.all_from)
        both.add_all_from(*b.all_from);
    both.normalize();
    ConstraintSet ma = rule_on_selection(f, a);
    ConstraintSet mb = rule_on_selection(f, b);
    ConstraintSet mu = rule_on_selection(f, both);
    if (!family.satisfiable(ma) || !family.satisfiable(mb) || family.satisfiable(mu))
        throw std::domain_error("the finitary witness fails its recheck");

    Fin2InfResult r;
    r.passthrough = true;
    r.region = "S' = A1 u A2 = sites " + both.to_string();
    r.clauses.push_back({"(1) card(S') >= omega", both.infinite(),
                         both.infinite() ? "the witness set itself is infinite"
                                         : "witness set is finite"});
    r.clauses.push_back({"(2) finite subsets lie in a history", true,
                         "choice-site events under a common scenario label share its history"});
    r.clauses.push_back({"(3) monotonicity along <", true,
                         "sites pairwise space-like: no comparable pairs, vacuous"});
    r.clauses.push_back({"(4) joint outcome over S' empty", true,
                         "rechecked against the family oracle"});
    return r;
}

std::string Fin2InfResult::render() const {
    std::ostringstream out;
    out << "check: fin2inf\n";
    out << "region: " << (passthrough ? "passthrough (the witness set itself)" : region) << "\n";
    for (const auto& n : sample_notes)
        out << "  " << n << "\n";
    for (const auto& c : clauses)
        out << "  clause " << c.label << ": " << (c.pass ? "holds" : "fails") << " -- " << c.note
            << "\n";
    out << "result: " << (all_pass() ? "infinitary case constructed" : "construction failed")
        << "\n";
    return out.str();
}

// -- locate_cone_boundary -------------------------------------------------------------

LocateResult locate_cone_boundary(const TransitionSet& T, const Point4& a_star) {
    LocateResult r;
    bool in_reduced = false;
    for (const auto& p : T.pts) {
        if (!p.loc)
            throw UnsupportedError("cone localization needs located points");
        if (*p.loc == a_star)
            in_reduced = true;
    }
    if (!in_reduced)
        throw std::domain_error("the scan base must lie in the reduced set");

    const int n = static_cast<int>(T.pts.size());
    std::vector<QuadVal> thr(n);
    for (int i = 0; i < n; ++i) {
        thr[i] = {T.pts[i].loc->t, spatial_dist_sq(*T.pts[i].loc, a_star)};
        r.thresholds.push_back("point " + T.pts[i].id + ": enters the past cone at time " +
                               quadval_str(thr[i]));
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int c = cmp(thr[a], thr[b]);
        return c != 0 ? c < 0 : a < b;
    });

    ScenarioSet meet = ScenarioSet::all(T.family);
    std::size_t k = 0;
    while (k < order.size()) {
        // absorb the whole group of equal thresholds
        std::size_t g = k;
        while (g < order.size() && cmp(thr[order[g]], thr[order[k]]) == 0)
            meet.intersect(T.pts[order[g++]].cell());
        if (meet.empty(T.family)) {
            const QuadVal& v = thr[order[k]];
            r.kind = LocateResult::Case::Cone;
            Rat root;
            if (rat_sqrt_exact(v.disc, root)) {
                r.apex_exact = true;
                r.apex = Point4(v.base + root, a_star.x1, a_star.x2, a_star.x3);
            } else {
                r.apex_time_base = v.base;
                r.apex_disc = v.disc;
            }
            return r;
        }
        k = g;
    }
    r.kind = LocateResult::Case::NoFb;
    return r;
}

LocateResult locate_cone_boundary_symbolic(const MbsModel& model, const ZeroOneRule& f,
                                           const Point4& a_star, std::vector<Rat> deltas) {
    if (!model.indexed())
        throw UnsupportedError("symbolic localization needs an indexed site family");
    const SiteSet& sites = model.sites;
    if (!sites.index_at(a_star))
        throw std::domain_error("the scan base must lie in the reduced set");
    LocateResult r;

    auto good_at = [&](const Rat& t) {
        Point4 x(t, a_star.x1, a_star.x2, a_star.x3);
        IndexSelection sel = sites.below(x, false);
        if (sel.undecided)
            throw UnsupportedError("good/bad undecidable at " + x.to_string());
        return model.family.satisfiable(rule_on_selection(f, sel));
    };

    // unbounded good segment?
    IndexSelection everything;
    if (sites.infinite())
        everything.add_all_from(0);
    else
        everything.add_range(0, sites.sample_count() - 1);
    if (model.family.satisfiable(rule_on_selection(f, everything))) {
        r.kind = LocateResult::Case::NoFb;
        return r;
    }
    if (!sites.infinite() || sites.tail != TailKind::Cone) {
        if (!sites.infinite()) {
            // finite reduced set: delegate to the threshold walk via a
            // one-off transition structure is unnecessary; the full meet
            // is empty, so walk thresholds directly
            throw UnsupportedError("finite structures use locate_cone_boundary");
        }
        throw UnsupportedError("symbolic localization implemented for cone site families");
    }

    // cone family: every point of the chain strictly past the apex time
    // dominates an infinite tail; at and below it, finitely many sites
    if (!good_at(Rat(0)))
        throw UnsupportedError("cone scan expected the apex time to be good under this family");
    r.kind = LocateResult::Case::OuterLining;
    r.apex_exact = true;
    r.apex = Point4(Rat(0), a_star.x1, a_star.x2, a_star.x3);
    r.thresholds.push_back("time 0 dominates " +
                           sites.below(r.apex, false).to_string() +
                           "; any later time dominates an infinite tail");

    std::vector<Rat> ladder{Rat(1), make_rat(1, 2), make_rat(1, 4)};
    for (auto& d : deltas)
        ladder.push_back(d);
    IndexSelection below_apex = sites.below(r.apex, false);
    long apex_max = -1;
    below_apex.for_each([&](long i) { apex_max = std::max(apex_max, i); });
    for (const Rat& d : ladder) {
        Point4 shifted(r.apex.t + d, r.apex.x1, r.apex.x2, r.apex.x3);
        IndexSelection in_lining = sites.below(shifted, false);
        // the lining holds what enters between the apex cone and its shift
        IndexSelection lining;
        lining.undecided = in_lining.undecided;
        in_lining.for_each([&](long i) {
            if (!below_apex.contains(i))
                lining.add(i);
        });
        if (in_lining.all_from) {
            long from = *in_lining.all_from;
            for (long i = from; i <= apex_max; ++i)
                if (!below_apex.contains(i))
                    lining.add(i);
            lining.add_all_from(std::max(from, apex_max + 1));
        }
        lining.normalize();
        bool empty = !model.family.satisfiable(rule_on_selection(f, lining));
        r.lining_trace.push_back("delta=" + rat_to_string(d) + ": lining sites " +
                                 lining.to_string() + " -> joint outcome " +
                                 (empty ? "empty (funny set in the lining)" : "possible"));
    }
    return r;
}

std::string LocateResult::render() const {
    std::ostringstream out;
    out << "check: locate\n";
    for (const auto& t : thresholds)
        out << "  " << t << "\n";
    switch (kind) {
    case Case::NoFb:
        out << "verdict: NO_FB (the joint outcome stays possible along the whole chain)\n";
        break;
    case Case::Cone:
        out << "verdict: CONE";
        if (apex_exact)
            out << " at x* = " << apex.to_string();
        else
            out << " at x* time " << rat_to_string(apex_time_base) << "+sqrt("
                << rat_to_string(apex_disc) << ") over the base point";
        out << "\n  funny business sits on the backward light cone of x*\n";
        break;
    case Case::OuterLining:
        out << "verdict: OUTER_LINING at x* = " << apex.to_string() << "\n";
        out << "  x* itself is good; every outer lining of its cone carries a funny set\n";
        break;
    }
    for (const auto& t : lining_trace)
        out << "  " << t << "\n";
    return out.str();
}

// -- cause_like_loci ---------------------------------------------------------------------

CauseLociResult cause_like_loci(const TransitionSet& structure, int x_index) {
    if (structure.family.kind != FamilyKind::Explicit)
        throw UnsupportedError("cause-like loci need an explicit scenario family");
    if (x_index < 0 || x_index >= static_cast<int>(structure.pts.size()))
        throw std::invalid_argument("point index out of range");
    CauseLociResult r;
    const auto& pts = structure.pts;
    const ScenarioSet& hx = pts[x_index].histories;

    for (int e = 0; e < static_cast<int>(pts.size()); ++e) {
        if (e == x_index)
            continue;
        if (!hx.subset_of(pts[e].histories, structure.family))
            continue; // dividing from everything through x needs H_(x) within H_(e)
        bool splits = false;
        for (const auto& cell : pts[e].cells)
            if (!cell.members.intersects(hx, structure.family))
                splits = true;
        if (splits)
            r.loci.push_back(e);
    }

    if (r.loci.empty())
        return r;

    // does C(x) + {x} give rise to finitary funny business, for any product
    // function? enumerate them all
    TransitionSet sub;
    sub.family = structure.family;
    sub.model = structure.model;
    std::vector<int> members = r.loci;
    members.push_back(x_index);
    for (int i : members)
        sub.pts.push_back(pts[i]);
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            Rel rel = structure.relation(members[i], members[j]);
            sub.rel_table[{static_cast<int>(i), static_cast<int>(j)}] = rel;
        }

    std::vector<std::size_t> counter(sub.pts.size(), 0);
    bool done = false;
    while (!done) {
        for (std::size_t i = 0; i < sub.pts.size(); ++i)
            sub.pts[i].chosen = static_cast<int>(counter[i]);
        FinfbResult fr = check_finfb(sub);
        if (fr.funny) {
            r.no_finfb = false;
            std::vector<std::string> f_desc;
            for (const auto& p : sub.pts)
                f_desc.push_back(p.id + ":=" + p.cells[p.chosen].label);
            std::string fs;
            for (const auto& d : f_desc)
                fs += (fs.empty() ? "" : " ") + d;
            r.finfb_note = "finitary witness under " + fs + ": A1={" +
                           [&] {
                               std::string s;
                               for (int i : fr.a1)
                                   s += (s.empty() ? "" : ",") + sub.pts[i].id;
                               return s;
                           }() +
                           "} A2={" +
                           [&] {
                               std::string s;
                               for (int i : fr.a2)
                                   s += (s.empty() ? "" : ",") + sub.pts[i].id;
                               return s;
                           }() +
                           "}";
            break;
        }
        // next product function
        done = true;
        for (std::size_t i = 0; i < counter.size(); ++i) {
            if (++counter[i] < sub.pts[i].cells.size()) {
                done = false;
                break;
            }
            counter[i] = 0;
        }
    }

    if (r.no_finfb) {
        for (int e : r.loci)
            if (structure.relation(e, x_index) != Rel::Lt) {
                r.all_strictly_below = false;
                r.notes.push_back("locus '" + pts[e].id + "' is not strictly below '" +
                                  pts[x_index].id + "'");
            }
    } else {
        r.all_strictly_below = false; // no assertion made
    }
    return r;
}

std::string CauseLociResult::render(const TransitionSet& T) const {
    std::ostringstream out;
    out << "check: cause-like-loci\n";
    if (loci.empty()) {
        out << "loci: (none)\n";
        return out.str();
    }
    out << "loci:";
    for (int i : loci)
        out << " " << T.pts[i].id;
    out << "\n";
    if (!no_finfb) {
        out << "finitary funny business over the loci: " << *finfb_note << "\n";
        out << "location assertion withheld\n";
    } else {
        out << "no finitary funny business over loci+point (all product functions scanned)\n";
        out << "every locus strictly below: " << (all_strictly_below ? "yes" : "NO") << "\n";
        for (const auto& n : notes)
            out << "  " << n << "\n";
    }
    return out.str();
}

} // namespace mbs
