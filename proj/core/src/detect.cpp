#include "mbs/detect.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <thread>

namespace mbs {

namespace {

std::string ids_of(const TransitionSet& T, const std::vector<int>& idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i)
            out += ",";
        out += T.pts[idx[i]].id;
    }
    return out;
}

std::vector<int> mask_to_indices(unsigned mask) {
    std::vector<int> out;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1)
            out.push_back(i);
    return out;
}

} // namespace

// -- check_finfb -----------------------------------------------------------------

FinfbResult check_finfb(const TransitionSet& T, int jobs, bool prune) {
    const int n = static_cast<int>(T.pts.size());
    if (n > 16)
        throw UnsupportedError("finitary search supports at most 16 points");
    if (!T.product())
        throw std::invalid_argument("transition set is not a product function");
    for (const auto& p : T.pts)
        (void)p.cell(); // throws when no cell was chosen
    if (jobs < 1)
        jobs = 1;

    FinfbResult r;
    const unsigned full = n ? (1u << n) - 1 : 0;

    std::vector<ScenarioSet> meet(full + 1, ScenarioSet::all(T.family));
    std::vector<char> sat(full + 1, 1);
    for (unsigned m = 1; m <= full; ++m) {
        int low = std::countr_zero(m);
        meet[m] = meet[m & (m - 1)];
        meet[m].intersect(T.pts[low].cell());
        sat[m] = !meet[m].empty(T.family);
    }

    if (n == 0 || sat[full]) {
        r.full_meet_nonempty = true;
        if (n)
            r.full_witness = meet[full].witness(T.family);
        return r;
    }

    std::vector<unsigned> slr_adj(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && T.relation(i, j) == Rel::Slr)
                slr_adj[i] |= 1u << j;

    struct Candidate {
        unsigned u = 0, a1 = 0;
        bool found = false;
    };

    FinfbStats stats;
    for (int size = 2; size <= n && !r.funny; ++size) {
        std::vector<unsigned> unions;
        for (unsigned m = 0; m <= full; ++m)
            if (std::popcount(m) == size)
                unions.push_back(m);
        stats.unions_examined += static_cast<long>(unions.size());

        auto scan = [&](std::size_t begin, std::size_t stride, Candidate& best, long& pairs,
                        long& pruned) {
            for (std::size_t k = begin; k < unions.size(); k += stride) {
                unsigned u = unions[k];
                if (prune && sat[u]) {
                    ++pruned;
                    continue;
                }
                unsigned lowbit = u & (~u + 1);
                // ascending submasks of u that contain the lowest point
                std::vector<unsigned> subs;
                for (unsigned sub = u; sub; sub = (sub - 1) & u)
                    if ((sub & lowbit) && sub != u)
                        subs.push_back(sub);
                std::sort(subs.begin(), subs.end());
                for (unsigned a1 : subs) {
                    unsigned a2 = u ^ a1;
                    ++pairs;
                    bool cross_slr = true;
                    for (unsigned rest = a1; rest && cross_slr; rest &= rest - 1)
                        if ((a2 & ~slr_adj[std::countr_zero(rest)]) != 0)
                            cross_slr = false;
                    if (!cross_slr)
                        continue;
                    if (!sat[a1] || !sat[a2])
                        continue;
                    if (sat[u])
                        continue; // unpruned mode evaluates the union here
                    if (!best.found || u < best.u || (u == best.u && a1 < best.a1))
                        best = {u, a1, true};
                    break; // minimal a1 for this union found
                }
            }
        };

        std::vector<Candidate> results(jobs);
        std::vector<long> pair_counts(jobs, 0), prune_counts(jobs, 0);
        if (jobs == 1) {
            scan(0, 1, results[0], pair_counts[0], prune_counts[0]);
        } else {
            std::vector<std::thread> workers;
            for (int w = 0; w < jobs; ++w)
                workers.emplace_back(scan, w, jobs, std::ref(results[w]),
                                     std::ref(pair_counts[w]), std::ref(prune_counts[w]));
            for (auto& t : workers)
                t.join();
        }
        for (int w = 0; w < jobs; ++w) {
            stats.pairs_examined += pair_counts[w];
            stats.pruned_unions += prune_counts[w];
        }
        Candidate best;
        for (const auto& c : results)
            if (c.found && (!best.found || c.u < best.u || (c.u == best.u && c.a1 < best.a1)))
                best = c;
        if (best.found) {
            r.funny = true;
            r.a1 = mask_to_indices(best.a1);
            r.a2 = mask_to_indices(best.u ^ best.a1);
            r.meet_a1 = meet[best.a1];
            r.meet_a2 = meet[best.u ^ best.a1];
            r.meet_union = meet[best.u];
            r.h_a = r.meet_a1.witness(T.family);
            r.h_b = r.meet_a2.witness(T.family);
        }
    }
    r.stats = stats;
    return r;
}

bool reverify_finfb(const TransitionSet& T, const FinfbResult& r) {
    auto meet_of = [&](const std::vector<int>& idx) {
        ScenarioSet m = ScenarioSet::all(T.family);
        for (int i : idx)
            m.intersect(T.pts[i].cell());
        return m;
    };
    if (!r.funny) {
        if (r.full_witness) {
            for (const auto& p : T.pts)
                if (!p.cell().contains(*r.full_witness, T.family))
                    return false;
            return true;
        }
        return !check_finfb(T, 1, false).funny;
    }
    if (r.a1.empty() || r.a2.empty())
        return false;
    for (int i : r.a1)
        for (int j : r.a2)
            if (T.relation(i, j) != Rel::Slr)
                return false;
    ScenarioSet m1 = meet_of(r.a1), m2 = meet_of(r.a2);
    std::vector<int> both = r.a1;
    both.insert(both.end(), r.a2.begin(), r.a2.end());
    ScenarioSet mu = meet_of(both);
    return !m1.empty(T.family) && !m2.empty(T.family) && mu.empty(T.family);
}

std::string FinfbResult::render(const TransitionSet& T) const {
    std::ostringstream out;
    out << "check: finfb\n";
    out << "structure: " << (T.name.empty() ? "(anonymous)" : T.name) << "\n";
    for (const auto& p : T.pts) {
        out << "  point " << p.id;
        if (p.loc)
            out << " at " << p.loc->to_string();
        out << " f=" << (p.chosen >= 0 ? p.cells[p.chosen].label : "(unset)") << "\n";
    }
    if (!funny) {
        out << "verdict: NONE\n";
        if (full_witness)
            out << "  joint outcome over the whole set is possible; witness history "
                << T.family.scenario_to_string(*full_witness) << "\n";
        else
            out << "  exhaustive search found no space-like pair with empty joint outcome\n";
    } else {
        out << "verdict: FINFB\n";
        out << "witness:\n";
        out << "  A1: " << ids_of(T, a1) << "\n";
        out << "  A2: " << ids_of(T, a2) << "\n";
        out << "  A1 slr A2: yes (all cross pairs space-like)\n";
        out << "  meet over A1: " << meet_a1.to_string(T.family) << " nonempty";
        if (h_a)
            out << ", e.g. " << T.family.scenario_to_string(*h_a);
        out << "\n";
        out << "  meet over A2: " << meet_a2.to_string(T.family) << " nonempty";
        if (h_b)
            out << ", e.g. " << T.family.scenario_to_string(*h_b);
        out << "\n";
        out << "  meet over A1+A2: empty\n";
    }
    out << "search: order=(size,union,first-part) unions=" << stats.unions_examined
        << " pairs=" << stats.pairs_examined << " pruned=" << stats.pruned_unions << "\n";
    return out.str();
}

std::optional<BelnapWitness> belnap_witness(const TransitionSet& T) {
    FinfbResult r = check_finfb(T);
    if (!r.funny)
        return std::nullopt;
    BelnapWitness w;
    w.a = r.a1;
    w.b = r.a2;
    if (!r.h_a || !r.h_b)
        throw std::logic_error("finfb witness without inhabited sides");
    w.h_a = *r.h_a;
    w.h_b = *r.h_b;
    return w;
}

// -- check_inffb ------------------------------------------------------------------

InffbResult check_inffb(const ScenarioFamily& family, const SiteSet& sites, const ZeroOneRule& f,
                        long spot_check) {
    InffbResult r;
    r.rule_text = f.to_string();

    {
        ClauseCheck c{"(1) card(S) >= omega", sites.infinite(),
                      sites.infinite() ? "site family has a symbolic tail"
                                       : "only " + std::to_string(sites.sample_count()) +
                                             " sites presented"};
        r.clauses.push_back(c);
    }

    // finite constraint subsets
    {
        ClauseCheck c{"(2) finite subsets satisfiable", false, ""};
        switch (family.kind) {
        case FamilyKind::AllStrings:
            c.pass = true;
            c.note = "finite family realizes any consistent finite assignment";
            break;
        case FamilyKind::FinitelyManyZeros:
        case FamilyKind::FreeBinary:
            c.pass = true;
            c.note = "family closure: every finite constraint set is satisfiable";
            break;
        case FamilyKind::AtMostKZeros: {
            long zero_exceptions = 0;
            for (const auto& [i, b] : f.exceptions)
                if (b == 0)
                    ++zero_exceptions;
            if (f.default_bit == 0) {
                c.pass = false;
                c.note = "rule demands " + std::to_string(family.n + 1) +
                         " zeros on some finite subset (budget " + std::to_string(family.n) +
                         "): fails at size " + std::to_string(family.n + 1);
            } else if (zero_exceptions > family.n) {
                c.pass = false;
                c.note = "rule's zero exceptions already exceed the budget";
            } else {
                c.pass = true;
                c.note = "at most " + std::to_string(zero_exceptions) + " zeros demanded anywhere";
            }
            break;
        }
        case FamilyKind::Explicit:
            throw UnsupportedError("infinitary check needs a symbolic family");
        }
        // spot checks on growing prefixes
        long cap = sites.infinite() ? spot_check : std::min(spot_check, sites.sample_count());
        if (family.kind == FamilyKind::AllStrings)
            cap = std::min(cap, family.n);
        bool spots_ok = true;
        for (long m = 1; m <= cap; ++m) {
            ConstraintSet cs;
            for (long i = 0; i < m; ++i)
                cs.require(i, f.bit(i));
            if (family.satisfiable(cs) != c.pass)
                spots_ok = false;
        }
        if (!spots_ok && c.pass) {
            c.pass = false;
            c.note += "; spot check found an unsatisfiable prefix";
        }
        if (c.pass)
            c.note += " (prefixes spot-checked to size " + std::to_string(cap) + ")";
        r.clauses.push_back(c);
    }

    // monotonicity holds vacuously on pairwise space-like sites
    {
        auto symbolic = sites.pairwise_slr_symbolic();
        if (!symbolic.has_value())
            throw UnsupportedError("cannot certify pairwise space-like relatedness of the sites");
        if (!*symbolic)
            throw std::domain_error("site family is not pairwise space-like");
        r.clauses.push_back({"(3) monotonicity along <", true,
                             "sites pairwise space-like: no comparable pairs, vacuous"});
    }

    // full constraint map
    {
        ClauseCheck c{"(4) joint outcome over all of S empty", false, ""};
        ConstraintSet cs;
        if (family.kind == FamilyKind::AllStrings || !sites.infinite()) {
            long count = family.kind == FamilyKind::AllStrings
                             ? std::min<long>(family.n, sites.infinite() ? family.n
                                                                         : sites.sample_count())
                             : sites.sample_count();
            for (long i = 0; i < count; ++i)
                cs.require(i, f.bit(i));
        } else {
            std::set<long> except;
            for (const auto& [i, b] : f.exceptions)
                if (b != f.default_bit)
                    except.insert(i);
            cs.require_tail(0, f.default_bit, except);
            for (const auto& [i, b] : f.exceptions)
                cs.require(i, b);
        }
        if (family.satisfiable(cs)) {
            c.pass = false;
            r.witness = family.witness(cs);
            c.note = "satisfiable; witness " + family.scenario_to_string(*r.witness);
        } else {
            c.pass = true;
            switch (family.kind) {
            case FamilyKind::FinitelyManyZeros:
                c.note = "the family admits only finitely many zeros; the rule demands "
                         "infinitely many";
                break;
            case FamilyKind::AtMostKZeros:
                c.note = "zero budget exceeded on the whole family";
                break;
            default:
                c.note = "no scenario satisfies the accumulated constraints";
            }
        }
        r.clauses.push_back(c);
    }

    r.funny = true;
    for (const auto& c : r.clauses)
        if (!c.pass)
            r.funny = false;

    if (r.funny) {
        // reported, not decided: whether the reduced set is bounded on the
        // time coordinate
        switch (sites.tail) {
        case TailKind::None:
            r.time_bounded_note = "yes (finite)";
            break;
        case TailKind::Affine:
            r.time_bounded_note = sites.step.t == 0 ? "yes (sites share a time slice)"
                                                    : "no (times drift without bound)";
            break;
        case TailKind::InvSeq:
            r.time_bounded_note = "yes (times converge with the sequence)";
            break;
        case TailKind::Cone:
            r.time_bounded_note = "no (sites escape to the past)";
            break;
        }
    }
    return r;
}

std::string InffbResult::render(const ScenarioFamily& family) const {
    std::ostringstream out;
    out << "check: inffb\n";
    out << "family: " << family.describe() << "\n";
    out << "rule: f = " << rule_text << "\n";
    for (const auto& c : clauses)
        out << "  clause " << c.label << ": " << (c.pass ? "holds" : "fails") << " -- " << c.note
            << "\n";
    if (!time_bounded_note.empty())
        out << "  reduced set time-bounded: " << time_bounded_note << "\n";
    out << "verdict: " << (funny ? "INFFB" : "NONE") << "\n";
    return out.str();
}

// -- check_cfb ---------------------------------------------------------------------

CfbResult check_cfb(const TransitionSet& T) {
    CfbResult r;
    const int n = static_cast<int>(T.pts.size());

    {
        ClauseCheck c{"(1) one outcome per point", true, ""};
        for (int i = 0; i < n && c.pass; ++i)
            for (int j = i + 1; j < n; ++j)
                if (T.pts[i].id == T.pts[j].id &&
                    !(T.pts[i].cell() == T.pts[j].cell())) {
                    c.pass = false;
                    c.note = "point '" + T.pts[i].id + "' carries two different outcomes";
                    break;
                }
        r.conditions.push_back(c);
    }
    {
        ClauseCheck c2{"(2) e_i < e_j implies H_(e_j) within chosen cell at e_i", true, ""};
        ClauseCheck c3{"(3) e_j < e_i implies H_(e_i) within chosen cell at e_j", true, ""};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                if (T.relation(i, j) == Rel::Lt &&
                    !T.pts[j].histories.subset_of(T.pts[i].cell(), T.family)) {
                    ClauseCheck& c = i < j ? c2 : c3;
                    if (c.pass) {
                        c.pass = false;
                        c.note = "histories through '" + T.pts[j].id +
                                 "' escape the outcome chosen at '" + T.pts[i].id + "'";
                    }
                }
            }
        r.conditions.push_back(c2);
        r.conditions.push_back(c3);
    }
    {
        ClauseCheck c{"(4) incomparable points are space-like related", true, ""};
        for (int i = 0; i < n && c.pass; ++i)
            for (int j = i + 1; j < n; ++j)
                if (T.relation(i, j) == Rel::Incomp) {
                    c.pass = false;
                    c.note = "'" + T.pts[i].id + "' and '" + T.pts[j].id +
                             "' share no history yet are incomparable";
                    break;
                }
        r.conditions.push_back(c);
    }

    r.combinatorially_consistent = true;
    for (const auto& c : r.conditions)
        if (!c.pass)
            r.combinatorially_consistent = false;

    ScenarioSet meet = ScenarioSet::all(T.family);
    for (const auto& p : T.pts)
        meet.intersect(p.cell());
    r.meet_empty = meet.empty(T.family);
    if (!r.meet_empty)
        r.witness = meet.witness(T.family);
    r.funny = r.combinatorially_consistent && r.meet_empty;
    return r;
}

CfbResult check_cfb_symbolic(const ScenarioFamily& family, const SiteSet& sites,
                             const ZeroOneRule& f) {
    CfbResult r;
    auto symbolic = sites.pairwise_slr_symbolic();
    if (!symbolic.has_value() || !*symbolic)
        throw std::domain_error("site family is not certifiably pairwise space-like");
    r.conditions.push_back({"(1) one outcome per point", true, "rule assigns one bit per site"});
    r.conditions.push_back(
        {"(2)+(3) order conditions", true, "no comparable site pairs (pairwise space-like)"});
    r.conditions.push_back({"(4) incomparable implies space-like", true,
                            "choice sites share every history passing below them"});
    r.combinatorially_consistent = true;

    InffbResult inf = check_inffb(family, sites, f);
    const ClauseCheck& whole = inf.clauses.back();
    r.meet_empty = whole.pass;
    if (!r.meet_empty)
        r.witness = inf.witness;
    r.funny = r.meet_empty;
    return r;
}

std::string CfbResult::render(const TransitionSet& T) const {
    std::ostringstream out;
    out << "check: cfb\n";
    for (const auto& c : conditions)
        out << "  condition " << c.label << ": " << (c.pass ? "holds" : "fails")
            << (c.note.empty() ? "" : " -- " + c.note) << "\n";
    out << "combinatorially consistent: " << (combinatorially_consistent ? "yes" : "no") << "\n";
    out << "joint outcome set: " << (meet_empty ? "empty" : "nonempty") << "\n";
    if (witness)
        out << "  witness history: " << T.family.scenario_to_string(*witness) << "\n";
    out << "verdict: " << (funny ? "CFB" : "NONE") << "\n";
    return out.str();
}

} // namespace mbs
