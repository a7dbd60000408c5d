#include "mbs/model.hpp"

#include <algorithm>
#include <sstream>

namespace mbs {

namespace {

constexpr std::size_t kExampleCap = 8;

// Comparability of c with the elements limit + dir/n of a sequence,
// n >= first, dir purely spatial. Returns {n : element <=_M c} when
// `element_below` and {n : c <=_M element} otherwise.
IndexSelection sequence_comparable(const LimitSequence& seq, const Point4& c, bool element_below,
                                   bool strict) {
    // interval is symmetric; multiply through by n^2
    Rat X0 = c.t - seq.limit.t;
    Rat X1 = c.x1 - seq.limit.x1, X2 = c.x2 - seq.limit.x2, X3 = c.x3 - seq.limit.x3;
    Rat A = X1 * X1 + X2 * X2 + X3 * X3 - X0 * X0;
    Rat B = -2 * (X1 * seq.dir.x1 + X2 * seq.dir.x2 + X3 * seq.dir.x3) + 2 * X0 * seq.dir.t;
    Rat C = seq.dir.x1 * seq.dir.x1 + seq.dir.x2 * seq.dir.x2 + seq.dir.x3 * seq.dir.x3 -
            seq.dir.t * seq.dir.t;
    IndexSelection interval = solve_quadratic(A, B, C, seq.first, false);
    // time side: element.t = limit.t + dir.t/n; dir.t == 0 is enforced, so
    // the time condition does not depend on n.
    bool time_ok = element_below ? seq.limit.t <= c.t : c.t <= seq.limit.t;
    IndexSelection sel;
    if (time_ok)
        sel = interval;
    if (strict) {
        // exclude an exact coincidence element == c
        for (int probe = 0; probe < 1; ++probe) {
            if (X0 != 0)
                break;
            // c = limit + dir/n for integral n?
            const Rat* dv[3] = {&seq.dir.x1, &seq.dir.x2, &seq.dir.x3};
            const Rat* xv[3] = {&X1, &X2, &X3};
            for (int i = 0; i < 3; ++i)
                if (*dv[i] != 0) {
                    if (*xv[i] == 0)
                        break;
                    Rat ninv = *dv[i] / *xv[i];
                    if (ninv.get_den() == 1 && ninv >= seq.first) {
                        long n = ninv.get_num().get_si();
                        Point4 e = seq.element(n);
                        if (e == c && sel.contains(n)) {
                            IndexSelection cut;
                            cut.add_range(seq.first, n - 1);
                            cut.add_all_from(n + 1);
                            sel = intersect(sel, cut);
                        }
                    }
                    break;
                }
        }
    }
    return sel;
}

} // namespace

Point4 LimitSequence::element(long n) const {
    Rat inv = make_rat(1, n);
    return Point4(limit.t + inv * dir.t, limit.x1 + inv * dir.x1, limit.x2 + inv * dir.x2,
                  limit.x3 + inv * dir.x3);
}

std::string LimitSequence::describe() const {
    return "limit=" + limit.to_string() + " dir=" + dir.to_string() + " first=" +
           std::to_string(first);
}

bool MbsModel::two_dimensional() const {
    auto flat = [](const Point4& p) { return p.x2 == 0 && p.x3 == 0; };
    for (const auto& [key, pts] : splitting)
        for (const auto& p : pts)
            if (!flat(p))
                return false;
    for (const auto& [key, seqs] : limits)
        for (const auto& s : seqs)
            if (!flat(s.limit) || !flat(s.dir))
                return false;
    for (const auto& p : sites.sample)
        if (!flat(p))
            return false;
    if (sites.tail == TailKind::Affine && (!flat(sites.base) || !flat(sites.step)))
        return false;
    if (sites.tail == TailKind::InvSeq && (!flat(sites.limit) || !flat(sites.dir)))
        return false;
    return true;
}

const ChainDescriptor* MbsModel::chain(const std::string& chain_name) const {
    for (const auto& c : chains)
        if (c.name == chain_name)
            return &c;
    return nullptr;
}

// -- validation ---------------------------------------------------------------

ValidationReport validate(const MbsModel& model) {
    ValidationReport report;
    auto violation = [&](Violation::Kind kind, std::string detail) {
        report.items.push_back({kind, std::move(detail)});
    };

    if (!model.indexed()) {
        const auto& labels = model.family.labels;
        report.notes.push_back("symmetry: enforced structurally (unordered pair keys)");
        for (int i = 0; i < static_cast<int>(labels.size()); ++i)
            for (int j = i + 1; j < static_cast<int>(labels.size()); ++j) {
                PairKey key(i, j);
                auto split_it = model.splitting.find(key);
                auto limit_it = model.limits.find(key);
                bool has_points = split_it != model.splitting.end() && !split_it->second.empty();
                bool has_limits = limit_it != model.limits.end() && !limit_it->second.empty();
                if (!has_points && !has_limits)
                    violation(Violation::Kind::Nonempty,
                              "pair {" + labels[i] + "," + labels[j] + "} has no splitting points");
            }
        for (const auto& [key, seqs] : model.limits)
            for (const auto& seq : seqs) {
                if (seq.dir.t != 0 ||
                    (seq.dir.x1 == 0 && seq.dir.x2 == 0 && seq.dir.x3 == 0))
                    violation(Violation::Kind::Geometry,
                              "limit sequence " + seq.describe() +
                                  " must run along a purely spatial direction");
                if (seq.first < 1)
                    violation(Violation::Kind::Geometry,
                              "limit sequence " + seq.describe() + " needs first >= 1");
            }
        // pairwise SLR inside each pair's splitting set
        for (const auto& [key, pts] : model.splitting) {
            std::string pair_name =
                "{" + model.family.labels[key.a] + "," + model.family.labels[key.b] + "}";
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    if (!slr(pts[i], pts[j]))
                        violation(Violation::Kind::PairwiseSlr,
                                  "pair " + pair_name + ": " + pts[i].to_string() + " and " +
                                      pts[j].to_string() + " are causally comparable");
            auto limit_it = model.limits.find(key);
            if (limit_it == model.limits.end())
                continue;
            for (const auto& seq : limit_it->second) {
                if (seq.dir.t != 0)
                    continue; // already reported as a geometry violation
                for (const auto& c : pts) {
                    IndexSelection below = sequence_comparable(seq, c, true, false);
                    IndexSelection above = sequence_comparable(seq, c, false, false);
                    if (!below.empty() || !above.empty()) {
                        long n = 0;
                        IndexSelection bad = below.empty() ? above : below;
                        if (!bad.ranges.empty())
                            n = bad.ranges.front().first;
                        else
                            n = *bad.all_from;
                        violation(Violation::Kind::PairwiseSlr,
                                  "pair " + pair_name + ": sample " + c.to_string() +
                                      " is comparable with sequence element " +
                                      seq.element(n).to_string());
                    }
                }
                // elements of one purely spatial sequence share a time slice;
                // cross-sequence pairs at the same slice are space-like too
                for (const auto& other : limit_it->second)
                    if (&other != &seq && other.limit.t != seq.limit.t)
                        report.notes.push_back(
                            "pairwise SLR across sequences at different time slices checked on "
                            "first elements only");
            }
        }
        // triangle condition: every splitting point of {a,c} dominates one of
        // {a,b} or {b,c}
        int n_labels = static_cast<int>(labels.size());
        for (int a = 0; a < n_labels; ++a)
            for (int c = a + 1; c < n_labels; ++c) {
                PairKey ac(a, c);
                auto it = model.splitting.find(ac);
                if (it == model.splitting.end())
                    continue;
                for (int b = 0; b < n_labels; ++b) {
                    if (b == a || b == c)
                        continue;
                    for (const auto& x : it->second) {
                        bool found = false;
                        for (PairKey side : {PairKey(a, b), PairKey(b, c)}) {
                            auto sit = model.splitting.find(side);
                            if (sit != model.splitting.end())
                                for (const auto& y : sit->second)
                                    if (minkowski_leq(y, x)) {
                                        found = true;
                                        break;
                                    }
                            if (found)
                                break;
                            auto lit = model.limits.find(side);
                            if (lit != model.limits.end())
                                for (const auto& seq : lit->second) {
                                    if (minkowski_leq(seq.limit, x) ||
                                        !sequence_comparable(seq, x, true, false).empty()) {
                                        found = true;
                                        break;
                                    }
                                }
                            if (found)
                                break;
                        }
                        if (!found)
                            violation(Violation::Kind::Triangle,
                                      "splitting point " + x.to_string() + " of {" + labels[a] +
                                          "," + labels[c] + "} dominates no point of {" +
                                          labels[a] + "," + labels[b] + "} u {" + labels[b] +
                                          "," + labels[c] + "}");
                    }
                }
            }
        if (!model.limits.empty())
            report.notes.push_back(
                "triangle condition involving declared sequences checked on samples and limit "
                "points (sound, not complete)");
    } else {
        report.notes.push_back("nonemptiness: distinct sequences differ at some index, and that "
                               "site splits them (structural)");
        report.notes.push_back("triangle: a site splitting g from g' splits one of g,g' from any "
                               "third sequence at the same index (structural)");
        auto symbolic = model.sites.pairwise_slr_symbolic();
        if (symbolic.has_value() && !*symbolic) {
            violation(Violation::Kind::PairwiseSlr, "site sequence is not pairwise space-like: " +
                                                        model.sites.describe());
        } else {
            for (long i = 0; i < model.sites.sample_count(); ++i)
                for (long j = i + 1; j < model.sites.sample_count(); ++j)
                    if (!slr(model.sites.sample[i], model.sites.sample[j]))
                        violation(Violation::Kind::PairwiseSlr,
                                  "sites " + model.sites.sample[i].to_string() + " and " +
                                      model.sites.sample[j].to_string() + " are comparable");
        }
        if (model.sites.tail == TailKind::Cone)
            report.notes.push_back(
                "cone tail: pairwise SLR and minimum squared gap 2 hold for all indices by the "
                "declared direction invariants (sample checked exactly)");
    }
    return report;
}

std::string ValidationReport::render() const {
    std::ostringstream out;
    if (clean())
        out << "validation: clean\n";
    else
        out << "validation: " << items.size() << " violation(s)\n";
    for (const auto& v : items) {
        const char* kind = "";
        switch (v.kind) {
        case Violation::Kind::Symmetry: kind = "symmetry"; break;
        case Violation::Kind::Nonempty: kind = "nonempty"; break;
        case Violation::Kind::PairwiseSlr: kind = "pairwise-slr"; break;
        case Violation::Kind::Triangle: kind = "triangle"; break;
        case Violation::Kind::Geometry: kind = "geometry"; break;
        }
        out << "  violation[" << kind << "]: " << v.detail << "\n";
    }
    for (const auto& n : notes)
        out << "  note: " << n << "\n";
    return out.str();
}

// -- overlap and the quotient --------------------------------------------------

BelowSplitting splitting_below(const MbsModel& model, const Point4& x, const Scenario& a,
                               const Scenario& b, bool strict) {
    BelowSplitting out;
    if (a == b)
        return out;
    auto note = [&](const Point4& p) {
        out.any = true;
        if (out.examples.size() < kExampleCap)
            out.examples.push_back(p);
    };
    if (!model.indexed()) {
        PairKey key(a.label, b.label);
        auto it = model.splitting.find(key);
        if (it != model.splitting.end())
            for (const auto& c : it->second)
                if (strict ? minkowski_lt(c, x) : minkowski_leq(c, x))
                    note(c);
        auto lit = model.limits.find(key);
        if (lit != model.limits.end())
            for (const auto& seq : lit->second) {
                IndexSelection sel = sequence_comparable(seq, x, true, strict);
                if (sel.undecided)
                    out.undecided = true;
                if (sel.infinite())
                    out.infinite = true;
                if (!sel.empty()) {
                    out.any = true;
                    long shown = 0;
                    sel.for_each([&](long n) {
                        if (shown++ < 2)
                            note(seq.element(n));
                    });
                    if (sel.infinite() && out.examples.size() < kExampleCap)
                        note(seq.element(sel.all_from ? *sel.all_from : seq.first));
                }
            }
        return out;
    }
    IndexSelection sel = model.sites.below(x, strict);
    if (sel.undecided)
        out.undecided = true;
    sel.for_each([&](long n) {
        if (a.bit(n) != b.bit(n)) {
            out.any = true;
            if (out.examples.size() < kExampleCap && n < model.sites.sample_count())
                out.examples.push_back(model.sites.site(n));
        }
    });
    if (sel.all_from) {
        TailDifference diff = scenario_tail_difference(a, b, *sel.all_from);
        if (diff.infinite) {
            out.any = true;
            out.infinite = true;
        } else {
            for (long n : diff.finite) {
                out.any = true;
                if (out.examples.size() < kExampleCap && n < model.sites.sample_count())
                    out.examples.push_back(model.sites.site(n));
            }
        }
    }
    return out;
}

bool in_overlap(const MbsModel& model, const Point4& x, const Scenario& a, const Scenario& b) {
    BelowSplitting below = splitting_below(model, x, a, b, true);
    if (below.any)
        return false;
    if (below.undecided)
        throw UnsupportedError("overlap undecided: symbolic site tail not classifiable at " +
                               x.to_string());
    return true;
}

EventClass event_class(const MbsModel& model, const Point4& x, const Scenario& rep) {
    EventClass e;
    e.model = &model;
    e.location = x;
    e.rep = rep;
    if (!model.indexed()) {
        if (rep.label < 0 || rep.label >= static_cast<int>(model.family.explicit_count()))
            throw std::invalid_argument("unknown scenario index");
        std::uint64_t mask = 0;
        for (int eta = 0; eta < static_cast<int>(model.family.explicit_count()); ++eta) {
            Scenario s;
            s.label = eta;
            if (in_overlap(model, x, rep, s))
                mask |= 1ull << eta;
        }
        e.members = ScenarioSet::of_mask(mask);
        return e;
    }
    IndexSelection sel = model.sites.below(x, true);
    if (sel.undecided)
        throw UnsupportedError("event class undecided at " + x.to_string());
    ConstraintSet cs;
    sel.for_each([&](long n) { cs.require(n, rep.bit(n)); });
    if (sel.all_from) {
        long from = *sel.all_from;
        if (rep.zeros_from) {
            long zf = *rep.zeros_from;
            for (long i = from; i < zf; ++i)
                cs.require(i, rep.bit(i));
            std::set<long> except;
            for (long o : rep.one_exceptions)
                if (o >= std::max(from, zf)) {
                    except.insert(o);
                    cs.require(o, 1);
                }
            cs.require_tail(std::max(from, zf), 0, except);
        } else {
            std::set<long> except;
            for (long z : rep.zeros)
                if (z >= from) {
                    except.insert(z);
                    cs.require(z, 0);
                }
            cs.require_tail(from, 1, except);
        }
    }
    e.members = ScenarioSet::of_constraints(std::move(cs));
    return e;
}

std::string EventClass::to_string() const {
    return location.to_string() + "@" + model->family.scenario_to_string(rep);
}

bool event_leq(const EventClass& a, const EventClass& b) {
    if (a.model != b.model)
        throw std::domain_error("comparing event classes from different models");
    return minkowski_leq(a.location, b.location) && a.members.contains(b.rep, a.model->family);
}

bool event_lt(const EventClass& a, const EventClass& b) {
    return event_leq(a, b) && !(a.location == b.location && event_leq(b, a));
}

bool event_slr(const EventClass& a, const EventClass& b) {
    if (a.model != b.model)
        throw std::domain_error("comparing event classes from different models");
    return !event_leq(a, b) && !event_leq(b, a) &&
           a.members.intersects(b.members, a.model->family);
}

std::vector<EventClass> generated_choice_points(const MbsModel& model, const Scenario& a,
                                                const Scenario& b) {
    if (a == b)
        throw std::domain_error("generated choice points need two distinct scenarios");
    std::vector<EventClass> out;
    if (!model.indexed()) {
        PairKey key(a.label, b.label);
        auto it = model.splitting.find(key);
        if (it != model.splitting.end())
            for (const auto& c : it->second)
                out.push_back(event_class(model, c, a));
        return out;
    }
    TailDifference diff = scenario_tail_difference(a, b, 0);
    if (diff.infinite)
        throw UnsupportedError("the scenarios differ at infinitely many sites");
    for (long n : diff.finite) {
        if (n >= model.sites.sample_count() && model.sites.tail == TailKind::Cone)
            throw UnsupportedError("differing site beyond the instantiated cone sample");
        out.push_back(event_class(model, model.sites.site(n), a));
    }
    return out;
}

const char* to_string(ChoiceVerdict v) {
    switch (v) {
    case ChoiceVerdict::No: return "no";
    case ChoiceVerdict::Yes: return "yes";
    case ChoiceVerdict::Undecided: return "undecided";
    }
    return "?";
}

ChoiceVerdict classify_choice_point(const MbsModel& model, const Point4& x, const Scenario& a,
                                    const Scenario& b) {
    if (a == b)
        throw std::domain_error("choice points need two distinct scenarios");
    if (!in_overlap(model, x, a, b))
        throw std::domain_error("point " + x.to_string() + " lies outside the overlap region");

    if (!model.indexed()) {
        PairKey key(a.label, b.label);
        auto it = model.splitting.find(key);
        if (it != model.splitting.end())
            for (const auto& c : it->second)
                if (c == x)
                    return ChoiceVerdict::Yes;
        auto lit = model.limits.find(key);
        if (lit == model.limits.end() || lit->second.empty())
            return ChoiceVerdict::No;
        // x may itself be an element of a declared sequence
        for (const auto& seq : lit->second) {
            if (seq.limit.t == x.t) {
                const Rat* dv[3] = {&seq.dir.x1, &seq.dir.x2, &seq.dir.x3};
                Rat diff[3] = {x.x1 - seq.limit.x1, x.x2 - seq.limit.x2, x.x3 - seq.limit.x3};
                for (int i = 0; i < 3; ++i)
                    if (*dv[i] != 0 && diff[i] != 0) {
                        Rat ninv = *dv[i] / diff[i];
                        if (ninv.get_den() == 1 && ninv >= seq.first &&
                            seq.element(ninv.get_num().get_si()) == x)
                            return ChoiceVerdict::Yes;
                        break;
                    }
            }
        }
        if (!model.two_dimensional())
            return ChoiceVerdict::Undecided;
        // two-sided accumulation criterion: every causal successor of x is
        // above a tail element exactly when sequences close in from both
        // spatial sides
        bool from_left = false, from_right = false;
        for (const auto& seq : lit->second)
            if (seq.limit == x) {
                if (seq.dir.x1 > 0)
                    from_right = true;
                if (seq.dir.x1 < 0)
                    from_left = true;
            }
        return (from_left && from_right) ? ChoiceVerdict::Yes : ChoiceVerdict::No;
    }

    if (auto n = model.sites.index_at(x)) {
        if (a.bit(*n) != b.bit(*n))
            return ChoiceVerdict::Yes;
    }
    if (model.sites.tail == TailKind::InvSeq && x == model.sites.limit) {
        // single one-sided sequence: successors leaning away escape it
        return model.two_dimensional() ? ChoiceVerdict::No : ChoiceVerdict::Undecided;
    }
    return ChoiceVerdict::No;
}

} // namespace mbs
