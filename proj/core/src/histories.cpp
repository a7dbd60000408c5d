#include "mbs/histories.hpp"

#include <sstream>

namespace mbs {

ScenarioSet scenario_set_at(const MbsModel& model, const Point4& x, const Scenario& rep) {
    return event_class(model, x, rep).members;
}

bool undivided(const MbsModel& model, const Scenario& a, const Scenario& b, const Point4& at) {
    if (!in_overlap(model, at, a, b))
        throw std::domain_error("undividedness is defined inside the overlap region only");
    if (a == b)
        return true;
    return classify_choice_point(model, at, a, b) == ChoiceVerdict::No;
}

std::optional<Point4> undivided_witness(const MbsModel& model, const Scenario& a,
                                        const Scenario& b, const Point4& at) {
    // candidate directions: straight up, and the four light-cone leaning
    // moves in the x1/x2 plane
    const int dirs[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    Rat eps(1);
    for (int halving = 0; halving < 64; ++halving) {
        for (const auto& d : dirs) {
            Point4 y(at.t + eps, at.x1 + eps * d[0], at.x2 + eps * d[1], at.x3);
            if (!minkowski_lt(at, y))
                continue;
            BelowSplitting below = splitting_below(model, y, a, b, true);
            if (!below.any && !below.undecided)
                return y;
        }
        eps /= 2;
    }
    return std::nullopt;
}

std::vector<Possibility> elementary_possibilities(const MbsModel& model, const EventClass& at) {
    std::vector<Possibility> out;
    if (!model.indexed()) {
        // partition the scenarios through the event by undividedness
        std::vector<int> through;
        for (int i = 0; i < static_cast<int>(model.family.explicit_count()); ++i) {
            Scenario s;
            s.label = i;
            if (at.members.contains(s, model.family))
                through.push_back(i);
        }
        std::vector<int> cell_of(model.family.explicit_count(), -1);
        for (int idx : through) {
            Scenario si;
            si.label = idx;
            bool placed = false;
            for (auto& cell : out) {
                Scenario first;
                first.label = __builtin_ctzll(cell.members.mask);
                if (undivided(model, first, si, at.location)) {
                    cell.members.mask |= 1ull << idx;
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                Possibility p;
                p.members = ScenarioSet::of_mask(1ull << idx);
                out.push_back(std::move(p));
            }
            (void)cell_of;
        }
        for (auto& cell : out)
            cell.label = cell.members.to_string(model.family);
        return out;
    }
    auto n = model.sites.index_at(at.location);
    if (!n)
        throw UnsupportedError(
            "elementary possibilities on symbolic families are supported at choice sites only");
    for (int bit = 0; bit <= 1; ++bit) {
        Possibility p;
        p.site = *n;
        p.bit = bit;
        ScenarioSet cell = at.members;
        ConstraintSet c;
        c.require(*n, bit);
        cell.intersect(ScenarioSet::of_constraints(c));
        p.members = std::move(cell);
        p.label = "site#" + std::to_string(*n) + "=" + std::to_string(bit);
        out.push_back(std::move(p));
    }
    return out;
}

ChainWitness chain_compactness_witness(const MbsModel& model, const ChainDescriptor& chain) {
    ChainWitness out;
    out.accumulated = ScenarioSet::all(model.family);
    auto absorb = [&](const Point4& x, const Scenario& rep, const std::string& tag) {
        EventClass e = event_class(model, x, rep);
        out.accumulated.intersect(e.members);
        out.trace.push_back(tag + " " + x.to_string() + "@" +
                            model.family.scenario_to_string(rep) + " -> members " +
                            e.members.to_string(model.family));
    };

    if (!chain.symbolic) {
        if (chain.elems.empty())
            throw std::domain_error("empty chain");
        for (const auto& [x, rep] : chain.elems)
            absorb(x, rep, "elem");
    } else {
        if (chain.step.t <= 0)
            throw UnsupportedError("symbolic chains must ascend in time (lower bounded)");
        long prefix = std::max<long>(chain.count, 3);
        for (long i = 0; i < prefix; ++i) {
            Point4 z(chain.base.t + Rat(i) * chain.step.t, chain.base.x1 + Rat(i) * chain.step.x1,
                     chain.base.x2 + Rat(i) * chain.step.x2,
                     chain.base.x3 + Rat(i) * chain.step.x3);
            Scenario rep;
            if (chain.rule == ChainDescriptor::Rule::FixedScenario) {
                rep = chain.fixed;
            } else {
                // prefix-zeros rule: element i is labeled by the sequence
                // with zeros exactly at the sites strictly below z_i
                IndexSelection below_sel = model.sites.below(z, true);
                if (below_sel.undecided || below_sel.infinite())
                    throw UnsupportedError("prefix-zeros chain needs finitely many sites below "
                                           "each element");
                below_sel.for_each([&](long k) { rep.zeros.insert(k); });
            }
            absorb(z, rep, "elem[" + std::to_string(i) + "]");
        }
        // the symbolic remainder: as i grows, every site eventually falls
        // strictly below some chain element
        if (chain.rule == ChainDescriptor::Rule::PrefixZeros) {
            if (model.sites.tail == TailKind::Affine || model.sites.tail == TailKind::None) {
                ConstraintSet rest;
                long covered = model.sites.infinite() ? -1 : model.sites.sample_count();
                if (covered >= 0) {
                    for (long k = 0; k < covered; ++k)
                        rest.require(k, 0);
                } else {
                    rest.require_tail(0, 0);
                }
                out.accumulated.intersect(ScenarioSet::of_constraints(rest));
                out.trace.push_back("tail: every site lies below some later chain element, "
                                    "forcing bit 0 at every index");
            } else {
                throw UnsupportedError("prefix-zeros chains are supported over explicit or "
                                       "affine site families");
            }
        } else {
            // fixed scenario: chain elements keep constraining toward rep's
            // own bits, which rep satisfies; the sampled prefix already
            // exhibits the limit behavior
            out.trace.push_back("tail: elements repeat the fixed scenario's constraints");
        }
    }

    out.has_witness = !out.accumulated.empty(model.family);
    if (out.has_witness)
        out.witness = out.accumulated.witness(model.family);
    return out;
}

std::string ChainWitness::certificate(const MbsModel& model) const {
    std::ostringstream s;
    for (const auto& t : trace)
        s << "  " << t << "\n";
    s << "  intersection: " << accumulated.to_string(model.family) << "\n";
    if (has_witness)
        s << "  witness scenario: " << model.family.scenario_to_string(*witness) << "\n";
    else
        s << "  empty intersection: no scenario satisfies the accumulated constraints\n";
    return s.str();
}

} // namespace mbs
