#pragma once

#include "mbs/geometry.hpp"
#include "mbs/scenario.hpp"
#include "mbs/sites.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mbs {

// Convergent sequence of splitting points: limit + dir/n for n >= first.
// Declares the limit point explicitly so overlap queries can reason about
// the whole sequence, not just sampled elements.
struct LimitSequence {
    Point4 limit;
    Point4 dir;
    long first = 1;

    Point4 element(long n) const;
    std::string describe() const;
};

struct PairKey {
    int a = 0, b = 0; // label indices, a < b
    PairKey() = default;
    PairKey(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {}
    bool operator<(const PairKey& o) const { return a != o.a ? a < o.a : b < o.b; }
    bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};

// Named chain for compactness queries, addressable from model files and
// the CLI. Explicit elements, or a vertical arithmetic sequence
// z_i = base + i*step whose scenario labels follow a rule.
struct ChainDescriptor {
    std::string name;
    std::vector<std::pair<Point4, Scenario>> elems;

    bool symbolic = false;
    Point4 base, step;
    long count = 0; // sampled prefix length for reporting
    enum class Rule { FixedScenario, PrefixZeros } rule = Rule::FixedScenario;
    Scenario fixed; // Rule::FixedScenario
};

// Finite presentation of a Minkowskian branching structure: a scenario
// family plus splitting data. Explicit families carry a per-pair map of
// splitting points (with optional declared limit sequences); symbolic
// families carry indexed choice sites, where site n splits g from g'
// exactly when g(n) != g'(n).
struct MbsModel {
    std::string name;
    ScenarioFamily family;

    std::map<PairKey, std::vector<Point4>> splitting;
    std::map<PairKey, std::vector<LimitSequence>> limits;

    SiteSet sites;

    std::vector<ChainDescriptor> chains;
    std::map<std::pair<std::string, Point4>, std::string> annotations; // (scenario, point) -> payload

    bool indexed() const { return family.symbolic(); }
    bool two_dimensional() const;
    const ChainDescriptor* chain(const std::string& chain_name) const;

    Scenario scenario(const std::string& text) const { return family.scenario_from_string(text); }
};

struct Violation {
    enum class Kind { Symmetry, Nonempty, PairwiseSlr, Triangle, Geometry };
    Kind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> items;
    std::vector<std::string> notes; // sound-but-incomplete caveats
    bool clean() const { return items.empty(); }
    std::string render() const;
};

ValidationReport validate(const MbsModel& model);

// x in R_{a,b}: no splitting point of the pair lies strictly below x.
bool in_overlap(const MbsModel& model, const Point4& x, const Scenario& a, const Scenario& b);

// The point of the quotient world containing x_rep.
struct EventClass {
    const MbsModel* model = nullptr;
    Point4 location;
    Scenario rep;
    ScenarioSet members; // {eta : location in R_{rep,eta}}

    std::string to_string() const;
};

EventClass event_class(const MbsModel& model, const Point4& x, const Scenario& rep);

// Causal order on the quotient: locations ordered in Minkowski space and
// the classes glued at the earlier location.
bool event_leq(const EventClass& a, const EventClass& b);
bool event_lt(const EventClass& a, const EventClass& b);
// Space-like related events: incomparable but sharing a history.
bool event_slr(const EventClass& a, const EventClass& b);

std::vector<EventClass> generated_choice_points(const MbsModel& model, const Scenario& a,
                                                const Scenario& b);

enum class ChoiceVerdict { No, Yes, Undecided };
const char* to_string(ChoiceVerdict v);

// Is [x] maximal in h_a intersect h_b? Splitting points always are; off
// the splitting set, finite pairs never are, and declared accumulation
// points are decided by the two-sided criterion in 2D embeddings.
ChoiceVerdict classify_choice_point(const MbsModel& model, const Point4& x, const Scenario& a,
                                    const Scenario& b);

// Splitting points of the pair strictly below x, including tails of
// declared limit sequences and indexed sites; used by overlap decisions.
struct BelowSplitting {
    bool any = false;
    bool infinite = false;             // an infinite tail of splitting points qualifies
    bool undecided = false;            // a symbolic tail could not be classified
    std::vector<Point4> examples;      // a few explicit offenders, for reports
};
BelowSplitting splitting_below(const MbsModel& model, const Point4& x, const Scenario& a,
                               const Scenario& b, bool strict = true);

} // namespace mbs
