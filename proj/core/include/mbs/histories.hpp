#pragma once

#include "mbs/model.hpp"

namespace mbs {

// Scenarios whose history contains [x_rep]; identical to the event's
// member class (histories correspond one-to-one with scenarios).
ScenarioSet scenario_set_at(const MbsModel& model, const Point4& x, const Scenario& rep);

// Are a and b undivided at the event [at]? True exactly when some point
// strictly above still lies in their overlap region.
bool undivided(const MbsModel& model, const Scenario& a, const Scenario& b, const Point4& at);

// Construct an explicit rational witness y >_M at with y in R_{a,b}, for
// certificates and tests. Succeeds whenever undivided() holds on the
// supported descriptors.
std::optional<Point4> undivided_witness(const MbsModel& model, const Scenario& a,
                                        const Scenario& b, const Point4& at);

// One immediate outcome of an event: a cell of the partition of the
// scenarios through it.
struct Possibility {
    ScenarioSet members;
    std::optional<long> site; // indexed families: the deciding site
    int bit = -1;             // indexed families: its value in this cell
    std::string label;        // display name: explicit cell list or "site#n=b"
};

std::vector<Possibility> elementary_possibilities(const MbsModel& model, const EventClass& at);

// Outcome of a compactness check along one lower-bounded chain: either a
// scenario whose history contains every chain element, or the constraint
// accumulation that no scenario satisfies.
struct ChainWitness {
    bool has_witness = false;
    std::optional<Scenario> witness;
    ScenarioSet accumulated;
    std::vector<std::string> trace; // per-element class notes
    std::string certificate(const MbsModel& model) const;
};

ChainWitness chain_compactness_witness(const MbsModel& model, const ChainDescriptor& chain);

} // namespace mbs
