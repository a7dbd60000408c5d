#pragma once

#include "mbs/histories.hpp"
#include "mbs/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mbs {

// Causal relation between two presented points.
enum class Rel {
    Eq,
    Lt,     // first strictly below second
    Gt,
    Slr,    // incomparable, sharing a history
    Incomp, // incomparable, no shared history
};
const char* to_string(Rel r);

// Bit choice per site index: a default bit with finitely many exceptions.
struct ZeroOneRule {
    int default_bit = 0;
    std::map<long, int> exceptions;

    int bit(long index) const {
        auto it = exceptions.find(index);
        return it == exceptions.end() ? default_bit : it->second;
    }
    std::string to_string() const;
    static ZeroOneRule parse(const std::string& text); // "zeros" | "ones" | "zeros+1@{..}" | "ones+0@{..}"
};

// One presented point of a transition structure, with its histories, its
// outcome partition, and (optionally) the cell a product function picked.
struct TransitionPoint {
    std::string id;
    std::optional<Point4> loc;
    std::optional<Scenario> rep;  // representative scenario for located points
    std::optional<long> site;     // indexed choice site
    ScenarioSet histories;
    std::vector<Possibility> cells;
    int chosen = -1;

    const ScenarioSet& cell() const {
        if (chosen < 0 || chosen >= static_cast<int>(cells.size()))
            throw std::logic_error("transition point '" + id + "' has no chosen cell");
        return cells[chosen].members;
    }
};

// A finite transition structure: points plus relations. Backed by a model
// (relations derived from the quotient order) or free-standing with an
// explicit relation table.
struct TransitionSet {
    std::string name;
    const MbsModel* model = nullptr;
    ScenarioFamily family;
    std::vector<TransitionPoint> pts;
    std::map<std::pair<int, int>, Rel> rel_table; // abstract structures; i < j

    Rel relation(int i, int j) const;
    bool product() const; // no two transitions at one point with different cells
    int point_index(const std::string& id) const;

    // choose cells by outcome label, one per point, in order
    void choose(const std::vector<std::string>& labels);
};

} // namespace mbs
