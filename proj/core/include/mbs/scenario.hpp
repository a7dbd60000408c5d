#pragma once

#include "mbs/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mbs {

// Scenario families. Explicit families enumerate their labels; symbolic
// families are sets of binary sequences over the model's choice-site
// indices, picked out by a closure property instead of a list.
enum class FamilyKind {
    Explicit,          // finite list of named scenarios
    AllStrings,        // all binary strings over indices [0, n)
    FinitelyManyZeros, // omega-sequences with finitely many zeros
    AtMostKZeros,      // omega-sequences with at most k zeros
    FreeBinary,        // all omega-sequences
};

// One scenario. For explicit families this is an index into the label
// list. For symbolic families it is a binary sequence presented as a
// finite zero set, optionally followed by an all-zero tail with finite
// one-valued exceptions.
struct Scenario {
    int label = -1; // explicit families

    std::set<long> zeros;                 // indices valued 0
    std::optional<long> zeros_from;       // every index >= this is 0 ...
    std::set<long> one_exceptions;        // ... except these

    int bit(long index) const;
    bool operator==(const Scenario& o) const;
    bool operator<(const Scenario& o) const;
};

// Conjunction of per-index bit requirements, with an optional uniform
// tail. Every listed requirement is binding; the tail binds indices past
// `from` that are not in its exception set. "1 everywhere past 3 except
// g(5)=0" is {fixed:{5:0}, tail:(3,1), tail_exceptions:{5}}.
struct ConstraintSet {
    std::map<long, int> fixed;
    std::optional<std::pair<long, int>> tail; // (from, bit)
    std::set<long> tail_exceptions;
    bool contradictory = false;

    void require(long index, int bit);
    void require_tail(long from, int bit, std::set<long> except = {});
    void merge(const ConstraintSet& other);

    bool constrains(long index) const;
    std::optional<int> value_at(long index) const;
    long zero_count_or_negative() const; // -1 when a zero tail makes it infinite

    std::string to_string() const;
    bool operator==(const ConstraintSet& o) const;
};

struct ScenarioFamily {
    FamilyKind kind = FamilyKind::Explicit;
    std::vector<std::string> labels; // Explicit
    long n = 0;                      // AllStrings: index domain; AtMostKZeros: k

    std::size_t explicit_count() const { return labels.size(); }
    bool symbolic() const { return kind != FamilyKind::Explicit; }
    bool finite() const;

    int label_index(const std::string& name) const; // -1 when absent

    // Constraint oracle. Monotone: growing a constraint set can only
    // shrink the satisfying set.
    bool satisfiable(const ConstraintSet& cs) const;
    // Canonical satisfying scenario (least zeros, then least indices).
    std::optional<Scenario> witness(const ConstraintSet& cs) const;
    bool contains(const Scenario& s, const ConstraintSet& cs) const;

    Scenario scenario_from_string(const std::string& text) const;
    std::string scenario_to_string(const Scenario& s) const;

    std::string describe() const;
};

// A set of scenarios: a bitmask for explicit families (at most 64
// labels), a ConstraintSet for symbolic ones.
struct ScenarioSet {
    bool is_mask = true;
    std::uint64_t mask = 0;
    ConstraintSet cs;

    static ScenarioSet all(const ScenarioFamily& family);
    static ScenarioSet of_mask(std::uint64_t m);
    static ScenarioSet of_constraints(ConstraintSet c);

    void intersect(const ScenarioSet& other);
    bool empty(const ScenarioFamily& family) const;
    bool contains(const Scenario& s, const ScenarioFamily& family) const;
    std::optional<Scenario> witness(const ScenarioFamily& family) const;
    // Exact subset test for the shapes that arise here (masks, and
    // constraint sets where `other` must be entailed by *this).
    bool subset_of(const ScenarioSet& other, const ScenarioFamily& family) const;
    bool intersects(const ScenarioSet& other, const ScenarioFamily& family) const;

    std::string to_string(const ScenarioFamily& family) const;
    bool operator==(const ScenarioSet& o) const;
};

ScenarioFamily explicit_family(std::vector<std::string> labels);
ScenarioFamily symbolic_family(FamilyKind kind, long n = 0);

// Indices >= from at which two symbolic scenarios take different bits.
struct TailDifference {
    bool infinite = false;
    std::vector<long> finite; // sorted; meaningful only when !infinite
    bool any() const { return infinite || !finite.empty(); }
};
TailDifference scenario_tail_difference(const Scenario& a, const Scenario& b, long from);

} // namespace mbs
