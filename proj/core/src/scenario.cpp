#include "mbs/scenario.hpp"

#include <algorithm>
#include <sstream>

namespace mbs {

namespace {

constexpr long kRangeGuard = 1000000; // widest explicit index range we will enumerate

bool tail_covers(const std::optional<std::pair<long, int>>& tail, const std::set<long>& except,
                 long index) {
    return tail && index >= tail->first && !except.count(index);
}

} // namespace

// -- Scenario ---------------------------------------------------------------

int Scenario::bit(long index) const {
    if (zeros.count(index))
        return 0;
    if (zeros_from && index >= *zeros_from && !one_exceptions.count(index))
        return 0;
    return 1;
}

bool Scenario::operator==(const Scenario& o) const {
    return label == o.label && zeros == o.zeros && zeros_from == o.zeros_from &&
           one_exceptions == o.one_exceptions;
}

bool Scenario::operator<(const Scenario& o) const {
    if (label != o.label) return label < o.label;
    if (zeros != o.zeros) return zeros < o.zeros;
    long a = zeros_from ? *zeros_from : -1;
    long b = o.zeros_from ? *o.zeros_from : -1;
    if (a != b) return a < b;
    return one_exceptions < o.one_exceptions;
}

// -- ConstraintSet ----------------------------------------------------------

void ConstraintSet::require(long index, int bit) {
    if (contradictory)
        return;
    if (tail && index >= tail->first && !tail_exceptions.count(index) && tail->second != bit) {
        contradictory = true;
        return;
    }
    auto [it, inserted] = fixed.emplace(index, bit);
    if (!inserted && it->second != bit)
        contradictory = true;
}

void ConstraintSet::require_tail(long from, int bit, std::set<long> except) {
    if (contradictory)
        return;
    // existing point constraints must not clash with the new tail
    for (const auto& [i, b] : fixed)
        if (i >= from && !except.count(i) && b != bit) {
            contradictory = true;
            return;
        }
    if (!tail) {
        tail = {from, bit};
        tail_exceptions = std::move(except);
        return;
    }
    if (tail->second != bit) {
        // both tails bind an infinite common region; exceptions are finite
        contradictory = true;
        return;
    }
    long lo = std::min(tail->first, from);
    long hi = std::max(tail->first, from);
    if (hi - lo > kRangeGuard)
        throw UnsupportedError("tail starts too far apart to merge");
    std::set<long> merged;
    auto exempt_old = [&](long i) { return i < tail->first || tail_exceptions.count(i); };
    auto exempt_new = [&](long i) { return i < from || except.count(i); };
    std::set<long> candidates = tail_exceptions;
    candidates.insert(except.begin(), except.end());
    for (long i = lo; i < hi; ++i)
        candidates.insert(i);
    for (long i : candidates)
        if (i >= lo && exempt_old(i) && exempt_new(i))
            merged.insert(i);
    tail = {lo, bit};
    tail_exceptions = std::move(merged);
}

void ConstraintSet::merge(const ConstraintSet& other) {
    if (other.contradictory)
        contradictory = true;
    if (contradictory)
        return;
    if (other.tail)
        require_tail(other.tail->first, other.tail->second, other.tail_exceptions);
    for (const auto& [i, b] : other.fixed)
        require(i, b);
}

bool ConstraintSet::constrains(long index) const {
    return fixed.count(index) || tail_covers(tail, tail_exceptions, index);
}

std::optional<int> ConstraintSet::value_at(long index) const {
    auto it = fixed.find(index);
    if (it != fixed.end())
        return it->second;
    if (tail_covers(tail, tail_exceptions, index))
        return tail->second;
    return std::nullopt;
}

long ConstraintSet::zero_count_or_negative() const {
    if (tail && tail->second == 0)
        return -1;
    long count = 0;
    for (const auto& [i, b] : fixed)
        if (b == 0)
            ++count;
    return count;
}

std::string ConstraintSet::to_string() const {
    if (contradictory)
        return "(contradictory)";
    std::ostringstream out;
    bool first = true;
    for (const auto& [i, b] : fixed) {
        if (!first)
            out << " & ";
        out << "g(" << i << ")=" << b;
        first = false;
    }
    if (tail) {
        if (!first)
            out << " & ";
        out << "g(n)=" << tail->second << " for n>=" << tail->first;
        if (!tail_exceptions.empty()) {
            out << ", n not in {";
            bool f2 = true;
            for (long i : tail_exceptions) {
                if (!f2)
                    out << ",";
                out << i;
                f2 = false;
            }
            out << "}";
        }
        first = false;
    }
    if (first)
        out << "(no constraints)";
    return out.str();
}

bool ConstraintSet::operator==(const ConstraintSet& o) const {
    return contradictory == o.contradictory && fixed == o.fixed && tail == o.tail &&
           tail_exceptions == o.tail_exceptions;
}

// -- ScenarioFamily ---------------------------------------------------------

ScenarioFamily explicit_family(std::vector<std::string> labels) {
    if (labels.size() > 64)
        throw UnsupportedError("explicit families are limited to 64 scenarios");
    ScenarioFamily f;
    f.kind = FamilyKind::Explicit;
    f.labels = std::move(labels);
    return f;
}

ScenarioFamily symbolic_family(FamilyKind kind, long n) {
    if (kind == FamilyKind::Explicit)
        throw std::invalid_argument("use explicit_family for explicit families");
    ScenarioFamily f;
    f.kind = kind;
    f.n = n;
    if (kind == FamilyKind::AllStrings && (n < 1 || n > kRangeGuard))
        throw std::invalid_argument("all-strings(n) needs 1 <= n <= 10^6");
    if (kind == FamilyKind::AtMostKZeros && n < 0)
        throw std::invalid_argument("at-most-k-zeros(k) needs k >= 0");
    return f;
}

bool ScenarioFamily::finite() const {
    return kind == FamilyKind::Explicit || kind == FamilyKind::AllStrings;
}

int ScenarioFamily::label_index(const std::string& name) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == name)
            return static_cast<int>(i);
    return -1;
}

bool ScenarioFamily::satisfiable(const ConstraintSet& cs) const {
    if (cs.contradictory)
        return false;
    switch (kind) {
    case FamilyKind::Explicit:
        throw std::logic_error("constraint oracle queried on an explicit family");
    case FamilyKind::AllStrings:
        for (const auto& [i, b] : cs.fixed) {
            (void)b;
            if (i < 0 || i >= n)
                throw std::invalid_argument("constraint index outside all-strings domain");
        }
        return true;
    case FamilyKind::FinitelyManyZeros:
        return !(cs.tail && cs.tail->second == 0);
    case FamilyKind::AtMostKZeros: {
        long zeros = cs.zero_count_or_negative();
        return zeros >= 0 && zeros <= n;
    }
    case FamilyKind::FreeBinary:
        return true;
    }
    return false;
}

std::optional<Scenario> ScenarioFamily::witness(const ConstraintSet& cs) const {
    if (!satisfiable(cs))
        return std::nullopt;
    Scenario s;
    if (kind == FamilyKind::AllStrings) {
        for (long i = 0; i < n; ++i)
            if (cs.value_at(i) == 0)
                s.zeros.insert(i);
        return s;
    }
    for (const auto& [i, b] : cs.fixed)
        if (b == 0)
            s.zeros.insert(i);
    if (cs.tail && cs.tail->second == 0) {
        s.zeros_from = cs.tail->first;
        for (long i : cs.tail_exceptions)
            if (i >= cs.tail->first && cs.value_at(i) != 0)
                s.one_exceptions.insert(i);
    }
    return s;
}

bool ScenarioFamily::contains(const Scenario& s, const ConstraintSet& cs) const {
    if (cs.contradictory)
        return false;
    for (const auto& [i, b] : cs.fixed)
        if (s.bit(i) != b)
            return false;
    if (!cs.tail)
        return true;
    auto [from, bit] = *cs.tail;
    if (bit == 1) {
        // no zero of s may fall in the tail scope
        if (s.zeros_from)
            return false; // an all-zero tail has infinitely many zeros in scope
        for (long z : s.zeros)
            if (z >= from && !cs.tail_exceptions.count(z))
                return false;
        return true;
    }
    // bit == 0: every index >= from outside the exceptions must be zero
    if (!s.zeros_from)
        return false;
    long zf = *s.zeros_from;
    if (zf > from) {
        if (zf - from > kRangeGuard)
            throw UnsupportedError("tail comparison range too wide");
        for (long i = from; i < zf; ++i)
            if (!cs.tail_exceptions.count(i) && s.bit(i) != 0)
                return false;
    }
    for (long i : s.one_exceptions)
        if (i >= from && i >= zf && !cs.tail_exceptions.count(i) && s.bit(i) != 0)
            return false;
    return true;
}

Scenario ScenarioFamily::scenario_from_string(const std::string& text) const {
    if (kind == FamilyKind::Explicit) {
        int idx = label_index(text);
        if (idx < 0)
            throw std::invalid_argument("unknown scenario '" + text + "'");
        Scenario s;
        s.label = idx;
        return s;
    }
    if (text.size() < 3 || text.substr(0, 2) != "z{" || text.back() != '}')
        throw ParseError("symbolic scenario must look like z{...}: '" + text + "'");
    std::string body = text.substr(2, text.size() - 3);
    Scenario s;
    std::string finite_part = body, tail_part;
    auto semi = body.find(';');
    if (semi != std::string::npos) {
        finite_part = body.substr(0, semi);
        tail_part = body.substr(semi + 1);
    }
    auto parse_longs = [](const std::string& str, auto&& sink) {
        std::size_t start = 0;
        for (std::size_t i = 0; i <= str.size(); ++i) {
            if (i == str.size() || str[i] == ',') {
                std::string piece = str.substr(start, i - start);
                if (!piece.empty())
                    sink(std::stol(piece));
                start = i + 1;
            }
        }
    };
    parse_longs(finite_part, [&](long v) { s.zeros.insert(v); });
    if (!tail_part.empty()) {
        std::string from_part = tail_part, exc_part;
        auto bang = tail_part.find('!');
        if (bang != std::string::npos) {
            from_part = tail_part.substr(0, bang);
            exc_part = tail_part.substr(bang + 1);
        }
        auto dots = from_part.find("..");
        if (dots == std::string::npos)
            throw ParseError("symbolic tail must look like N..: '" + text + "'");
        s.zeros_from = std::stol(from_part.substr(0, dots));
        parse_longs(exc_part, [&](long v) { s.one_exceptions.insert(v); });
    }
    if (kind == FamilyKind::FinitelyManyZeros && s.zeros_from)
        throw std::invalid_argument("scenario has infinitely many zeros, family forbids it");
    if (kind == FamilyKind::AtMostKZeros &&
        (s.zeros_from || static_cast<long>(s.zeros.size()) > n))
        throw std::invalid_argument("scenario exceeds the zero budget of the family");
    if (kind == FamilyKind::AllStrings)
        for (long z : s.zeros)
            if (z < 0 || z >= n)
                throw std::invalid_argument("scenario index outside all-strings domain");
    return s;
}

std::string ScenarioFamily::scenario_to_string(const Scenario& s) const {
    if (kind == FamilyKind::Explicit) {
        if (s.label < 0 || s.label >= static_cast<int>(labels.size()))
            throw std::invalid_argument("scenario label out of range");
        return labels[s.label];
    }
    std::ostringstream out;
    out << "z{";
    bool first = true;
    for (long z : s.zeros) {
        if (!first)
            out << ",";
        out << z;
        first = false;
    }
    if (s.zeros_from) {
        out << ";" << *s.zeros_from << "..";
        if (!s.one_exceptions.empty()) {
            out << "!";
            bool f2 = true;
            for (long e : s.one_exceptions) {
                if (!f2)
                    out << ",";
                out << e;
                f2 = false;
            }
        }
    }
    out << "}";
    return out.str();
}

std::string ScenarioFamily::describe() const {
    switch (kind) {
    case FamilyKind::Explicit: {
        std::string s = "explicit";
        for (const auto& l : labels)
            s += " " + l;
        return s;
    }
    case FamilyKind::AllStrings:
        return "all-strings " + std::to_string(n);
    case FamilyKind::FinitelyManyZeros:
        return "finitely-many-zeros";
    case FamilyKind::AtMostKZeros:
        return "at-most-k-zeros " + std::to_string(n);
    case FamilyKind::FreeBinary:
        return "free-binary";
    }
    return "?";
}

TailDifference scenario_tail_difference(const Scenario& a, const Scenario& b, long from) {
    TailDifference out;
    int a_cofinal = a.zeros_from ? 0 : 1;
    int b_cofinal = b.zeros_from ? 0 : 1;
    out.infinite = a_cofinal != b_cofinal;
    std::set<long> candidates;
    auto collect = [&](const Scenario& s) {
        for (long z : s.zeros)
            if (z >= from)
                candidates.insert(z);
        for (long e : s.one_exceptions)
            if (e >= from)
                candidates.insert(e);
        if (s.zeros_from && *s.zeros_from >= from) {
            if (*s.zeros_from - from > 1000000)
                throw UnsupportedError("scenario tail comparison range too wide");
            for (long i = from; i < *s.zeros_from; ++i)
                candidates.insert(i);
            candidates.insert(*s.zeros_from);
        }
    };
    collect(a);
    collect(b);
    if (out.infinite)
        return out;
    for (long i : candidates)
        if (a.bit(i) != b.bit(i))
            out.finite.push_back(i);
    return out;
}

// -- ScenarioSet ------------------------------------------------------------

ScenarioSet ScenarioSet::all(const ScenarioFamily& family) {
    ScenarioSet s;
    if (family.kind == FamilyKind::Explicit) {
        s.is_mask = true;
        std::size_t count = family.explicit_count();
        s.mask = count >= 64 ? ~0ull : ((1ull << count) - 1);
    } else {
        s.is_mask = false;
    }
    return s;
}

ScenarioSet ScenarioSet::of_mask(std::uint64_t m) {
    ScenarioSet s;
    s.is_mask = true;
    s.mask = m;
    return s;
}

ScenarioSet ScenarioSet::of_constraints(ConstraintSet c) {
    ScenarioSet s;
    s.is_mask = false;
    s.cs = std::move(c);
    return s;
}

void ScenarioSet::intersect(const ScenarioSet& other) {
    if (is_mask != other.is_mask)
        throw std::logic_error("mixing mask and constraint scenario sets");
    if (is_mask)
        mask &= other.mask;
    else
        cs.merge(other.cs);
}

bool ScenarioSet::empty(const ScenarioFamily& family) const {
    if (is_mask)
        return mask == 0;
    return !family.satisfiable(cs);
}

bool ScenarioSet::contains(const Scenario& s, const ScenarioFamily& family) const {
    if (is_mask) {
        if (s.label < 0)
            throw std::logic_error("mask set queried with symbolic scenario");
        return (mask >> s.label) & 1;
    }
    return family.contains(s, cs);
}

std::optional<Scenario> ScenarioSet::witness(const ScenarioFamily& family) const {
    if (is_mask) {
        if (mask == 0)
            return std::nullopt;
        Scenario s;
        s.label = __builtin_ctzll(mask);
        return s;
    }
    return family.witness(cs);
}

bool ScenarioSet::subset_of(const ScenarioSet& other, const ScenarioFamily& family) const {
    if (is_mask != other.is_mask)
        throw std::logic_error("mixing mask and constraint scenario sets");
    if (is_mask)
        return (mask & ~other.mask) == 0;
    if (empty(family))
        return true;
    if (other.empty(family))
        return false;
    // this subset of other <=> every constraint of other is entailed here
    const ConstraintSet& a = cs;
    const ConstraintSet& b = other.cs;
    for (const auto& [i, bit] : b.fixed)
        if (a.value_at(i) != bit)
            return false;
    if (!b.tail)
        return true;
    auto [from, bit] = *b.tail;
    if (!a.tail || a.tail->second != bit) {
        if (family.kind == FamilyKind::AllStrings) {
            if (family.n - from > kRangeGuard)
                throw UnsupportedError("tail entailment range too wide");
            for (long i = from; i < family.n; ++i)
                if (!b.tail_exceptions.count(i) && a.value_at(i) != bit)
                    return false;
            return true;
        }
        return false;
    }
    long a_from = a.tail->first;
    if (a_from > from) {
        if (a_from - from > kRangeGuard)
            throw UnsupportedError("tail entailment range too wide");
        for (long i = from; i < a_from; ++i)
            if (!b.tail_exceptions.count(i) && a.value_at(i) != bit)
                return false;
    }
    for (long i : a.tail_exceptions)
        if (i >= from && !b.tail_exceptions.count(i) && a.value_at(i) != bit)
            return false;
    return true;
}

bool ScenarioSet::intersects(const ScenarioSet& other, const ScenarioFamily& family) const {
    ScenarioSet copy = *this;
    copy.intersect(other);
    return !copy.empty(family);
}

std::string ScenarioSet::to_string(const ScenarioFamily& family) const {
    if (is_mask) {
        std::string out = "{";
        bool first = true;
        for (std::size_t i = 0; i < family.explicit_count(); ++i)
            if ((mask >> i) & 1) {
                if (!first)
                    out += ",";
                out += family.labels[i];
                first = false;
            }
        return out + "}";
    }
    return "{g : " + cs.to_string() + "}";
}

bool ScenarioSet::operator==(const ScenarioSet& o) const {
    return is_mask == o.is_mask && mask == o.mask && cs == o.cs;
}

} // namespace mbs
