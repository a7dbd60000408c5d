#pragma once

#include "mbs/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mbs {

// A decidable subset of site indices {n : n >= 0}: finitely many closed
// ranges, optionally everything past some point. `undecided` flags a
// symbolic tail the geometry rules could not classify; callers must treat
// such selections as unusable rather than as empty.
struct IndexSelection {
    std::vector<std::pair<long, long>> ranges; // disjoint, sorted, inclusive
    std::optional<long> all_from;
    bool undecided = false;

    void add(long n) { add_range(n, n); }
    void add_range(long lo, long hi);
    void add_all_from(long from);
    void normalize();

    bool contains(long n) const;
    bool empty() const;
    bool infinite() const { return all_from.has_value(); }
    // Number of selected indices; requires a finite selection.
    long count() const;
    void for_each(const std::function<void(long)>& fn) const; // finite part only
    void restrict_below(long limit); // drop indices >= limit
    std::string to_string() const;
};

IndexSelection intersect(const IndexSelection& a, const IndexSelection& b);

// Integer solutions n >= lo of A n^2 + B n + C <= 0 (or < 0). Exact.
IndexSelection solve_quadratic(const Rat& A, const Rat& B, const Rat& C, long lo, bool strict);

// An indexed family of points in R^4: a fully instantiated sample prefix
// plus an optional symbolic tail describing the rest of the sequence.
enum class TailKind {
    None,   // just the sample
    Affine, // site_n = base + n*step, all n >= 0
    InvSeq, // site_n = limit + dir/(first+n), all n >= 0
    Cone,   // site_n on the backward light cone of the origin, radius n+1
};

struct SiteSet {
    std::vector<Point4> sample;
    TailKind tail = TailKind::None;

    Point4 base, step;           // Affine
    Point4 limit, dir;           // InvSeq
    long first = 1;              // InvSeq: first denominator

    // Cone tail invariants, declared for every index of the family and
    // verified exactly on the sample by the generator/parser:
    //   (i)  |spatial(site_n)| = n+1 = -time(site_n)
    //   (ii) 0 < u_m . u_n < 1 for m != n
    //   (iii) 2 r (u_0 . u_{r-1}) < 1 for radii r >= 5
    // where u_n is the unit direction of site_n.

    long sample_count() const { return static_cast<long>(sample.size()); }
    bool infinite() const { return tail != TailKind::None; }
    Point4 site(long n) const;
    std::optional<long> index_at(const Point4& x) const;

    // {n : site_n <=_M x} (strict: <_M). Tail handled symbolically.
    IndexSelection below(const Point4& x, bool strict) const;
    // {n : euclid^2(site_n, center) < delta_sq}.
    IndexSelection within(const Point4& center, const Rat& delta_sq) const;

    // Exact statement of pairwise space-like relatedness covering the
    // tail, or nullopt when only the sample could be checked.
    std::optional<bool> pairwise_slr_symbolic() const;

    std::string describe() const;
};

} // namespace mbs
