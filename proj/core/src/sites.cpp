#include "mbs/sites.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mbs {

namespace {

constexpr long kScanWindow = 8; // exact endpoint refinement width

long to_long(const Int& z) {
    if (!z.fits_slong_p())
        return z < 0 ? std::numeric_limits<long>::min() / 4
                     : std::numeric_limits<long>::max() / 4;
    return z.get_si();
}

} // namespace

// -- IndexSelection -----------------------------------------------------------

void IndexSelection::add_range(long lo, long hi) {
    if (lo > hi)
        return;
    ranges.emplace_back(lo, hi);
}

void IndexSelection::add_all_from(long from) {
    if (!all_from || *all_from > from)
        all_from = from;
}

void IndexSelection::normalize() {
    std::sort(ranges.begin(), ranges.end());
    std::vector<std::pair<long, long>> merged;
    for (auto [lo, hi] : ranges) {
        if (all_from && lo >= *all_from)
            continue;
        if (all_from && hi >= *all_from - 1) {
            all_from = lo; // range touches the tail
            continue;
        }
        if (!merged.empty() && lo <= merged.back().second + 1)
            merged.back().second = std::max(merged.back().second, hi);
        else
            merged.emplace_back(lo, hi);
    }
    // a trailing range may have been folded into all_from; re-check overlap
    while (!merged.empty() && all_from && merged.back().second >= *all_from - 1) {
        all_from = std::min(*all_from, merged.back().first);
        merged.pop_back();
    }
    ranges = std::move(merged);
}

bool IndexSelection::contains(long n) const {
    if (all_from && n >= *all_from)
        return true;
    for (auto [lo, hi] : ranges)
        if (n >= lo && n <= hi)
            return true;
    return false;
}

bool IndexSelection::empty() const {
    return !undecided && ranges.empty() && !all_from;
}

long IndexSelection::count() const {
    if (all_from)
        throw std::logic_error("count() on an infinite selection");
    long total = 0;
    for (auto [lo, hi] : ranges)
        total += hi - lo + 1;
    return total;
}

void IndexSelection::for_each(const std::function<void(long)>& fn) const {
    for (auto [lo, hi] : ranges)
        for (long n = lo; n <= hi; ++n)
            fn(n);
}

void IndexSelection::restrict_below(long cap) {
    if (all_from && *all_from >= cap)
        all_from.reset();
    else if (all_from) {
        ranges.emplace_back(*all_from, cap - 1);
        all_from.reset();
    }
    std::vector<std::pair<long, long>> kept;
    for (auto [lo, hi] : ranges) {
        hi = std::min(hi, cap - 1);
        if (lo <= hi)
            kept.emplace_back(lo, hi);
    }
    ranges = std::move(kept);
    normalize();
}

std::string IndexSelection::to_string() const {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (auto [lo, hi] : ranges) {
        if (!first)
            out << ",";
        if (lo == hi)
            out << lo;
        else
            out << lo << "-" << hi;
        first = false;
    }
    if (all_from) {
        if (!first)
            out << ",";
        out << *all_from << "..";
        first = false;
    }
    out << "}";
    if (undecided)
        out << "?";
    return out.str();
}

IndexSelection intersect(const IndexSelection& a, const IndexSelection& b) {
    IndexSelection out;
    out.undecided = a.undecided || b.undecided;
    auto clip_ranges = [](const IndexSelection& x, long lo, long hi, IndexSelection& sink) {
        for (auto [rlo, rhi] : x.ranges)
            sink.add_range(std::max(rlo, lo), std::min(rhi, hi));
    };
    // range x range
    for (auto [alo, ahi] : a.ranges)
        for (auto [blo, bhi] : b.ranges)
            out.add_range(std::max(alo, blo), std::min(ahi, bhi));
    // range x tail
    if (b.all_from)
        clip_ranges(a, *b.all_from, std::numeric_limits<long>::max(), out);
    if (a.all_from)
        clip_ranges(b, *a.all_from, std::numeric_limits<long>::max(), out);
    if (a.all_from && b.all_from)
        out.add_all_from(std::max(*a.all_from, *b.all_from));
    out.normalize();
    return out;
}

// -- quadratic solver ---------------------------------------------------------

IndexSelection solve_quadratic(const Rat& A, const Rat& B, const Rat& C, long lo, bool strict) {
    IndexSelection out;
    // clear denominators; scaling by a positive constant preserves the sign
    Int m = A.get_den();
    mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), B.get_den().get_mpz_t());
    mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), C.get_den().get_mpz_t());
    Rat scale(m);
    Rat As = A * scale, Bs = B * scale, Cs = C * scale;
    Int a = As.get_num(), b = Bs.get_num(), c = Cs.get_num();

    auto sat = [&](long n) {
        Int nn(n);
        Int v = a * nn * nn + b * nn + c;
        return strict ? v < 0 : v <= 0;
    };

    if (a == 0) {
        if (b == 0) {
            bool yes = strict ? c < 0 : c <= 0;
            if (yes)
                out.add_all_from(lo);
            return out;
        }
        // b*n + c (<=|<) 0
        Rat bound = make_rat(-c, b);
        if (b > 0) {
            long hi = to_long(rat_floor(bound));
            while (hi >= lo && !sat(hi))
                --hi;
            out.add_range(lo, hi);
        } else {
            long from = to_long(rat_ceil(bound));
            from = std::max(from, lo);
            while (!sat(from))
                ++from;
            while (from - 1 >= lo && sat(from - 1))
                --from;
            out.add_all_from(from);
        }
        out.normalize();
        return out;
    }

    Int disc = b * b - 4 * a * c;
    if (a > 0) {
        if (disc < 0)
            return out; // parabola opens upward, always positive
        Int s = floor_sqrt(disc);
        // candidate interval [ (-b - s)/(2a), (-b + s)/(2a) ], refined exactly
        long n_lo = to_long(rat_floor(make_rat(-b - s, 2 * a))) - kScanWindow;
        long n_hi = to_long(rat_ceil(make_rat(-b + s, 2 * a))) + kScanWindow;
        long left = std::max(lo, n_lo);
        while (left <= n_hi && !sat(left))
            ++left;
        if (left > n_hi)
            return out;
        long right = n_hi;
        while (right >= left && !sat(right))
            --right;
        out.add_range(left, right);
        out.normalize();
        return out;
    }

    // a < 0: solutions outside the root interval
    if (disc < 0) {
        out.add_all_from(lo);
        return out;
    }
    Int s = floor_sqrt(disc);
    long n_lo = to_long(rat_floor(make_rat(-b + s, 2 * a))) - kScanWindow; // note: 2a < 0 flips
    long n_hi = to_long(rat_ceil(make_rat(-b - s, 2 * a))) + kScanWindow;
    long left_end = std::max(lo, n_lo) - 1;
    {
        long probe = std::max(lo, n_lo);
        long cap = n_hi;
        long last_good = lo - 1;
        for (long n = probe; n <= cap; ++n)
            if (sat(n))
                last_good = n;
            else
                break;
        // everything below probe satisfies as well (parabola negative there)
        if (probe > lo || sat(lo))
            left_end = std::max(last_good, probe - 1);
        else
            left_end = last_good;
    }
    if (left_end >= lo)
        out.add_range(lo, left_end);
    long from = n_hi;
    while (from - 1 >= lo && sat(from - 1))
        --from;
    while (!sat(from))
        ++from;
    out.add_all_from(std::max(from, lo));
    out.normalize();
    return out;
}

// -- SiteSet --------------------------------------------------------------

Point4 SiteSet::site(long n) const {
    if (n < sample_count())
        return sample[static_cast<std::size_t>(n)];
    switch (tail) {
    case TailKind::None:
        throw std::out_of_range("site index beyond sample");
    case TailKind::Affine: {
        Rat k(n);
        return Point4(base.t + k * step.t, base.x1 + k * step.x1, base.x2 + k * step.x2,
                      base.x3 + k * step.x3);
    }
    case TailKind::InvSeq: {
        Rat inv = make_rat(1, first + n);
        return Point4(limit.t + inv * dir.t, limit.x1 + inv * dir.x1, limit.x2 + inv * dir.x2,
                      limit.x3 + inv * dir.x3);
    }
    case TailKind::Cone:
        throw UnsupportedError("cone tail sites are not instantiated beyond the sample");
    }
    throw std::logic_error("bad tail kind");
}

std::optional<long> SiteSet::index_at(const Point4& x) const {
    for (long n = 0; n < sample_count(); ++n)
        if (sample[static_cast<std::size_t>(n)] == x)
            return n;
    if (tail == TailKind::Affine) {
        // solve base + n*step == x on the first coordinate step is nonzero on
        const Rat* s[4] = {&step.t, &step.x1, &step.x2, &step.x3};
        const Rat* b[4] = {&base.t, &base.x1, &base.x2, &base.x3};
        const Rat* xv[4] = {&x.t, &x.x1, &x.x2, &x.x3};
        for (int i = 0; i < 4; ++i)
            if (*s[i] != 0) {
                Rat k = (*xv[i] - *b[i]) / *s[i];
                if (k.get_den() == 1 && k >= sample_count() && site(k.get_num().get_si()) == x)
                    return k.get_num().get_si();
                return std::nullopt;
            }
    }
    if (tail == TailKind::InvSeq) {
        const Rat* d[4] = {&dir.t, &dir.x1, &dir.x2, &dir.x3};
        const Rat* l[4] = {&limit.t, &limit.x1, &limit.x2, &limit.x3};
        const Rat* xv[4] = {&x.t, &x.x1, &x.x2, &x.x3};
        for (int i = 0; i < 4; ++i)
            if (*d[i] != 0) {
                Rat diff = *xv[i] - *l[i];
                if (diff == 0)
                    return std::nullopt;
                Rat minv = *d[i] / diff; // = first + n
                if (minv.get_den() == 1 && minv >= first) {
                    long n = minv.get_num().get_si() - first;
                    if (n >= sample_count() && site(n) == x)
                        return n;
                }
                return std::nullopt;
            }
    }
    return std::nullopt;
}

IndexSelection SiteSet::below(const Point4& x, bool strict) const {
    IndexSelection out;
    for (long n = 0; n < sample_count(); ++n) {
        const Point4& p = sample[static_cast<std::size_t>(n)];
        if (strict ? minkowski_lt(p, x) : minkowski_leq(p, x))
            out.add(n);
    }
    long tail_from = sample_count();
    switch (tail) {
    case TailKind::None:
        break;
    case TailKind::Affine: {
        Rat X0 = x.t - base.t, X1 = x.x1 - base.x1, X2 = x.x2 - base.x2, X3 = x.x3 - base.x3;
        Rat A = step.x1 * step.x1 + step.x2 * step.x2 + step.x3 * step.x3 - step.t * step.t;
        Rat B = 2 * (X0 * step.t - X1 * step.x1 - X2 * step.x2 - X3 * step.x3);
        Rat C = X1 * X1 + X2 * X2 + X3 * X3 - X0 * X0;
        IndexSelection interval = solve_quadratic(A, B, C, tail_from, false);
        // time condition: base.t + n*step.t <= x.t  <=>  n*step.t - X0 <= 0
        IndexSelection time_ok = solve_quadratic(Rat(0), step.t, -X0, tail_from, false);
        IndexSelection sel = intersect(interval, time_ok);
        if (strict) {
            if (auto eq = index_at(x); eq && sel.contains(*eq)) {
                IndexSelection cut;
                cut.add_range(tail_from, *eq - 1);
                cut.add_all_from(*eq + 1);
                sel = intersect(sel, cut);
            }
        }
        for (auto [lo, hi] : sel.ranges)
            out.add_range(lo, hi);
        if (sel.all_from)
            out.add_all_from(*sel.all_from);
        break;
    }
    case TailKind::InvSeq: {
        // work in m = first + n
        Rat X0 = x.t - limit.t, X1 = x.x1 - limit.x1, X2 = x.x2 - limit.x2, X3 = x.x3 - limit.x3;
        Rat A = X1 * X1 + X2 * X2 + X3 * X3 - X0 * X0;
        Rat B = 2 * (X0 * dir.t - X1 * dir.x1 - X2 * dir.x2 - X3 * dir.x3);
        Rat C = dir.x1 * dir.x1 + dir.x2 * dir.x2 + dir.x3 * dir.x3 - dir.t * dir.t;
        long m_lo = first + tail_from;
        IndexSelection interval = solve_quadratic(A, B, C, m_lo, false);
        // time: m*X0 - dir.t >= 0  <=>  -X0*m + dir.t <= 0
        IndexSelection time_ok = solve_quadratic(Rat(0), -X0, dir.t, m_lo, false);
        IndexSelection sel = intersect(interval, time_ok);
        if (strict) {
            if (auto eq = index_at(x)) {
                long m_eq = *eq + first;
                IndexSelection cut;
                cut.add_range(m_lo, m_eq - 1);
                cut.add_all_from(m_eq + 1);
                sel = intersect(sel, cut);
            }
        }
        for (auto [lo, hi] : sel.ranges)
            out.add_range(lo - first, hi - first);
        if (sel.all_from)
            out.add_all_from(*sel.all_from - first);
        break;
    }
    case TailKind::Cone: {
        // site_r = (-r, r*u_r) with r = n+1:
        //   site <=_M x  <=>  2 r (x.t + xs.u_r) >= |xs|^2 - x.t^2  and  r >= -x.t
        // Tail sites are never equal to x (only the sample is instantiated),
        // so strictness plays no role past the sample.
        Point4 origin(0, 0, 0, 0);
        if (minkowski_leq(origin, x)) {
            out.add_all_from(tail_from);
            break;
        }
        Rat xs_sq = x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3;
        // detect x = (x0, c * u_j) for a sampled direction u_j
        std::optional<std::pair<long, Rat>> along; // (sample index, c)
        for (long j = 0; j < sample_count(); ++j) {
            const Point4& e = sample[static_cast<std::size_t>(j)];
            Rat r(j + 1);
            // x spatial == (c/r) * e spatial
            Rat c2;
            bool ok = false;
            if (e.x1 != 0) { c2 = x.x1 * r / e.x1; ok = true; }
            else if (e.x2 != 0) { c2 = x.x2 * r / e.x2; ok = true; }
            else if (e.x3 != 0) { c2 = x.x3 * r / e.x3; ok = true; }
            if (!ok)
                continue;
            if (x.x1 * r == c2 * e.x1 && x.x2 * r == c2 * e.x2 && x.x3 * r == c2 * e.x3 && c2 >= 0) {
                along = {j, c2};
                break;
            }
        }
        if (xs_sq == 0) {
            // on the time axis below the apex: no tail site is below x
            break;
        }
        if (!along) {
            out.undecided = true;
            break;
        }
        auto [j, c] = *along;
        if (x.t > 0) {
            // invariant (ii): dots positive, so 2 r x.t alone eventually dominates
            Rat bound = (c * c - x.t * x.t) / (2 * x.t);
            long from = std::max(tail_from, to_long(rat_ceil(bound)) + 1);
            out.add_all_from(from);
            break;
        }
        if (j == 0 && c >= 1) {
            // invariant (iii): 2 r (u_0 . u_r) < 1 for r >= 5, so
            // 2 r (x.t + c u_0.u_r) < 2 r x.t + c <= c*c - x.t*x.t fails past a bound
            if (x.t == 0) {
                if (c * c >= c && sample_count() >= 5)
                    break; // excluded for the whole tail
                out.undecided = true;
                break;
            }
            // x.t < 0: exclusion for r >= (c*c - c - x.t*x.t) / (2 x.t) (flip: x.t < 0)
            Rat threshold = (c * c - c - x.t * x.t) / (2 * x.t);
            long safe = std::max<long>(5, to_long(rat_ceil(threshold)));
            if (sample_count() >= safe)
                break; // tail entirely excluded
            out.undecided = true;
            break;
        }
        out.undecided = true;
        break;
    }
    }
    out.normalize();
    return out;
}

IndexSelection SiteSet::within(const Point4& center, const Rat& delta_sq) const {
    IndexSelection out;
    for (long n = 0; n < sample_count(); ++n)
        if (euclid_sq(sample[static_cast<std::size_t>(n)], center) < delta_sq)
            out.add(n);
    long tail_from = sample_count();
    switch (tail) {
    case TailKind::None:
        break;
    case TailKind::Affine: {
        Rat X0 = center.t - base.t, X1 = center.x1 - base.x1, X2 = center.x2 - base.x2,
            X3 = center.x3 - base.x3;
        Rat A = step.t * step.t + step.x1 * step.x1 + step.x2 * step.x2 + step.x3 * step.x3;
        Rat B = -2 * (X0 * step.t + X1 * step.x1 + X2 * step.x2 + X3 * step.x3);
        Rat C = X0 * X0 + X1 * X1 + X2 * X2 + X3 * X3 - delta_sq;
        IndexSelection sel = solve_quadratic(A, B, C, tail_from, true);
        for (auto [lo, hi] : sel.ranges)
            out.add_range(lo, hi);
        if (sel.all_from)
            out.add_all_from(*sel.all_from);
        break;
    }
    case TailKind::InvSeq: {
        Rat X0 = center.t - limit.t, X1 = center.x1 - limit.x1, X2 = center.x2 - limit.x2,
            X3 = center.x3 - limit.x3;
        // |X - dir/m|^2 < delta_sq, times m^2
        Rat A = X0 * X0 + X1 * X1 + X2 * X2 + X3 * X3 - delta_sq;
        Rat B = -2 * (X0 * dir.t + X1 * dir.x1 + X2 * dir.x2 + X3 * dir.x3);
        Rat C = dir.t * dir.t + dir.x1 * dir.x1 + dir.x2 * dir.x2 + dir.x3 * dir.x3;
        long m_lo = first + tail_from;
        IndexSelection sel = solve_quadratic(A, B, C, m_lo, true);
        for (auto [lo, hi] : sel.ranges)
            out.add_range(lo - first, hi - first);
        if (sel.all_from)
            out.add_all_from(*sel.all_from - first);
        break;
    }
    case TailKind::Cone: {
        // dist^2 >= (c.t + r)^2 + r^2 - 2 r ub(|cs|) + |cs|^2, exclude once > delta_sq
        Rat cs_sq = center.x1 * center.x1 + center.x2 * center.x2 + center.x3 * center.x3;
        Rat ub = sqrt_upper_bound(cs_sq);
        Rat A = Rat(2);
        Rat B = 2 * center.t - 2 * ub;
        Rat C = center.t * center.t + cs_sq - delta_sq;
        // lower bound <= delta_sq only possibly inside the solved interval
        IndexSelection maybe_r = solve_quadratic(A, B, C, tail_from + 1, false);
        if (maybe_r.all_from || !maybe_r.ranges.empty())
            out.undecided = true; // uninstantiated tail sites might fall in the ball
        break;
    }
    }
    out.normalize();
    return out;
}

std::optional<bool> SiteSet::pairwise_slr_symbolic() const {
    switch (tail) {
    case TailKind::None: {
        for (long i = 0; i < sample_count(); ++i)
            for (long j = i + 1; j < sample_count(); ++j)
                if (!slr(sample[i], sample[j]))
                    return false;
        return true;
    }
    case TailKind::Affine: {
        Rat A = step.x1 * step.x1 + step.x2 * step.x2 + step.x3 * step.x3 - step.t * step.t;
        return A > 0; // interval between distinct sites is (j-i)^2 * A
    }
    case TailKind::InvSeq: {
        Rat A = dir.x1 * dir.x1 + dir.x2 * dir.x2 + dir.x3 * dir.x3 - dir.t * dir.t;
        return A > 0;
    }
    case TailKind::Cone:
        // interval(site_r, site_s) = 2 r s (1 - u_r.u_s) > 0 by invariant (ii);
        // the sample is checked exactly by the generator/validator
        for (long i = 0; i < sample_count(); ++i)
            for (long j = i + 1; j < sample_count(); ++j)
                if (!slr(sample[i], sample[j]))
                    return false;
        return true;
    }
    return std::nullopt;
}

std::string SiteSet::describe() const {
    std::ostringstream out;
    switch (tail) {
    case TailKind::None:
        out << "sites: " << sample.size() << " explicit";
        break;
    case TailKind::Affine:
        out << "sites: affine base=" << base.to_string() << " step=" << step.to_string();
        break;
    case TailKind::InvSeq:
        out << "sites: invseq limit=" << limit.to_string() << " dir=" << dir.to_string()
            << " first=" << first;
        break;
    case TailKind::Cone:
        out << "sites: cone sample=" << sample.size();
        break;
    }
    return out.str();
}

} // namespace mbs
