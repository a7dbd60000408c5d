#pragma once

#include "mbs/model.hpp"
#include "mbs/transitions.hpp"

#include <memory>
#include <random>

namespace mbs::testsupport {

using Rng = std::mt19937_64;

inline Rat random_rat(Rng& rng, long num_range = 8, long den_max = 4) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_max);
    return make_rat(Int(num(rng)), Int(den(rng)));
}

inline Point4 random_point(Rng& rng, long num_range = 8, long den_max = 4) {
    return Point4(random_rat(rng, num_range, den_max), random_rat(rng, num_range, den_max),
                  random_rat(rng, num_range, den_max), random_rat(rng, num_range, den_max));
}

// Random valid model: scenarios are binary codes over a pool of pairwise
// space-like sites; the pair {a,b} splits exactly at the sites where the
// codes differ. Symmetry, nonemptiness, pairwise SLR and the triangle
// condition all hold by construction.
inline MbsModel random_valid_model(Rng& rng, int max_scenarios = 5, int max_sites = 6) {
    std::uniform_int_distribution<int> nscen(2, max_scenarios);
    std::uniform_int_distribution<int> nsites(1, max_sites);
    int scenarios = nscen(rng);
    int sites = nsites(rng);

    // pairwise space-like pool: grow greedily from random points
    std::vector<Point4> pool;
    int guard = 0;
    while (static_cast<int>(pool.size()) < sites && guard++ < 500) {
        Point4 p = random_point(rng, 6, 2);
        bool ok = true;
        for (const auto& q : pool)
            if (!slr(p, q))
                ok = false;
        if (ok)
            pool.push_back(p);
    }
    if (pool.empty())
        pool.push_back(Point4(0, 0, 0, 0));
    sites = static_cast<int>(pool.size());

    // distinct binary codes
    std::vector<unsigned> codes;
    std::uniform_int_distribution<unsigned> bits(0, (1u << sites) - 1);
    guard = 0;
    while (static_cast<int>(codes.size()) < scenarios && guard++ < 500) {
        unsigned c = bits(rng);
        bool fresh = true;
        for (unsigned seen : codes)
            if (seen == c)
                fresh = false;
        if (fresh)
            codes.push_back(c);
    }

    MbsModel m;
    m.name = "random";
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < codes.size(); ++i)
        labels.push_back("s" + std::to_string(i));
    m.family = explicit_family(labels);
    for (std::size_t i = 0; i < codes.size(); ++i)
        for (std::size_t j = i + 1; j < codes.size(); ++j) {
            std::vector<Point4> diff;
            for (int k = 0; k < sites; ++k)
                if (((codes[i] ^ codes[j]) >> k) & 1)
                    diff.push_back(pool[static_cast<std::size_t>(k)]);
            m.splitting[PairKey(static_cast<int>(i), static_cast<int>(j))] = std::move(diff);
        }
    return m;
}

// Random finite transition structure: a small poset of points over up to
// `max_hist` histories. Histories shrink upward (downward closure of
// events), outcome cells partition each point's histories, and
// incomparable points are space-like exactly when they share a history.
// Every point gets a chosen cell.
inline TransitionSet random_structure(Rng& rng, int max_pts = 4, int max_cells = 3,
                                      int max_hist = 64) {
    std::uniform_int_distribution<int> npts(1, max_pts);
    std::uniform_int_distribution<int> nhist(1, max_hist);
    int pts = npts(rng);
    int hist = nhist(rng);

    TransitionSet T;
    T.name = "random";
    std::vector<std::string> labels;
    for (int h = 0; h < hist; ++h)
        labels.push_back("h" + std::to_string(h));
    T.family = explicit_family(labels);
    std::uint64_t full = hist >= 64 ? ~0ull : ((1ull << hist) - 1);

    std::uniform_int_distribution<std::uint64_t> bits;
    std::uniform_int_distribution<int> coin(0, 1);

    // random order relation on a topological line: i < j possible only for i < j
    std::vector<std::vector<bool>> lt(pts, std::vector<bool>(pts, false));
    for (int i = 0; i < pts; ++i)
        for (int j = i + 1; j < pts; ++j)
            lt[i][j] = coin(rng) == 0 && coin(rng) == 0;
    for (int k = 0; k < pts; ++k) // transitive closure
        for (int i = 0; i < pts; ++i)
            for (int j = 0; j < pts; ++j)
                if (i < k && k < j && lt[i][k] && lt[k][j])
                    lt[i][j] = true;

    std::vector<std::uint64_t> masks(pts);
    for (int i = 0; i < pts; ++i) {
        std::uint64_t m = bits(rng) & full;
        for (int j = 0; j < i; ++j)
            if (lt[j][i])
                m &= masks[j]; // histories through a later point pass the earlier one
        if (m == 0) {
            if (i > 0 && [&] {
                    for (int j = 0; j < i; ++j)
                        if (lt[j][i])
                            return true;
                    return false;
                }()) {
                std::uint64_t base = full;
                for (int j = 0; j < i; ++j)
                    if (lt[j][i])
                        base &= masks[j];
                m = base ? (base & (~base + 1)) : 1ull; // lowest shared history
            } else {
                m = 1ull;
            }
        }
        masks[i] = m;
    }

    std::uniform_int_distribution<int> ncells(1, max_cells);
    for (int i = 0; i < pts; ++i) {
        TransitionPoint p;
        p.id = "p" + std::to_string(i);
        p.histories = ScenarioSet::of_mask(masks[i]);
        int want = ncells(rng);
        // partition the mask into up to `want` nonempty cells
        std::vector<std::uint64_t> cells;
        std::uint64_t rest = masks[i];
        while (rest) {
            std::uint64_t bit = rest & (~rest + 1);
            rest ^= bit;
            if (static_cast<int>(cells.size()) < want)
                cells.push_back(bit);
            else
                cells[static_cast<std::size_t>(bits(rng) % cells.size())] |= bit;
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            Possibility cell;
            cell.members = ScenarioSet::of_mask(cells[c]);
            cell.label = std::to_string(c);
            p.cells.push_back(cell);
        }
        std::uniform_int_distribution<int> pick(0, static_cast<int>(p.cells.size()) - 1);
        p.chosen = pick(rng);
        T.pts.push_back(std::move(p));
    }

    for (int i = 0; i < pts; ++i)
        for (int j = i + 1; j < pts; ++j) {
            Rel r;
            if (lt[i][j])
                r = Rel::Lt;
            else if (masks[i] & masks[j])
                r = Rel::Slr;
            else
                r = Rel::Incomp;
            T.rel_table[{i, j}] = r;
        }
    return T;
}

// Planted finitary-witness instance: a three-scenario model where two
// space-like splitting points carry outcome choices that cannot share a
// history, all inside the first scenario's history.
struct PlantedInstance {
    std::unique_ptr<MbsModel> model;
    TransitionSet transitions;
    Scenario carrier;
};

inline PlantedInstance random_planted_finfb(Rng& rng) {
    PlantedInstance out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.family = explicit_family({"s1", "s2", "s3"});
    // two space-like points
    Point4 e1, e2;
    int guard = 0;
    do {
        e1 = random_point(rng, 5, 2);
        e2 = random_point(rng, 5, 2);
    } while (!slr(e1, e2) && ++guard < 200);
    if (!slr(e1, e2)) {
        e1 = Point4(0, -1, 0, 0);
        e2 = Point4(0, 1, 0, 0);
    }
    m.splitting[PairKey(0, 1)] = {e1};
    m.splitting[PairKey(0, 2)] = {e2};
    m.splitting[PairKey(1, 2)] = {e1, e2};

    Scenario s1 = m.scenario("s1");
    out.carrier = s1;
    TransitionSet T;
    T.name = "planted";
    T.model = &m;
    T.family = m.family;
    auto add_point = [&](const std::string& id, const Point4& loc, int lone_scenario) {
        TransitionPoint p;
        p.id = id;
        p.loc = loc;
        p.rep = s1;
        EventClass e = event_class(m, loc, s1);
        p.histories = e.members;
        p.cells.clear();
        int chosen = -1;
        auto cells = elementary_possibilities(m, e);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            cells[c].label = std::to_string(c);
            if (cells[c].members.mask == (1ull << lone_scenario))
                chosen = static_cast<int>(c);
        }
        p.cells = std::move(cells);
        p.chosen = chosen;
        T.pts.push_back(std::move(p));
    };
    add_point("e1", e1, 1); // the outcome only s2 takes
    add_point("e2", e2, 2); // the outcome only s3 takes
    out.transitions = std::move(T);
    return out;
}

} // namespace mbs::testsupport
