#include "mbs/catalog.hpp"

#include <sstream>

namespace mbs {

namespace {

long param_long(const std::map<std::string, std::string>& params, const std::string& key,
                long fallback) {
    auto it = params.find(key);
    if (it == params.end())
        return fallback;
    return std::stol(it->second);
}

std::string param_str(const std::map<std::string, std::string>& params, const std::string& key,
                      const std::string& fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

ScenarioFamily family_from_kind(const std::string& kind, long n) {
    if (kind == "finitely-many-zeros")
        return symbolic_family(FamilyKind::FinitelyManyZeros);
    if (kind == "free-binary")
        return symbolic_family(FamilyKind::FreeBinary);
    if (kind == "all-strings")
        return symbolic_family(FamilyKind::AllStrings, n);
    if (kind.rfind("at-most-", 0) == 0) {
        // at-most-<k>-zeros
        auto rest = kind.substr(8);
        auto dash = rest.find('-');
        return symbolic_family(FamilyKind::AtMostKZeros, std::stol(rest.substr(0, dash)));
    }
    throw std::invalid_argument("unknown family kind '" + kind + "'");
}

// transition point over an indexed model at a choice site
TransitionPoint site_point(const MbsModel& model, long site_index) {
    TransitionPoint p;
    p.id = "s" + std::to_string(site_index);
    p.site = site_index;
    Point4 loc = model.sites.site(site_index);
    p.loc = loc;
    Scenario all_ones; // canonical representative
    p.rep = all_ones;
    EventClass e = event_class(model, loc, all_ones);
    p.histories = e.members;
    for (const auto& cell : elementary_possibilities(model, e))
        p.cells.push_back(cell);
    return p;
}

} // namespace

std::pair<Rat, Rat> circle_point(const Rat& t) {
    Rat one(1);
    Rat den = one + t * t;
    return {(one - t * t) / den, 2 * t / den};
}

// -- EPR-Bohm ------------------------------------------------------------------

CatalogProduct gen_epr_bohm() {
    CatalogProduct out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.name = "epr-bohm";
    m.family = explicit_family({"pm", "mp"}); // pm: left +, right -; mp: the flip
    Point4 left(0, -1, 0, 0), right(0, 1, 0, 0);
    m.splitting[PairKey(0, 1)] = {left, right};

    TransitionSet T;
    T.name = "epr-bohm";
    T.model = &m;
    T.family = m.family;
    Scenario pm = m.scenario("pm");
    Scenario mp = m.scenario("mp");

    auto make_point = [&](const std::string& id, const Point4& loc, const Scenario& plus_side) {
        TransitionPoint p;
        p.id = id;
        p.loc = loc;
        p.rep = pm;
        EventClass e = event_class(m, loc, pm);
        p.histories = e.members;
        Possibility plus, minus;
        plus.label = "+";
        minus.label = "-";
        plus.members = ScenarioSet::of_mask(1ull << plus_side.label);
        minus.members = ScenarioSet::of_mask(e.members.mask & ~plus.members.mask);
        p.cells = {plus, minus};
        return p;
    };
    // left station measures + in scenario pm; right station measures + in mp
    T.pts.push_back(make_point("e1", left, pm));
    T.pts.push_back(make_point("e2", right, mp));
    out.transitions = std::move(T);
    return out;
}

// -- M2 ------------------------------------------------------------------------

CatalogProduct gen_m2(long n, const std::string& family_kind) {
    if (n < 1)
        throw std::invalid_argument("m2 needs n >= 1");
    CatalogProduct out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.name = "m2";
    m.family = family_from_kind(family_kind, n);
    m.sites.tail = family_kind == "all-strings" ? TailKind::None : TailKind::Affine;
    m.sites.base = Point4(1, 0, 0, 0);
    m.sites.step = Point4(0, 1, 0, 0);
    for (long k = 0; k < n; ++k)
        m.sites.sample.push_back(Point4(1, Rat(k), 0, 0));

    TransitionSet T;
    T.name = "m2";
    T.model = out.model.get();
    T.family = m.family;
    for (long k = 0; k < n; ++k)
        T.pts.push_back(site_point(m, k));
    out.transitions = std::move(T);
    out.default_rule = ZeroOneRule{0, {}};
    out.x_rule = ZeroOneRule{0, {}};
    out.x_note = "one point above each choice site (at (3/2, k, 0, 0)); the histories through "
                 "the k-th one are exactly those taking 0 there";
    return out;
}

// -- imptop ----------------------------------------------------------------------

CatalogProduct gen_imptop(long n, const std::string& family_kind) {
    if (n < 2)
        throw std::invalid_argument("imptop needs n >= 2");
    CatalogProduct out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.name = "imptop";
    m.family = family_from_kind(family_kind, n);
    m.sites.tail = family_kind == "all-strings" ? TailKind::None : TailKind::Affine;
    m.sites.base = Point4(0, 0, 0, 0);
    m.sites.step = Point4(0, 1, 0, 0);
    for (long k = 0; k < n; ++k)
        m.sites.sample.push_back(Point4(0, Rat(k), 0, 0));

    ChainDescriptor chain;
    chain.name = "Z";
    chain.symbolic = true;
    chain.base = Point4(make_rat(1, 2), 0, 0, 0); // z_i = (i + 1/2, 0), i = 0,1,...
    chain.step = Point4(1, 0, 0, 0);
    chain.count = n;
    chain.rule = ChainDescriptor::Rule::PrefixZeros;
    m.chains.push_back(chain);
    return out;
}

// -- LW1 --------------------------------------------------------------------------

CatalogProduct gen_lw1(long n) {
    if (n < 2)
        throw std::invalid_argument("lw1 needs n >= 2");
    CatalogProduct out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.name = "lw1";
    m.family = explicit_family({"a", "b"});
    std::vector<Point4> pts;
    for (long k = 1; k <= n; ++k) {
        pts.push_back(Point4(0, make_rat(1, k), 0, 0));
        pts.push_back(Point4(0, make_rat(-1, k), 0, 0));
    }
    m.splitting[PairKey(0, 1)] = std::move(pts);
    LimitSequence right{Point4(0, 0, 0, 0), Point4(0, 1, 0, 0), n + 1};
    LimitSequence left{Point4(0, 0, 0, 0), Point4(0, -1, 0, 0), n + 1};
    m.limits[PairKey(0, 1)] = {right, left};
    return out;
}

// -- wrapped ------------------------------------------------------------------------

CatalogProduct gen_wrapped(long n) {
    if (n < 2)
        throw std::invalid_argument("wrapped needs n >= 2");
    if (n > 64)
        throw std::invalid_argument("wrapped is generated up to n = 64");
    CatalogProduct out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.name = "wrapped";
    m.family = symbolic_family(FamilyKind::FinitelyManyZeros);
    m.sites.tail = TailKind::Cone;

    // angle parameters: t_r is an upper rational bound of cot(pi / 2^(r+1)),
    // via the half-angle step cot(x/2) = cot(x) + sqrt(1 + cot(x)^2)
    std::vector<Rat> t(n + 1);
    t[1] = Rat(1);
    for (long r = 2; r <= n; ++r) {
        Rat c = t[r - 1];
        Rat root;
        Rat sq = 1 + c * c;
        if (!rat_sqrt_exact(sq, root))
            root = sqrt_upper_bound(sq);
        t[r] = c + root;
    }
    std::vector<std::pair<Rat, Rat>> dirs(n + 1);
    for (long r = 1; r <= n; ++r) {
        dirs[r] = circle_point(t[r]);
        Rat rr(r);
        m.sites.sample.push_back(Point4(Rat(-r), rr * dirs[r].first, rr * dirs[r].second, 0));
    }

    // exact invariant checks; violation is a generation error
    for (long r = 1; r <= n; ++r) {
        const Point4& e = m.sites.sample[static_cast<std::size_t>(r - 1)];
        Rat radius_sq = e.x1 * e.x1 + e.x2 * e.x2 + e.x3 * e.x3;
        if (radius_sq != Rat(r) * Rat(r) || e.t != Rat(-r))
            throw std::runtime_error("wrapped generation: site off the light cone");
    }
    for (long r = 1; r <= n; ++r)
        for (long s = r + 1; s <= n; ++s) {
            Rat dot = dirs[r].first * dirs[s].first + dirs[r].second * dirs[s].second;
            if (!(dot > 0 && dot < 1))
                throw std::runtime_error("wrapped generation: direction dot out of (0,1)");
        }
    for (long r = 5; r <= n; ++r) {
        Rat dot1 = dirs[1].first * dirs[r].first + dirs[1].second * dirs[r].second;
        if (!(2 * Rat(r) * dot1 < 1))
            throw std::runtime_error("wrapped generation: first-direction decay invariant failed");
    }
    // minimum squared Euclidean gap 2, exact on the sample
    for (long r = 1; r <= n; ++r)
        for (long s = r + 1; s <= n; ++s) {
            Rat g = euclid_sq(m.sites.sample[r - 1], m.sites.sample[s - 1]);
            if (!(g >= 2))
                throw std::runtime_error("wrapped generation: squared gap below 2");
        }
    out.generation_notes.push_back(
        "sites lie exactly on the backward light cone of the origin; pairwise space-like; "
        "squared Euclidean gaps >= 2 (all checked exactly)");

    out.default_rule = ZeroOneRule{0, {}};
    out.x_rule = ZeroOneRule{0, {}};
    {
        std::ostringstream note;
        note << "lifted set: x_r = (-(r-1/2), (r-1/2) u_r) sits on the cone half a time unit "
                "above site r; only site r lies below it, so the histories through the lift "
                "are exactly those taking 0 there; x_1 = (-1/2," << rat_to_string(dirs[1].first / 2)
             << "," << rat_to_string(dirs[1].second / 2) << ",0), later lifts analogous";
        for (long r = 1; r <= std::min<long>(n, 3); ++r) {
            Rat s = Rat(r) - make_rat(1, 2);
            Point4 x(-s, s * dirs[r].first, s * dirs[r].second, 0);
            // exact checks: the site is lightlike-below its lift, others space-like
            const Point4& e = m.sites.sample[static_cast<std::size_t>(r - 1)];
            if (!(minkowski_lt(e, x) && lorentz_interval(e, x) == 0))
                throw std::runtime_error("wrapped generation: lift not lightlike above its site");
            for (long sdx = 1; sdx <= n; ++sdx)
                if (sdx != r && !slr(m.sites.sample[static_cast<std::size_t>(sdx - 1)], x))
                    throw std::runtime_error("wrapped generation: lift comparable to foreign site");
        }
        out.x_note = note.str();
    }
    return out;
}

// -- eps2d -------------------------------------------------------------------------

CatalogProduct gen_eps2d(long n) {
    if (n < 2)
        throw std::invalid_argument("eps2d needs n >= 2");
    CatalogProduct out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.name = "eps2d";
    m.family = symbolic_family(FamilyKind::FinitelyManyZeros);
    m.sites.tail = TailKind::InvSeq;
    m.sites.limit = Point4(0, make_rat(1, 2), 0, 0);
    m.sites.dir = Point4(0, make_rat(-1, 2), 0, 0);
    // sample: one site above 1/2, the limit point itself as a splitting
    // site, then the sequence prefix; the symbolic tail continues it
    m.sites.sample.push_back(Point4(0, make_rat(3, 4), 0, 0));
    m.sites.sample.push_back(Point4(0, make_rat(1, 2), 0, 0));
    for (long j = 2; j < n + 2; ++j)
        m.sites.sample.push_back(Point4(0, make_rat(1, 2) - make_rat(1, 2 * j), 0, 0));
    m.sites.first = n + 2; // tail elements (0, 1/2 - 1/(2m)) for m >= n+2

    ZeroOneRule f;
    f.default_bit = 0;
    f.exceptions[0] = 1; // at (0, 3/4): at or above the midline
    f.exceptions[1] = 1; // at (0, 1/2)
    out.default_rule = f;
    return out;
}

// -- lattice -------------------------------------------------------------------------

CatalogProduct gen_lattice(long n) {
    if (n < 1)
        throw std::invalid_argument("lattice needs n >= 1");
    CatalogProduct out;
    out.model = std::make_unique<MbsModel>();
    MbsModel& m = *out.model;
    m.name = "lattice";
    m.family = symbolic_family(FamilyKind::FreeBinary);
    m.sites.tail = TailKind::Affine;
    m.sites.base = Point4(0, 0, 0, 0);
    m.sites.step = Point4(0, 1, 0, 0);
    for (long k = 0; k < n; ++k)
        m.sites.sample.push_back(Point4(0, Rat(k), 0, 0));
    out.default_rule = ZeroOneRule{0, {}};
    return out;
}

// -- registry -----------------------------------------------------------------------

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"epr-bohm", "(none)",
         "two space-like binary measurement stations with anticorrelated outcomes",
         {{"validate", "clean"},
          {"finfb f=+,+", "FINFB"},
          {"finfb f=-,-", "FINFB"},
          {"finfb f=+,-", "NONE"},
          {"finfb f=-,+", "NONE"}}},
        {"m2", "n=12 family=finitely-many-zeros",
         "countable row of binary choice sites; histories flip only finitely many to 0",
         {{"inffb f=zeros", "INFFB"},
          {"finfb (all product functions, n<=12)", "NONE"},
          {"cfb f=zeros", "CFB"},
          {"postulate-b x=zeros", "HOLDS"}}},
        {"imptop", "n=4 family=finitely-many-zeros",
         "splitting sites on a spatial line with a vertical chain whose scenario labels push "
         "all bits to 0",
         {{"chain Z (finitely-many-zeros)", "empty intersection: all-zeros required"},
          {"chain Z (family=all-strings)", "witness"}}},
        {"lw1", "n=8",
         "two scenarios splitting along +-1/k on a time slice, accumulating at the origin "
         "from both sides",
         {{"validate", "clean"},
          {"choice-point (0,0,0,0)", "yes, and not generated"}}},
        {"wrapped", "n=16",
         "choice sites wrapped around the backward light cone of the origin, escaping to the "
         "past with gaps",
         {{"validate", "clean"},
          {"inffb f=zeros", "INFFB"},
          {"epsfb f=zeros", "NONE"},
          {"postulate-a f=zeros", "FAILS"},
          {"postulate-b x=zeros", "HOLDS"}}},
        {"eps2d", "n=8",
         "splitting sites on a slice accumulating at (0,1/2) from below; outcomes forced to 0 "
         "below the midline",
         {{"epsfb f=zeros+1@{0,1}", "EPSFB at (0,1/2,0,0)"},
          {"finfb (sampled sites)", "NONE"},
          {"postulate-a", "HOLDS"}}},
        {"lattice", "n=8 delta=1/2",
         "evenly spaced choice sites on a spatial line over the free binary family",
         {{"mingap delta=1/2 f=zeros", "condition holds; NONE with containing history"}}},
    };
    return entries;
}

CatalogProduct catalog_build(const std::string& name,
                             const std::map<std::string, std::string>& params) {
    if (name == "epr-bohm")
        return gen_epr_bohm();
    if (name == "m2")
        return gen_m2(param_long(params, "n", 12),
                      param_str(params, "family", "finitely-many-zeros"));
    if (name == "imptop")
        return gen_imptop(param_long(params, "n", 4),
                          param_str(params, "family", "finitely-many-zeros"));
    if (name == "lw1")
        return gen_lw1(param_long(params, "n", 8));
    if (name == "wrapped")
        return gen_wrapped(param_long(params, "n", 16));
    if (name == "eps2d")
        return gen_eps2d(param_long(params, "n", 8));
    if (name == "lattice")
        return gen_lattice(param_long(params, "n", 8));
    std::string known;
    for (const auto& e : catalog_entries())
        known += (known.empty() ? "" : ", ") + e.name;
    throw std::invalid_argument("unknown catalog entry '" + name + "'; available: " + known);
}

} // namespace mbs
