#pragma once

#include "mbs/transitions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mbs {

struct ClauseCheck {
    std::string label;
    bool pass = false;
    std::string note;
};

// -- finitary funny business ---------------------------------------------------

struct FinfbStats {
    long unions_examined = 0;
    long pairs_examined = 0;
    long pruned_unions = 0;
};

struct FinfbResult {
    bool funny = false;
    std::vector<int> a1, a2; // witness point indices, canonical order
    ScenarioSet meet_a1, meet_a2, meet_union;
    std::optional<Scenario> h_a, h_b;
    bool full_meet_nonempty = false;
    std::optional<Scenario> full_witness;
    FinfbStats stats;

    std::string render(const TransitionSet& T) const;
};

// Exhaustive search over pairs of space-like separated subsets, ascending
// by total size with deterministic tie-breaks; `prune` skips bipartitions
// of any union whose joint outcome set is already known nonempty.
FinfbResult check_finfb(const TransitionSet& T, int jobs = 1, bool prune = true);

// Re-run the clause checks of an emitted witness. True when they
// reproduce the verdict.
bool reverify_finfb(const TransitionSet& T, const FinfbResult& r);

struct BelnapWitness {
    std::vector<int> a, b;
    Scenario h_a, h_b;
};

// Initial events A slr B whose selected outcomes cannot share a history;
// present exactly when check_finfb reports a witness.
std::optional<BelnapWitness> belnap_witness(const TransitionSet& T);

// -- infinitary funny business ---------------------------------------------------

struct InffbResult {
    bool funny = false;
    std::vector<ClauseCheck> clauses;
    std::optional<Scenario> witness; // satisfying scenario when not funny
    std::string rule_text;
    std::string time_bounded_note; // is the reduced set bounded in time? (reported, not decided)

    std::string render(const ScenarioFamily& family) const;
};

// Full symbolic check of the four infinitary clauses for a product
// function given as a per-index rule over a site family.
InffbResult check_inffb(const ScenarioFamily& family, const SiteSet& sites, const ZeroOneRule& f,
                        long spot_check = 12);

// -- combinatorial funny business -----------------------------------------------

struct CfbResult {
    bool funny = false;
    bool combinatorially_consistent = true;
    std::vector<ClauseCheck> conditions;
    bool meet_empty = false;
    std::optional<Scenario> witness;

    std::string render(const TransitionSet& T) const;
};

CfbResult check_cfb(const TransitionSet& T);
CfbResult check_cfb_symbolic(const ScenarioFamily& family, const SiteSet& sites,
                             const ZeroOneRule& f);

// -- epsilon funny business ------------------------------------------------------

struct EpsCandidate {
    Point4 point;
    bool is_accumulation = false;
    bool witness = false;
    std::string reason;
    std::vector<std::string> trace; // per-delta neighborhood records
};

struct EpsResult {
    bool funny = false;
    std::optional<Point4> witness_point;
    std::vector<EpsCandidate> candidates;
    std::string rule_text;

    std::string render() const;
};

// Some reduced-set point all of whose epsilon-neighborhoods force an
// empty joint outcome. Decided symbolically at declared accumulation
// points; isolated points are certified by an exact minimum gap.
EpsResult check_epsfb(const MbsModel& model, const ZeroOneRule& f, std::vector<Rat> deltas = {});

// -- the two postulates ----------------------------------------------------------

struct PostAResult {
    bool holds = false;
    bool via_eps = false;
    EpsResult eps;
    // direct evaluation on finite structures:
    std::vector<std::string> selector_table; // per-point (h, x) selections when false
    std::optional<std::string> critical_point;
    std::string scope_note;

    std::string render() const;
};

PostAResult check_postulate_a(const MbsModel& model, const ZeroOneRule& f,
                              std::vector<Rat> deltas = {});
PostAResult check_postulate_a_direct(const TransitionSet& T);

struct PostBResult {
    bool holds = false;
    ClauseCheck finite_subsets, whole_set;
    std::optional<Scenario> containing_history; // when the whole set fits one
    std::vector<std::string> items;

    std::string render(const ScenarioFamily& family) const;
};

// X given as one membership constraint per site index (bit the histories
// through x_n must take).
PostBResult check_postulate_b(const ScenarioFamily& family, const ZeroOneRule& x_rule,
                              long spot_check = 12);
// X given as finite event list.
PostBResult check_postulate_b_finite(const ScenarioFamily& family,
                                     const std::vector<std::pair<std::string, ScenarioSet>>& xs);

// -- minimum-gap condition and the chain construction ----------------------------

struct MingapResult {
    bool posc_holds = false;
    std::string posc_reason;
    bool premise_no_finfb = false;
    bool verdict_none = false;
    std::vector<std::string> slabs;
    std::optional<Scenario> witness;
    bool family_not_chain_compact = false;
    std::string failure;

    std::string render(const ScenarioFamily& family) const;
};

// Verifies the uniform-gap condition on the site descriptor, then runs
// the iterated time-shift chain construction to exhibit a containing
// history for the given product rule.
MingapResult check_min_gap_no_inffb(const MbsModel& model, const Rat& delta, const ZeroOneRule& f,
                                    long steps = 8);

// -- derived infinitary case from a finitary witness -----------------------------

struct Fin2InfResult {
    bool passthrough = false;
    std::string region;                    // descriptor of the constructed point set
    std::vector<std::string> sample_notes; // certified sample members and their cells
    std::vector<ClauseCheck> clauses;      // the four infinitary clauses
    bool all_pass() const;

    std::string render() const;
};

Fin2InfResult construct_inffb_from_finfb(const TransitionSet& T, const FinfbResult& witness,
                                         const Scenario& h_s);

// First branch of the construction: when the finitary witness already
// spans infinitely many sites, the witness set itself is the infinitary
// case and passes through unchanged.
Fin2InfResult construct_inffb_from_finfb_symbolic(const ScenarioFamily& family,
                                                  const SiteSet& sites, const ZeroOneRule& f,
                                                  const IndexSelection& a,
                                                  const IndexSelection& b);

// -- cone localization ------------------------------------------------------------

struct LocateResult {
    enum class Case { NoFb, Cone, OuterLining } kind = Case::NoFb;
    bool apex_exact = false;
    Point4 apex;               // meaningful when apex_exact
    Rat apex_time_base, apex_disc; // x*.t = base + sqrt(disc) otherwise
    std::vector<std::string> thresholds;
    std::vector<std::string> lining_trace;

    std::string render() const;
};

// Scan the vertical chain above a reduced-set point for the supremum of
// the segment whose joint outcomes below remain possible.
LocateResult locate_cone_boundary(const TransitionSet& T, const Point4& a_star);
LocateResult locate_cone_boundary_symbolic(const MbsModel& model, const ZeroOneRule& f,
                                           const Point4& a_star, std::vector<Rat> deltas = {});

// -- cause-like loci ---------------------------------------------------------------

struct CauseLociResult {
    std::vector<int> loci;
    bool no_finfb = true;
    std::optional<std::string> finfb_note; // witness description when FINFB found
    bool all_strictly_below = true;
    std::vector<std::string> notes;

    std::string render(const TransitionSet& T) const;
};

// C(x): points at which some history splits away from everything through
// x. Under no-FINFB over C(x)+{x}, asserts every locus lies strictly
// below x.
CauseLociResult cause_like_loci(const TransitionSet& structure, int x_index);

} // namespace mbs
