#pragma once

#include "mbs/detect.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mbs {

struct CatalogEntry {
    std::string name;
    std::string params; // accepted parameters with defaults
    std::string note;
    std::vector<std::pair<std::string, std::string>> expected; // check -> expected verdict
};

const std::vector<CatalogEntry>& catalog_entries();

// A generated structure: the model plus whatever auxiliary data the entry
// carries (a transition skeleton, a default product rule, a postulate-B
// set).
struct CatalogProduct {
    std::unique_ptr<MbsModel> model;
    std::optional<TransitionSet> transitions; // points with cells, none chosen
    std::optional<ZeroOneRule> default_rule;
    std::optional<ZeroOneRule> x_rule; // postulate-B membership rule
    std::string x_note;
    std::vector<std::string> generation_notes;
};

CatalogProduct catalog_build(const std::string& name,
                             const std::map<std::string, std::string>& params = {});

// Individual generators.
CatalogProduct gen_epr_bohm();
CatalogProduct gen_m2(long n, const std::string& family_kind);
CatalogProduct gen_imptop(long n, const std::string& family_kind = "finitely-many-zeros");
CatalogProduct gen_lw1(long n);
CatalogProduct gen_wrapped(long n);
CatalogProduct gen_eps2d(long n);
CatalogProduct gen_lattice(long n);

// Exact rational point on the unit circle used by the wrapped model:
// parameter t maps to ((1-t^2)/(1+t^2), 2t/(1+t^2)).
std::pair<Rat, Rat> circle_point(const Rat& t);

} // namespace mbs
