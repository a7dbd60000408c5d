#pragma once

#include "mbs/model.hpp"

#include <iosfwd>
#include <string>

namespace mbs {

// Line-oriented model format; the grammar is documented in the README.
// Rationals are "p" or "p/q", points "(t,x1,x2,x3)".
MbsModel parse_model(std::istream& in, const std::string& source_name = "<input>");
MbsModel parse_model_file(const std::string& path);

std::string serialize_model(const MbsModel& model);

// Deterministic SVG rendering of a 2D-embedded model: splitting marks,
// 45-degree light-cone rays, declared limits, chains.
std::string render_svg(const MbsModel& model);

} // namespace mbs
