#include "mbs/transitions.hpp"

#include <sstream>

namespace mbs {

const char* to_string(Rel r) {
    switch (r) {
    case Rel::Eq: return "eq";
    case Rel::Lt: return "lt";
    case Rel::Gt: return "gt";
    case Rel::Slr: return "slr";
    case Rel::Incomp: return "incomparable";
    }
    return "?";
}

std::string ZeroOneRule::to_string() const {
    std::ostringstream out;
    out << (default_bit == 0 ? "zeros" : "ones");
    if (!exceptions.empty()) {
        out << "+" << (default_bit == 0 ? 1 : 0) << "@{";
        bool first = true;
        for (const auto& [i, b] : exceptions) {
            (void)b;
            if (!first)
                out << ",";
            out << i;
            first = false;
        }
        out << "}";
    }
    return out.str();
}

ZeroOneRule ZeroOneRule::parse(const std::string& text) {
    ZeroOneRule rule;
    std::string base = text;
    std::string exc;
    auto plus = text.find('+');
    if (plus != std::string::npos) {
        base = text.substr(0, plus);
        exc = text.substr(plus + 1);
    }
    if (base == "zeros")
        rule.default_bit = 0;
    else if (base == "ones")
        rule.default_bit = 1;
    else
        throw ParseError("rule must be 'zeros' or 'ones' (optionally +b@{i,..}): '" + text + "'");
    if (!exc.empty()) {
        auto at = exc.find("@{");
        if (at == std::string::npos || exc.back() != '}')
            throw ParseError("rule exceptions must look like +b@{i,j}: '" + text + "'");
        int bit = std::stoi(exc.substr(0, at));
        if (bit != 0 && bit != 1)
            throw ParseError("exception bit must be 0 or 1: '" + text + "'");
        std::string body = exc.substr(at + 2, exc.size() - at - 3);
        std::size_t start = 0;
        for (std::size_t i = 0; i <= body.size(); ++i)
            if (i == body.size() || body[i] == ',') {
                std::string piece = body.substr(start, i - start);
                if (!piece.empty())
                    rule.exceptions[std::stol(piece)] = bit;
                start = i + 1;
            }
    }
    return rule;
}

Rel TransitionSet::relation(int i, int j) const {
    if (i == j)
        return Rel::Eq;
    auto key = std::make_pair(std::min(i, j), std::max(i, j));
    auto it = rel_table.find(key);
    if (it != rel_table.end()) {
        Rel r = it->second;
        if (i > j) {
            if (r == Rel::Lt)
                return Rel::Gt;
            if (r == Rel::Gt)
                return Rel::Lt;
        }
        return r;
    }
    const TransitionPoint& a = pts[i];
    const TransitionPoint& b = pts[j];
    if (a.loc && b.loc && a.rep && b.rep && model) {
        EventClass ea{model, *a.loc, *a.rep, a.histories};
        EventClass eb{model, *b.loc, *b.rep, b.histories};
        bool le = event_leq(ea, eb);
        bool ge = event_leq(eb, ea);
        if (le && ge)
            return Rel::Eq;
        if (le)
            return Rel::Lt;
        if (ge)
            return Rel::Gt;
        return a.histories.intersects(b.histories, family) ? Rel::Slr : Rel::Incomp;
    }
    if (a.site && b.site) {
        // distinct choice sites of a pairwise space-like site family
        return *a.site == *b.site ? Rel::Eq : Rel::Slr;
    }
    throw UnsupportedError("no relation known between '" + a.id + "' and '" + b.id + "'");
}

bool TransitionSet::product() const {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i].id == pts[j].id && pts[i].chosen != pts[j].chosen)
                return false;
    return true;
}

int TransitionSet::point_index(const std::string& id) const {
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].id == id)
            return static_cast<int>(i);
    return -1;
}

void TransitionSet::choose(const std::vector<std::string>& labels) {
    if (labels.size() != pts.size())
        throw std::invalid_argument("expected " + std::to_string(pts.size()) +
                                    " outcome labels, got " + std::to_string(labels.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto& p = pts[i];
        p.chosen = -1;
        for (std::size_t c = 0; c < p.cells.size(); ++c)
            if (p.cells[c].label == labels[i]) {
                p.chosen = static_cast<int>(c);
                break;
            }
        if (p.chosen < 0 && labels[i].size() == 1 && isdigit(labels[i][0])) {
            int c = labels[i][0] - '0';
            if (c >= 0 && c < static_cast<int>(p.cells.size()))
                p.chosen = c;
        }
        if (p.chosen < 0)
            throw std::invalid_argument("point '" + p.id + "' has no outcome labeled '" +
                                        labels[i] + "'");
    }
}

} // namespace mbs
