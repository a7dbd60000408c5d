#include "mbs/model_io.hpp"

#include <fstream>
#include <sstream>

namespace mbs {

namespace {

struct Tokenizer {
    std::string line;
    int line_no = 0;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_no, static_cast<int>(pos) + 1);
    }
    void skip_ws() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t'))
            ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= line.size() || line[pos] == '#';
    }
    std::string token() {
        skip_ws();
        if (done())
            fail("unexpected end of line");
        std::size_t start = pos;
        int depth = 0;
        while (pos < line.size()) {
            char c = line[pos];
            if (c == '(')
                ++depth;
            if (c == ')')
                --depth;
            if (depth == 0 && (c == ' ' || c == '\t'))
                break;
            ++pos;
        }
        return line.substr(start, pos - start);
    }
    std::string rest() {
        skip_ws();
        return line.substr(pos);
    }
    void expect(const std::string& word) {
        std::string t = token();
        if (t != word)
            fail("expected '" + word + "', found '" + t + "'");
    }
};

std::pair<std::string, std::string> split_kv(Tokenizer& tk, const std::string& tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
        tk.fail("expected key=value, found '" + tok + "'");
    return {tok.substr(0, eq), tok.substr(eq + 1)};
}

void verify_cone_invariants(const MbsModel& m) {
    const auto& sample = m.sites.sample;
    long n = static_cast<long>(sample.size());
    std::vector<std::pair<Rat, Rat>> dirs(n);
    for (long r = 1; r <= n; ++r) {
        const Point4& e = sample[static_cast<std::size_t>(r - 1)];
        if (e.t != Rat(-r) || e.x3 != 0)
            throw ParseError("cone site " + std::to_string(r - 1) + " must sit at time " +
                             std::to_string(-r));
        Rat rsq = e.x1 * e.x1 + e.x2 * e.x2;
        if (rsq != Rat(r) * Rat(r))
            throw ParseError("cone site " + std::to_string(r - 1) + " is off the light cone");
        dirs[r - 1] = {e.x1 / Rat(r), e.x2 / Rat(r)};
    }
    for (long r = 0; r < n; ++r)
        for (long s = r + 1; s < n; ++s) {
            Rat dot = dirs[r].first * dirs[s].first + dirs[r].second * dirs[s].second;
            if (!(dot > 0 && dot < 1))
                throw ParseError("cone sites " + std::to_string(r) + "," + std::to_string(s) +
                                 " break the direction invariant");
        }
    for (long r = 5; r <= n; ++r) {
        Rat dot1 = dirs[0].first * dirs[r - 1].first + dirs[0].second * dirs[r - 1].second;
        if (!(2 * Rat(r) * dot1 < 1))
            throw ParseError("cone site " + std::to_string(r - 1) +
                             " breaks the first-direction decay invariant");
    }
}

} // namespace

MbsModel parse_model(std::istream& in, const std::string& source_name) {
    MbsModel m;
    bool family_seen = false;
    std::vector<std::pair<long, Point4>> site_lines;
    std::string raw;
    Tokenizer tk;
    while (std::getline(in, raw)) {
        tk.line = raw;
        tk.line_no += 1;
        tk.pos = 0;
        if (tk.done())
            continue;
        std::string head = tk.token();
        if (head == "model") {
            m.name = tk.token();
        } else if (head == "family") {
            family_seen = true;
            std::string kind = tk.token();
            if (kind == "explicit") {
                std::vector<std::string> labels;
                while (!tk.done())
                    labels.push_back(tk.token());
                if (labels.empty())
                    tk.fail("explicit family needs at least one scenario");
                m.family = explicit_family(std::move(labels));
            } else if (kind == "finitely-many-zeros") {
                m.family = symbolic_family(FamilyKind::FinitelyManyZeros);
            } else if (kind == "free-binary") {
                m.family = symbolic_family(FamilyKind::FreeBinary);
            } else if (kind == "all-strings") {
                m.family = symbolic_family(FamilyKind::AllStrings, std::stol(tk.token()));
            } else if (kind == "at-most-k-zeros") {
                m.family = symbolic_family(FamilyKind::AtMostKZeros, std::stol(tk.token()));
            } else {
                tk.fail("unknown family kind '" + kind + "'");
            }
        } else if (head == "split") {
            if (!family_seen)
                tk.fail("family must be declared before splitting data");
            std::string a = tk.token(), b = tk.token();
            tk.expect(":");
            int ia = m.family.label_index(a), ib = m.family.label_index(b);
            if (ia < 0 || ib < 0)
                tk.fail("unknown scenario in split line");
            if (ia == ib)
                tk.fail("split needs two distinct scenarios");
            auto& bucket = m.splitting[PairKey(ia, ib)];
            while (!tk.done())
                bucket.push_back(point_from_string(tk.token()));
        } else if (head == "limit") {
            std::string a = tk.token(), b = tk.token();
            tk.expect(":");
            int ia = m.family.label_index(a), ib = m.family.label_index(b);
            if (ia < 0 || ib < 0)
                tk.fail("unknown scenario in limit line");
            LimitSequence seq;
            while (!tk.done()) {
                auto [key, value] = split_kv(tk, tk.token());
                if (key == "limit")
                    seq.limit = point_from_string(value);
                else if (key == "dir")
                    seq.dir = point_from_string(value);
                else if (key == "first")
                    seq.first = std::stol(value);
                else
                    tk.fail("unknown limit attribute '" + key + "'");
            }
            m.limits[PairKey(ia, ib)].push_back(seq);
        } else if (head == "site") {
            long index = std::stol(tk.token());
            site_lines.emplace_back(index, point_from_string(tk.token()));
        } else if (head == "sites-tail") {
            std::string kind = tk.token();
            if (kind == "affine") {
                m.sites.tail = TailKind::Affine;
                while (!tk.done()) {
                    auto [key, value] = split_kv(tk, tk.token());
                    if (key == "base")
                        m.sites.base = point_from_string(value);
                    else if (key == "step")
                        m.sites.step = point_from_string(value);
                    else
                        tk.fail("unknown affine attribute '" + key + "'");
                }
            } else if (kind == "invseq") {
                m.sites.tail = TailKind::InvSeq;
                while (!tk.done()) {
                    auto [key, value] = split_kv(tk, tk.token());
                    if (key == "limit")
                        m.sites.limit = point_from_string(value);
                    else if (key == "dir")
                        m.sites.dir = point_from_string(value);
                    else if (key == "first")
                        m.sites.first = std::stol(value);
                    else
                        tk.fail("unknown invseq attribute '" + key + "'");
                }
            } else if (kind == "cone") {
                m.sites.tail = TailKind::Cone;
            } else {
                tk.fail("unknown sites-tail kind '" + kind + "'");
            }
        } else if (head == "chain") {
            ChainDescriptor chain;
            chain.name = tk.token();
            std::string next = tk.token();
            if (next == ":") {
                while (!tk.done()) {
                    std::string tok = tk.token();
                    auto at = tok.rfind('@');
                    if (at == std::string::npos)
                        tk.fail("chain element must be (point)@scenario");
                    chain.elems.emplace_back(point_from_string(tok.substr(0, at)),
                                             m.family.scenario_from_string(tok.substr(at + 1)));
                }
            } else if (next == "affine") {
                chain.symbolic = true;
                while (!tk.done()) {
                    auto [key, value] = split_kv(tk, tk.token());
                    if (key == "base")
                        chain.base = point_from_string(value);
                    else if (key == "step")
                        chain.step = point_from_string(value);
                    else if (key == "count")
                        chain.count = std::stol(value);
                    else if (key == "rule") {
                        if (value == "prefix-zeros")
                            chain.rule = ChainDescriptor::Rule::PrefixZeros;
                        else if (value.rfind("fixed:", 0) == 0) {
                            chain.rule = ChainDescriptor::Rule::FixedScenario;
                            chain.fixed = m.family.scenario_from_string(value.substr(6));
                        } else
                            tk.fail("unknown chain rule '" + value + "'");
                    } else
                        tk.fail("unknown chain attribute '" + key + "'");
                }
            } else {
                tk.fail("chain needs ':' or 'affine'");
            }
            m.chains.push_back(std::move(chain));
        } else if (head == "annotate") {
            std::string scenario = tk.token();
            Point4 p = point_from_string(tk.token());
            tk.expect(":");
            m.annotations[{scenario, p}] = tk.rest();
        } else {
            tk.fail("unknown directive '" + head + "' in " + source_name);
        }
    }
    if (!family_seen)
        throw ParseError("model has no family declaration", tk.line_no, 1);

    // dense site indices from 0
    m.sites.sample.resize(site_lines.size());
    std::vector<bool> seen(site_lines.size(), false);
    for (const auto& [index, p] : site_lines) {
        if (index < 0 || index >= static_cast<long>(site_lines.size()) ||
            seen[static_cast<std::size_t>(index)])
            throw ParseError("site indices must be dense from 0; bad index " +
                             std::to_string(index));
        seen[static_cast<std::size_t>(index)] = true;
        m.sites.sample[static_cast<std::size_t>(index)] = p;
    }

    if (m.sites.tail == TailKind::Affine) {
        for (long i = 0; i < m.sites.sample_count(); ++i) {
            Rat k(i);
            Point4 expect(m.sites.base.t + k * m.sites.step.t, m.sites.base.x1 + k * m.sites.step.x1,
                          m.sites.base.x2 + k * m.sites.step.x2,
                          m.sites.base.x3 + k * m.sites.step.x3);
            if (!(m.sites.sample[static_cast<std::size_t>(i)] == expect))
                throw ParseError("affine site " + std::to_string(i) +
                                 " does not match base + i*step");
        }
    }
    if (m.sites.tail == TailKind::Cone)
        verify_cone_invariants(m);
    if (m.family.symbolic() && !m.splitting.empty())
        throw ParseError("symbolic families use sites, not split lines");
    if (!m.family.symbolic() && !m.sites.sample.empty())
        throw ParseError("explicit families use split lines, not sites");
    return m;
}

MbsModel parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open model file '" + path + "'");
    return parse_model(in, path);
}

std::string serialize_model(const MbsModel& m) {
    std::ostringstream out;
    out << "model " << (m.name.empty() ? "unnamed" : m.name) << "\n";
    out << "family " << m.family.describe() << "\n";
    for (long i = 0; i < m.sites.sample_count(); ++i)
        out << "site " << i << " " << m.sites.sample[static_cast<std::size_t>(i)].to_string()
            << "\n";
    switch (m.sites.tail) {
    case TailKind::None:
        break;
    case TailKind::Affine:
        out << "sites-tail affine base=" << m.sites.base.to_string()
            << " step=" << m.sites.step.to_string() << "\n";
        break;
    case TailKind::InvSeq:
        out << "sites-tail invseq limit=" << m.sites.limit.to_string()
            << " dir=" << m.sites.dir.to_string() << " first=" << m.sites.first << "\n";
        break;
    case TailKind::Cone:
        out << "sites-tail cone\n";
        break;
    }
    for (const auto& [key, pts] : m.splitting) {
        out << "split " << m.family.labels[key.a] << " " << m.family.labels[key.b] << " :";
        for (const auto& p : pts)
            out << " " << p.to_string();
        out << "\n";
    }
    for (const auto& [key, seqs] : m.limits)
        for (const auto& seq : seqs)
            out << "limit " << m.family.labels[key.a] << " " << m.family.labels[key.b]
                << " : limit=" << seq.limit.to_string() << " dir=" << seq.dir.to_string()
                << " first=" << seq.first << "\n";
    for (const auto& chain : m.chains) {
        if (!chain.symbolic) {
            out << "chain " << chain.name << " :";
            for (const auto& [p, s] : chain.elems)
                out << " " << p.to_string() << "@" << m.family.scenario_to_string(s);
            out << "\n";
        } else {
            out << "chain " << chain.name << " affine base=" << chain.base.to_string()
                << " step=" << chain.step.to_string() << " count=" << chain.count << " rule=";
            if (chain.rule == ChainDescriptor::Rule::PrefixZeros)
                out << "prefix-zeros";
            else
                out << "fixed:" << m.family.scenario_to_string(chain.fixed);
            out << "\n";
        }
    }
    for (const auto& [key, text] : m.annotations)
        out << "annotate " << key.first << " " << key.second.to_string() << " : " << text << "\n";
    return out.str();
}

} // namespace mbs
