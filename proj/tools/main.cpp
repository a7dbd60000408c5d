// mbs: build finitely presented Minkowskian branching structures, compute
// their causal and modal structure, and run the funny-business detectors.

#include "CLI11.hpp"

#include "mbs/catalog.hpp"
#include "mbs/detect.hpp"
#include "mbs/model_io.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

using namespace mbs;

namespace {

struct ModelArgs {
    std::string file;
    std::string catalog;
    std::vector<std::string> params;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
    auto* file = cmd->add_option("--model", args.file, "model file to load");
    auto* cat = cmd->add_option("--catalog", args.catalog, "catalog entry to generate");
    cmd->add_option("--param", args.params, "catalog parameter k=v (repeatable)");
    file->excludes(cat);
}

std::map<std::string, std::string> param_map(const std::vector<std::string>& params) {
    std::map<std::string, std::string> out;
    for (const auto& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--param expects k=v, got '" + p + "'");
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

// the loaded structure a command works on
struct Loaded {
    CatalogProduct product; // owns the model when generated
    std::unique_ptr<MbsModel> parsed;
    const MbsModel* model = nullptr;

    static Loaded from(const ModelArgs& args) {
        Loaded out;
        if (!args.catalog.empty()) {
            out.product = catalog_build(args.catalog, param_map(args.params));
            out.model = out.product.model.get();
        } else if (!args.file.empty()) {
            out.parsed = std::make_unique<MbsModel>(parse_model_file(args.file));
            out.model = out.parsed.get();
        } else {
            throw std::invalid_argument("give either --model FILE or --catalog NAME");
        }
        return out;
    }
};

std::pair<Point4, Scenario> parse_event(const MbsModel& m, const std::string& text) {
    auto at = text.rfind('@');
    if (at == std::string::npos)
        throw std::invalid_argument("expected (point)@scenario, got '" + text + "'");
    return {point_from_string(text.substr(0, at)), m.scenario(text.substr(at + 1))};
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == sep) {
            if (i > start)
                out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

// transition structure for the detector commands: either the catalog
// entry's own skeleton or explicit --points over the loaded model
TransitionSet detector_structure(Loaded& loaded, const std::string& points_arg) {
    if (!points_arg.empty()) {
        TransitionSet T;
        T.name = loaded.model->name;
        T.model = loaded.model;
        T.family = loaded.model->family;
        for (const auto& item : split_list(points_arg, ';')) {
            auto [loc, rep] = parse_event(*loaded.model, item);
            TransitionPoint p;
            p.id = item;
            p.loc = loc;
            p.rep = rep;
            EventClass e = event_class(*loaded.model, loc, rep);
            p.histories = e.members;
            auto cells = elementary_possibilities(*loaded.model, e);
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (cells[c].label.empty())
                    cells[c].label = std::to_string(c);
            p.cells = std::move(cells);
            T.pts.push_back(std::move(p));
        }
        return T;
    }
    if (loaded.product.transitions)
        return *loaded.product.transitions;
    throw std::invalid_argument(
        "this command needs --points \"(p)@scen;...\" or a catalog entry with a built-in "
        "transition structure");
}

ZeroOneRule rule_or_default(Loaded& loaded, const std::string& f_arg) {
    if (!f_arg.empty())
        return ZeroOneRule::parse(f_arg);
    if (loaded.product.default_rule)
        return *loaded.product.default_rule;
    throw std::invalid_argument("give --f (zeros | ones | zeros+1@{..} | ones+0@{..})");
}

std::vector<Rat> parse_deltas(const std::vector<std::string>& deltas) {
    std::vector<Rat> out;
    for (const auto& d : deltas)
        out.push_back(rat_from_string(d));
    return out;
}

void emit(const std::string& certificate, const std::string& summary) {
    std::cout << certificate;
    std::cout << "-- summary --\n" << summary << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minkowskian branching structures: exact causal/modal structure and "
                 "funny-business detection"};
    app.require_subcommand(1);

    ModelArgs margs;
    std::string a_arg, b_arg, at_arg, pair_arg, f_arg, points_arg, x_arg, apex_arg, out_arg,
        chain_arg;
    std::vector<std::string> delta_args;
    int jobs = 1;
    long steps = 8;
    bool no_prune = false;

    auto* validate_cmd = app.add_subcommand("validate", "check the presentation conditions");
    add_model_options(validate_cmd, margs);

    auto* order_cmd = app.add_subcommand("order", "compare two events in the quotient order");
    add_model_options(order_cmd, margs);
    order_cmd->add_option("--a", a_arg, "(point)@scenario")->required();
    order_cmd->add_option("--b", b_arg, "(point)@scenario")->required();

    auto* slr_cmd = app.add_subcommand("slr", "space-like relatedness of two events");
    add_model_options(slr_cmd, margs);
    slr_cmd->add_option("--a", a_arg, "(point)@scenario")->required();
    slr_cmd->add_option("--b", b_arg, "(point)@scenario")->required();

    auto* choice_cmd = app.add_subcommand("choice-points", "generated and limit choice points");
    add_model_options(choice_cmd, margs);
    choice_cmd->add_option("--pair", pair_arg, "scenarioA,scenarioB")->required();
    choice_cmd->add_option("--at", at_arg, "classify one point (point) instead of listing");

    auto* poss_cmd = app.add_subcommand("possibilities", "elementary possibilities at an event");
    add_model_options(poss_cmd, margs);
    poss_cmd->add_option("--at", at_arg, "(point)@scenario")->required();

    auto* finfb_cmd = app.add_subcommand("finfb", "finitary funny business search");
    add_model_options(finfb_cmd, margs);
    finfb_cmd->add_option("--f", f_arg, "outcome labels, comma separated");
    finfb_cmd->add_option("--points", points_arg, "(p)@scen;... transition points");
    finfb_cmd->add_option("--jobs", jobs, "parallel workers for the subset search");
    finfb_cmd->add_flag("--no-prune", no_prune, "disable monotone pruning");

    auto* inffb_cmd = app.add_subcommand("inffb", "infinitary funny business check");
    add_model_options(inffb_cmd, margs);
    inffb_cmd->add_option("--f", f_arg, "zeros | ones | zeros+1@{..}");

    auto* cfb_cmd = app.add_subcommand("cfb", "combinatorial funny business check");
    add_model_options(cfb_cmd, margs);
    cfb_cmd->add_option("--f", f_arg, "outcome labels or site rule");
    cfb_cmd->add_option("--points", points_arg, "(p)@scen;... transition points");

    auto* eps_cmd = app.add_subcommand("epsfb", "epsilon funny business check");
    add_model_options(eps_cmd, margs);
    eps_cmd->add_option("--f", f_arg, "site rule");
    eps_cmd->add_option("--delta", delta_args, "extra neighborhood radius p/q (repeatable)");

    auto* posta_cmd = app.add_subcommand("postulate-a", "postulate A via the epsilon equivalence");
    add_model_options(posta_cmd, margs);
    posta_cmd->add_option("--f", f_arg, "site rule");
    posta_cmd->add_option("--delta", delta_args, "extra neighborhood radius (repeatable)");

    auto* postb_cmd = app.add_subcommand("postulate-b", "postulate B for a membership rule");
    add_model_options(postb_cmd, margs);
    postb_cmd->add_option("--x", x_arg, "membership rule (zeros | ones | ...)");
    postb_cmd->add_option("--points", points_arg, "finite set as (p)@scen;...");

    auto* locate_cmd = app.add_subcommand("locate", "cone localization of funny business");
    add_model_options(locate_cmd, margs);
    locate_cmd->add_option("--f", f_arg, "outcome labels or site rule");
    locate_cmd->add_option("--points", points_arg, "(p)@scen;... transition points");
    locate_cmd->add_option("--apex", apex_arg, "(point): scan base in the reduced set")
        ->required();
    locate_cmd->add_option("--delta", delta_args, "extra lining width (repeatable)");

    auto* mingap_cmd = app.add_subcommand("mingap", "uniform-gap condition and chain construction");
    add_model_options(mingap_cmd, margs);
    mingap_cmd->add_option("--delta", delta_args, "time shift p/q")->required();
    mingap_cmd->add_option("--f", f_arg, "site rule");
    mingap_cmd->add_option("--steps", steps, "sampled chain steps");

    auto* chain_cmd = app.add_subcommand("chain", "compactness witness along a named chain");
    add_model_options(chain_cmd, margs);
    chain_cmd->add_option("--name", chain_arg, "chain name from the model")->required();

    auto* catalog_cmd = app.add_subcommand("catalog", "list or generate catalog entries");
    auto* catalog_list = catalog_cmd->add_subcommand("list", "list entries");
    auto* catalog_gen = catalog_cmd->add_subcommand("gen", "generate an entry");
    std::string gen_name;
    std::vector<std::string> gen_params;
    catalog_gen->add_option("name", gen_name, "entry name")->required();
    catalog_gen->add_option("--param", gen_params, "parameter k=v (repeatable)");
    catalog_gen->add_option("-o,--out", out_arg, "write the model file here");

    auto* plot_cmd = app.add_subcommand("plot", "render a 2D model as SVG");
    add_model_options(plot_cmd, margs);
    plot_cmd->add_option("-o,--out", out_arg, "output SVG path")->required();

    try {
        app.parse(argc, argv);

        if (validate_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            ValidationReport r = validate(*loaded.model);
            emit("== mbs validate ==\nmodel: " + loaded.model->name + "\n" + r.render(),
                 r.clean() ? "presentation valid" : "presentation has violations (see above)");
        } else if (order_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            auto [pa, sa] = parse_event(*loaded.model, a_arg);
            auto [pb, sb] = parse_event(*loaded.model, b_arg);
            EventClass ea = event_class(*loaded.model, pa, sa);
            EventClass eb = event_class(*loaded.model, pb, sb);
            bool ab = event_leq(ea, eb), ba = event_leq(eb, ea);
            std::string cert = "== mbs order ==\nmodel: " + loaded.model->name + "\n";
            cert += "a: " + ea.to_string() + " members " +
                    ea.members.to_string(loaded.model->family) + "\n";
            cert += "b: " + eb.to_string() + " members " +
                    eb.members.to_string(loaded.model->family) + "\n";
            cert += std::string("a <= b: ") + (ab ? "yes" : "no") + "\n";
            cert += std::string("b <= a: ") + (ba ? "yes" : "no") + "\n";
            emit(cert, ab && ba ? "the events coincide"
                                : (ab ? "a precedes b" : (ba ? "b precedes a" : "incomparable")));
        } else if (slr_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            auto [pa, sa] = parse_event(*loaded.model, a_arg);
            auto [pb, sb] = parse_event(*loaded.model, b_arg);
            EventClass ea = event_class(*loaded.model, pa, sa);
            EventClass eb = event_class(*loaded.model, pb, sb);
            bool s = event_slr(ea, eb);
            std::string cert = "== mbs slr ==\nmodel: " + loaded.model->name + "\n";
            cert += "locations space-like: " + std::string(slr(pa, pb) ? "yes" : "no") + "\n";
            cert += "share a history: " +
                    std::string(ea.members.intersects(eb.members, loaded.model->family) ? "yes"
                                                                                        : "no") +
                    "\n";
            emit(cert, s ? "events are space-like related" : "events are not space-like related");
        } else if (choice_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            auto labels = split_list(pair_arg, ',');
            if (labels.size() != 2)
                throw std::invalid_argument("--pair expects scenarioA,scenarioB");
            Scenario a = loaded.model->scenario(labels[0]);
            Scenario b = loaded.model->scenario(labels[1]);
            std::string cert = "== mbs choice-points ==\nmodel: " + loaded.model->name + "\n";
            if (!at_arg.empty()) {
                Point4 x = point_from_string(at_arg);
                ChoiceVerdict v = classify_choice_point(*loaded.model, x, a, b);
                cert += "point " + x.to_string() + ": " + to_string(v) + "\n";
                emit(cert, std::string("choice point: ") + to_string(v));
            } else {
                auto gen = generated_choice_points(*loaded.model, a, b);
                cert += "generated choice points: " + std::to_string(gen.size()) + "\n";
                for (const auto& e : gen)
                    cert += "  " + e.location.to_string() + " members " +
                            e.members.to_string(loaded.model->family) + "\n";
                if (!loaded.model->indexed()) {
                    PairKey key(a.label, b.label);
                    auto lit = loaded.model->limits.find(key);
                    if (lit != loaded.model->limits.end())
                        for (const auto& seq : lit->second) {
                            ChoiceVerdict v =
                                classify_choice_point(*loaded.model, seq.limit, a, b);
                            cert += "declared limit " + seq.limit.to_string() + ": " +
                                    to_string(v) + " (not generated)\n";
                        }
                }
                emit(cert, "listed generated choice points and declared limits");
            }
        } else if (poss_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            auto [p, s] = parse_event(*loaded.model, at_arg);
            EventClass e = event_class(*loaded.model, p, s);
            auto cells = elementary_possibilities(*loaded.model, e);
            std::string cert = "== mbs possibilities ==\nmodel: " + loaded.model->name + "\n";
            cert += "event: " + e.to_string() + "\n";
            for (std::size_t i = 0; i < cells.size(); ++i)
                cert += "  cell " + std::to_string(i) + ": " +
                        cells[i].members.to_string(loaded.model->family) +
                        (cells[i].label.empty() ? "" : " [" + cells[i].label + "]") + "\n";
            emit(cert, std::to_string(cells.size()) + " elementary possibilit" +
                           (cells.size() == 1 ? "y" : "ies"));
        } else if (finfb_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            TransitionSet T = detector_structure(loaded, points_arg);
            if (!f_arg.empty())
                T.choose(split_list(f_arg, ','));
            FinfbResult r = check_finfb(T, jobs, !no_prune);
            emit("== mbs finfb ==\n" + r.render(T),
                 r.funny ? "FINFB: a space-like pair with empty joint outcome"
                         : "no finitary funny business");
        } else if (inffb_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            ZeroOneRule f = rule_or_default(loaded, f_arg);
            InffbResult r = check_inffb(loaded.model->family, loaded.model->sites, f);
            emit("== mbs inffb ==\n" + r.render(loaded.model->family),
                 r.funny ? "INFFB: every finite stage is possible, the whole is not"
                         : "no infinitary funny business");
        } else if (cfb_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            bool symbolic = loaded.model->indexed() && points_arg.empty();
            if (symbolic) {
                ZeroOneRule f = rule_or_default(loaded, f_arg);
                CfbResult r = check_cfb_symbolic(loaded.model->family, loaded.model->sites, f);
                TransitionSet dummy;
                dummy.family = loaded.model->family;
                emit("== mbs cfb ==\n" + r.render(dummy),
                     r.funny ? "CFB: combinatorially consistent, jointly impossible"
                             : "no combinatorial funny business");
            } else {
                TransitionSet T = detector_structure(loaded, points_arg);
                if (!f_arg.empty())
                    T.choose(split_list(f_arg, ','));
                CfbResult r = check_cfb(T);
                emit("== mbs cfb ==\n" + r.render(T),
                     r.funny ? "CFB: combinatorially consistent, jointly impossible"
                             : "no combinatorial funny business");
            }
        } else if (eps_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            ZeroOneRule f = rule_or_default(loaded, f_arg);
            EpsResult r = check_epsfb(*loaded.model, f, parse_deltas(delta_args));
            emit("== mbs epsfb ==\n" + r.render(),
                 r.funny ? "EPSFB: some reduced-set point has only empty neighborhoods"
                         : "no epsilon funny business");
        } else if (posta_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            ZeroOneRule f = rule_or_default(loaded, f_arg);
            PostAResult r = check_postulate_a(*loaded.model, f, parse_deltas(delta_args));
            emit("== mbs postulate-a ==\n" + r.render(),
                 r.holds ? "postulate A holds" : "postulate A fails");
        } else if (postb_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            PostBResult r;
            if (!points_arg.empty()) {
                std::vector<std::pair<std::string, ScenarioSet>> xs;
                for (const auto& item : split_list(points_arg, ';')) {
                    auto [p, s] = parse_event(*loaded.model, item);
                    xs.emplace_back(item, event_class(*loaded.model, p, s).members);
                }
                r = check_postulate_b_finite(loaded.model->family, xs);
            } else {
                ZeroOneRule x{0, {}};
                if (!x_arg.empty())
                    x = ZeroOneRule::parse(x_arg);
                else if (loaded.product.x_rule)
                    x = *loaded.product.x_rule;
                else
                    throw std::invalid_argument("give --x RULE or --points LIST");
                r = check_postulate_b(loaded.model->family, x);
            }
            std::string cert = "== mbs postulate-b ==\n";
            if (!loaded.product.x_note.empty() && points_arg.empty() && x_arg.empty())
                cert += "set: " + loaded.product.x_note + "\n";
            cert += r.render(loaded.model->family);
            emit(cert, r.holds ? "postulate B holds" : "postulate B fails");
        } else if (locate_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            Point4 apex = point_from_string(apex_arg);
            bool symbolic = loaded.model->indexed() && points_arg.empty();
            if (symbolic) {
                ZeroOneRule f = rule_or_default(loaded, f_arg);
                LocateResult r =
                    locate_cone_boundary_symbolic(*loaded.model, f, apex, parse_deltas(delta_args));
                emit("== mbs locate ==\n" + r.render(), "scan finished");
            } else {
                TransitionSet T = detector_structure(loaded, points_arg);
                if (!f_arg.empty())
                    T.choose(split_list(f_arg, ','));
                LocateResult r = locate_cone_boundary(T, apex);
                emit("== mbs locate ==\n" + r.render(), "scan finished");
            }
        } else if (mingap_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            if (delta_args.size() != 1)
                throw std::invalid_argument("mingap takes exactly one --delta");
            ZeroOneRule f = rule_or_default(loaded, f_arg);
            MingapResult r =
                check_min_gap_no_inffb(*loaded.model, rat_from_string(delta_args[0]), f, steps);
            emit("== mbs mingap ==\n" + r.render(loaded.model->family),
                 r.verdict_none ? "no infinitary funny business from this site family"
                                : "condition or premises fail; see the report");
        } else if (chain_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            const ChainDescriptor* chain = loaded.model->chain(chain_arg);
            if (!chain)
                throw std::invalid_argument("no chain named '" + chain_arg + "' in the model");
            ChainWitness w = chain_compactness_witness(*loaded.model, *chain);
            std::string cert = "== mbs chain ==\nmodel: " + loaded.model->name + "\nchain: " +
                               chain->name + "\n" + w.certificate(*loaded.model);
            emit(cert, w.has_witness
                           ? "compactness witness found"
                           : "empty intersection: no scenario survives the whole chain");
        } else if (catalog_cmd->parsed()) {
            if (catalog_gen->parsed()) {
                CatalogProduct p = catalog_build(gen_name, param_map(gen_params));
                std::string text = serialize_model(*p.model);
                if (!out_arg.empty()) {
                    std::ofstream out(out_arg);
                    if (!out)
                        throw std::invalid_argument("cannot write '" + out_arg + "'");
                    out << text;
                    emit("== mbs catalog gen ==\nwrote: " + out_arg + "\n",
                         "model written to " + out_arg);
                } else {
                    emit("== mbs catalog gen ==\n" + text, "model serialized above");
                }
            } else {
                (void)catalog_list;
                std::string cert = "== mbs catalog ==\n";
                for (const auto& e : catalog_entries()) {
                    cert += e.name + " [" + e.params + "]\n  " + e.note + "\n";
                    for (const auto& [check, verdict] : e.expected)
                        cert += "    " + check + " -> " + verdict + "\n";
                }
                emit(cert, std::to_string(catalog_entries().size()) + " catalog entries");
            }
        } else if (plot_cmd->parsed()) {
            Loaded loaded = Loaded::from(margs);
            std::string svg = render_svg(*loaded.model);
            std::ofstream out(out_arg, std::ios::binary);
            if (!out)
                throw std::invalid_argument("cannot write '" + out_arg + "'");
            out << svg;
            emit("== mbs plot ==\nwrote: " + out_arg + "\n", "SVG written to " + out_arg);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ParseError& e) {
        std::cerr << "parse error";
        if (e.line)
            std::cerr << " at line " << e.line << ", column " << e.column;
        std::cerr << ": " << e.what() << "\n";
        return 1;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
