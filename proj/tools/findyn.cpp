// findyn: finite dynamics toolbox front end.
//
// Exit codes: 0 = checks passed / object built, 1 = a check failed with a
// witness, 2 = usage, input or resource trouble. Reports are JSON on stdout
// and byte-identical across runs on identical inputs and caps; --timings
// adds wall-clock fields and gives that determinism up.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "findyn/constructions.hpp"
#include "findyn/gamma.hpp"
#include "findyn/json_io.hpp"
#include "findyn/relation.hpp"
#include "findyn/shimomura.hpp"
#include "findyn/system_map.hpp"
#include "findyn/verify.hpp"
#include "findyn/word.hpp"

using namespace findyn;

namespace {

using Clock = std::chrono::steady_clock;

struct Report {
    json j;
    bool timings = false;
    Clock::time_point start = Clock::now();

    explicit Report(const std::string& command) { j["command"] = command; }
    void finish(int exit_code) {
        j["exit"] = exit_code;
        if (timings)
            j["wall_ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
        std::cout << j.dump(2) << "\n";
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::argument, "cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// shape literal, inline JSON, or @file
FiniteSystem load_system(const std::string& text, Report& rep, const std::string& role) {
    std::string payload = text;
    if (!text.empty() && text[0] == '@') payload = slurp(text.substr(1));
    rep.j["inputs"][role] = digest(payload);
    if (!payload.empty() && (payload[0] == '{' || payload[0] == '[')) {
        json j = json::parse(payload);
        return system_from_json(j);
    }
    return parse_shape(payload);
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, std::string> out;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) fail(errc::argument, "--param needs key=value, got " + kv);
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

ShimomuraPrefix load_prefix(const std::string& name, const std::vector<std::string>& params,
                            int depth, const std::string& in_file, std::int64_t max_vertices,
                            Report& rep) {
    if (!in_file.empty()) {
        std::string payload = slurp(in_file);
        rep.j["inputs"]["prefix"] = digest(payload);
        return prefix_from_json(json::parse(payload));
    }
    if (name.empty()) fail(errc::argument, "need either --name or --in");
    auto parsed = parse_params(params);
    rep.j["inputs"]["builder"] = name;
    rep.j["inputs"]["params"] = parsed;
    rep.j["inputs"]["depth"] = depth;
    if (name == "CONSTANT_WORD")
        return constant_word_prefix(SemigroupWord(parsed.at("word")), depth, {max_vertices});
    return build_named_prefix(named_prefix_from_string(name), parsed, depth, {max_vertices});
}

json map_json_brief(const SystemMap& m) {
    json t = json::array();
    for (Vertex v : m.table()) t.push_back(v + 1);
    json out;
    out["table"] = std::move(t);
    out["surjective"] = m.surjective();
    out["factor"] = m.factor();
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite dynamics toolbox: relations as systems, maps, covers, prefixes, words"};
    app.require_subcommand(1);
    bool timings = false;
    app.add_flag("--timings", timings, "add wall-clock fields to the report");

    // classify
    auto* cmd_classify = app.add_subcommand("classify", "classify a surjective relation");
    std::string classify_system;
    int per_horizon = 32;
    cmd_classify->add_option("--system", classify_system, "shape literal, JSON, or @file")->required();
    cmd_classify->add_option("--per-horizon", per_horizon, "window for the Per report");

    // maps
    auto* cmd_maps = app.add_subcommand("maps", "enumerate system maps");
    std::string maps_from, maps_to, maps_mode = "all";
    bool maps_count_only = false;
    std::uint64_t maps_limit = 0;
    EnumCaps maps_caps;
    cmd_maps->add_option("--from", maps_from)->required();
    cmd_maps->add_option("--to", maps_to)->required();
    cmd_maps->add_option("--mode", maps_mode, "all | surjective | factor");
    cmd_maps->add_flag("--count-only", maps_count_only);
    cmd_maps->add_option("--limit", maps_limit, "stop after this many maps");
    cmd_maps->add_option("--max-domain", maps_caps.max_domain);
    cmd_maps->add_option("--max-codomain", maps_caps.max_codomain);
    cmd_maps->add_option("--max-nodes", maps_caps.max_nodes);

    // cover
    auto* cmd_cover = app.add_subcommand("cover", "edge-covering factor constructions");
    std::string cover_system, cover_kind = "dumbbell";
    cmd_cover->add_option("--system", cover_system)->required();
    cmd_cover->add_option("--kind", cover_kind, "loop | dumbbell | loop-union");

    // bound
    auto* cmd_bound = app.add_subcommand("bound", "positive mixture bound for a coprime pair");
    long bound_m = 0, bound_n = 0;
    cmd_bound->add_option("--m", bound_m)->required();
    cmd_bound->add_option("--n", bound_n)->required();

    // shimomura ...
    auto* cmd_shim = app.add_subcommand("shimomura", "inverse-sequence prefixes");
    cmd_shim->require_subcommand(1);
    std::string shim_name, shim_in, shim_out;
    std::vector<std::string> shim_params;
    int shim_depth = 4;
    std::int64_t shim_max_vertices = BuildLimits{}.max_level_vertices;
    auto add_prefix_opts = [&](CLI::App* c) {
        c->add_option("--name", shim_name, "THM_4_04 PROP_4_05 THM_4_08_STAR THM_4_09 THM_4_10 "
                                           "THM_4_15 THM_4_16 EXAMPLE_3 CONSTANT_WORD");
        c->add_option("--param", shim_params, "builder parameter key=value")->take_all();
        c->add_option("--depth", shim_depth);
        c->add_option("--in", shim_in, "prefix JSON file");
        c->add_option("--max-level-vertices", shim_max_vertices);
    };
    auto* shim_build = cmd_shim->add_subcommand("build", "build and emit a prefix");
    add_prefix_opts(shim_build);
    shim_build->add_option("--out", shim_out, "write the prefix JSON here instead of stdout");
    auto* shim_verify = cmd_shim->add_subcommand("verify", "bifurcation / V / reverse-V flags");
    add_prefix_opts(shim_verify);
    auto* shim_factoring = cmd_shim->add_subcommand("factoring", "search factoring counterexamples");
    add_prefix_opts(shim_factoring);
    int fac_k = 3, fac_n = 2, fac_m_max = 0;
    std::uint64_t fac_nodes = FactoringCaps{}.max_nodes;
    Vertex fac_enum_domain = 5000, fac_enum_codomain = 200;
    shim_factoring->add_option("--k", fac_k);
    shim_factoring->add_option("--n", fac_n);
    shim_factoring->add_option("--m-max", fac_m_max, "defaults to the prefix depth");
    shim_factoring->add_option("--max-nodes", fac_nodes);
    shim_factoring->add_option("--max-q1-domain", fac_enum_domain);
    shim_factoring->add_option("--max-q1-codomain", fac_enum_codomain);
    auto* shim_hitting = cmd_shim->add_subcommand("hitting", "per-level hitting status table");
    add_prefix_opts(shim_hitting);
    int hit_level = 2, hit_i = 1, hit_j = 1, hit_horizon = 32;
    shim_hitting->add_option("--level", hit_level);
    shim_hitting->add_option("--i", hit_i, "1-based vertex at the level");
    shim_hitting->add_option("--j", hit_j, "1-based vertex at the level");
    shim_hitting->add_option("--horizon", hit_horizon);

    // word ...
    auto* cmd_word = app.add_subcommand("word", "the {e,L} semigroup");
    cmd_word->require_subcommand(1);
    std::string w1, w2, word;
    auto* word_compose = cmd_word->add_subcommand("compose", "substitute w1 for the L's of w2");
    word_compose->add_option("--w1", w1)->required();
    word_compose->add_option("--w2", w2)->required();
    auto* word_map = cmd_word->add_subcommand("map", "the pointed-loop map of a word");
    long word_n = 1;
    word_map->add_option("--word", word)->required();
    word_map->add_option("--n", word_n)->required();
    auto* word_prefix = cmd_word->add_subcommand("prefix", "constant-word prefix");
    int word_depth = 5;
    word_prefix->add_option("--word", word)->required();
    word_prefix->add_option("--depth", word_depth);
    auto* word_mixing = cmd_word->add_subcommand("mixing", "hitting-time evidence for mixing");
    int mix_level = 2, mix_window = 100, mix_depth = 8;
    long mix_k_start = 0;
    word_mixing->add_option("--word", word)->required();
    word_mixing->add_option("--level", mix_level);
    word_mixing->add_option("--window", mix_window);
    word_mixing->add_option("--depth", mix_depth);
    word_mixing->add_option("--k-start", mix_k_start);
    auto* word_obstruction = cmd_word->add_subcommand("obstruction", "non-weak-mixing certificate");
    int obs_level = 3, obs_horizon = 200, obs_depth = 9;
    word_obstruction->add_option("--word", word)->required();
    word_obstruction->add_option("--level", obs_level);
    word_obstruction->add_option("--horizon", obs_horizon);
    word_obstruction->add_option("--depth", obs_depth);

    // export
    auto* cmd_export = app.add_subcommand("export", "DOT export of a system or prefix level");
    std::string export_system, export_out;
    int export_level = 0;
    cmd_export->add_option("--system", export_system, "shape literal, JSON, or @file");
    cmd_export->add_option("--name", shim_name, "prefix builder name");
    cmd_export->add_option("--param", shim_params, "builder parameter key=value")->take_all();
    cmd_export->add_option("--depth", shim_depth);
    cmd_export->add_option("--level", export_level, "level to export when using a prefix");
    cmd_export->add_option("--out", export_out);

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run a named verification bundle");
    std::string suite;
    bool list_suites = false;
    cmd_verify->add_option("suite", suite, "bundle name, see --list");
    cmd_verify->add_flag("--list", list_suites);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::ostringstream echo;
    for (int i = 1; i < argc; ++i) echo << (i > 1 ? " " : "") << argv[i];
    Report rep(echo.str());
    rep.timings = timings;

    try {
        if (*cmd_classify) {
            auto s = load_system(classify_system, rep, "system");
            rep.j["caps"]["per_horizon"] = per_horizon;
            rep.j["report"] = to_json(classify(s, per_horizon));
            rep.finish(0);
            return 0;
        }
        if (*cmd_maps) {
            auto from = std::make_shared<const FiniteSystem>(load_system(maps_from, rep, "from"));
            auto to = std::make_shared<const FiniteSystem>(load_system(maps_to, rep, "to"));
            MapMode mode;
            if (maps_mode == "all")
                mode = MapMode::all;
            else if (maps_mode == "surjective")
                mode = MapMode::surjective;
            else if (maps_mode == "factor")
                mode = MapMode::factor;
            else
                fail(errc::argument, "bad mode: " + maps_mode);
            rep.j["caps"]["max_domain"] = maps_caps.max_domain;
            rep.j["caps"]["max_codomain"] = maps_caps.max_codomain;
            rep.j["caps"]["max_nodes"] = maps_caps.max_nodes;
            std::uint64_t count = 0;
            json tables = json::array();
            enumerate_maps_visit(*from, *to, mode, maps_caps, [&](const std::vector<Vertex>& t) {
                ++count;
                if (!maps_count_only) {
                    json row = json::array();
                    for (Vertex v : t) row.push_back(v + 1);
                    tables.push_back(std::move(row));
                }
                return maps_limit == 0 || count < maps_limit;
            });
            rep.j["count"] = count;
            if (!maps_count_only) rep.j["maps"] = std::move(tables);
            rep.finish(0);
            return 0;
        }
        if (*cmd_cover) {
            auto s = std::make_shared<const FiniteSystem>(load_system(cover_system, rep, "system"));
            bool ok = false;
            if (cover_kind == "loop") {
                auto [l, m] = loop_cover(s);
                rep.j["cover"] = to_json(*l);
                rep.j["map"] = map_json_brief(m);
                ok = validate_map(m).factor;
            } else if (cover_kind == "dumbbell") {
                auto c = dumbbell_cover(s);
                json shapes = json::array();
                for (const auto& sh : c.shapes)
                    shapes.push_back(json::array({sh.n_in, sh.l, sh.m_out}));
                rep.j["shapes"] = std::move(shapes);
                rep.j["cover"] = to_json(*c.cover);
                rep.j["map"] = map_json_brief(c.onto);
                ok = validate_map(c.onto).factor;
            } else if (cover_kind == "loop-union") {
                auto [l, m] = loop_union_cover(s);
                rep.j["cover"] = to_json(*l);
                rep.j["map"] = map_json_brief(m);
                ok = validate_map(m).factor;
            } else {
                fail(errc::argument, "bad cover kind: " + cover_kind);
            }
            rep.j["revalidated"] = ok;
            rep.finish(ok ? 0 : 1);
            return ok ? 0 : 1;
        }
        if (*cmd_bound) {
            auto b = mixture_bound(bound_m, bound_n);
            rep.j["paper_bound"] = b.paper_bound;
            rep.j["exact_threshold"] = b.exact_threshold;
            rep.j["x"] = b.x;
            rep.j["y"] = b.y;
            rep.finish(0);
            return 0;
        }
        if (*cmd_shim) {
            rep.j["caps"]["max_level_vertices"] = shim_max_vertices;
            if (*shim_build) {
                auto p = load_prefix(shim_name, shim_params, shim_depth, shim_in, shim_max_vertices,
                                     rep);
                json pj = to_json(p);
                if (!shim_out.empty()) {
                    std::ofstream out(shim_out, std::ios::binary);
                    out << pj.dump(2) << "\n";
                    rep.j["written"] = shim_out;
                } else {
                    rep.j["prefix"] = std::move(pj);
                }
                json sizes = json::array();
                for (int n = 1; n <= p.depth(); ++n) sizes.push_back(p.level(n).size());
                rep.j["level_sizes"] = std::move(sizes);
                rep.finish(0);
                return 0;
            }
            if (*shim_verify) {
                auto p = load_prefix(shim_name, shim_params, shim_depth, shim_in, shim_max_vertices,
                                     rep);
                auto verdict = validate_prefix(p);
                rep.j["verdict"] = to_json(verdict);
                int code = verdict.all_resolved() ? 0 : 1;
                rep.finish(code);
                return code;
            }
            if (*shim_factoring) {
                auto p = load_prefix(shim_name, shim_params, shim_depth, shim_in, shim_max_vertices,
                                     rep);
                int m_max = fac_m_max == 0 ? p.depth() : fac_m_max;
                FactoringCaps fcaps;
                fcaps.max_level_vertices = shim_max_vertices;
                fcaps.max_nodes = fac_nodes;
                EnumCaps ecaps{fac_enum_domain, fac_enum_codomain, fac_nodes};
                rep.j["caps"]["m_max"] = m_max;
                rep.j["caps"]["max_nodes"] = fac_nodes;
                auto out = search_factoring_counterexample(p, fac_k, fac_n, m_max, fcaps, ecaps);
                rep.j["tested_q1"] = out.tested;
                if (out.q1) {
                    rep.j["counterexample"] = map_json_brief(*out.q1);
                    json skipped = json::array();
                    for (int m : out.details.skipped_levels) skipped.push_back(m);
                    rep.j["skipped_levels"] = std::move(skipped);
                    // re-validate before emitting
                    auto again = check_factoring(p, *out.q1, fac_k, fac_n, m_max, fcaps);
                    rep.j["revalidated"] =
                        again.status == FactoringOutcome::Status::absent_within;
                    rep.finish(1);
                    return 1;
                }
                rep.j["counterexample"] = nullptr;
                rep.finish(0);
                return 0;
            }
            if (*shim_hitting) {
                auto p = load_prefix(shim_name, shim_params, shim_depth, shim_in, shim_max_vertices,
                                     rep);
                auto table = limit_hitting(p, hit_level, hit_i - 1, hit_j - 1, hit_horizon);
                rep.j["hitting"] = to_json(table);
                rep.finish(0);
                return 0;
            }
        }
        if (*cmd_word) {
            if (*word_compose) {
                auto w = compose_words(SemigroupWord(w1), SemigroupWord(w2));
                rep.j["word"] = w.letters();
                rep.j["k"] = w.count_e();
                rep.j["K"] = w.count_L();
                rep.finish(0);
                return 0;
            }
            if (*word_map) {
                auto m = word_to_map(SemigroupWord(word), word_n);
                rep.j["domain_size"] = m.domain().size();
                rep.j["codomain_size"] = m.codomain().size();
                rep.j["map"] = map_json_brief(m);
                rep.j["roundtrip"] = m.codomain().size() >= 2 ? map_to_word(m).letters() : word;
                rep.finish(0);
                return 0;
            }
            if (*word_prefix) {
                auto p = constant_word_prefix(SemigroupWord(word), word_depth);
                json sizes = json::array();
                for (int n = 1; n <= p.depth(); ++n) sizes.push_back(p.level(n).size());
                rep.j["level_sizes"] = std::move(sizes);
                rep.j["verdict"] = to_json(validate_prefix(p));
                rep.finish(0);
                return 0;
            }
            if (*word_mixing) {
                auto e = mixing_evidence(SemigroupWord(word), mix_level, mix_window, mix_depth,
                                         mix_k_start);
                rep.j["level"] = e.level_n;
                rep.j["k_start"] = e.k_start;
                rep.j["window"] = e.window;
                rep.j["depth"] = e.depth;
                rep.j["all_present"] = e.all_present;
                json rows = json::array();
                for (const auto& r : e.rows) {
                    json row;
                    row["i"] = r.i;
                    row["absent_t"] = r.absent_t;
                    rows.push_back(std::move(row));
                }
                rep.j["rows"] = std::move(rows);
                rep.finish(e.all_present ? 0 : 1);
                return e.all_present ? 0 : 1;
            }
            if (*word_obstruction) {
                auto o = weak_mixing_obstruction(SemigroupWord(word), obs_level, obs_horizon,
                                                 obs_depth);
                rep.j["level"] = o.level_n;
                rep.j["horizon"] = o.horizon;
                rep.j["depth"] = o.depth;
                rep.j["all_certified"] = o.all_certified;
                json rows = json::array();
                for (const auto& r : o.rows) {
                    json row;
                    row["i"] = r.i;
                    row["certified"] = r.certified;
                    row["first_uncertified_t"] = r.first_uncertified_t;
                    rows.push_back(std::move(row));
                }
                rep.j["rows"] = std::move(rows);
                rep.finish(o.all_certified ? 0 : 1);
                return o.all_certified ? 0 : 1;
            }
        }
        if (*cmd_export) {
            std::string dot;
            if (!export_system.empty()) {
                auto s = load_system(export_system, rep, "system");
                dot = export_dot(s);
            } else {
                auto p = load_prefix(shim_name, shim_params, shim_depth, "", shim_max_vertices, rep);
                int lvl = export_level == 0 ? p.depth() : export_level;
                dot = export_dot(p.level(lvl), "level" + std::to_string(lvl));
            }
            if (!export_out.empty()) {
                std::ofstream out(export_out, std::ios::binary);
                out << dot;
                rep.j["written"] = export_out;
                rep.finish(0);
            } else {
                std::cout << dot; // raw DOT, no report wrapper
            }
            return 0;
        }
        if (*cmd_verify) {
            if (list_suites) {
                rep.j["suites"] = suite_names();
                rep.finish(0);
                return 0;
            }
            if (suite.empty()) fail(errc::argument, "verify needs a suite name or --list");
            auto report = run_suite(suite);
            json results = json::array();
            for (const auto& r : report.results) {
                json row;
                row["id"] = r.id;
                row["pass"] = r.pass;
                row["detail"] = r.detail;
                results.push_back(std::move(row));
            }
            rep.j["suite"] = report.name;
            rep.j["results"] = std::move(results);
            rep.j["all_pass"] = report.all_pass();
            int code = report.all_pass() ? 0 : 1;
            rep.finish(code);
            return code;
        }
    } catch (const error& e) {
        std::cerr << "error (" << errc_name(e.kind()) << "): " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error (decode): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
