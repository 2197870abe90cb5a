// Command-line front end. Every subcommand reads JSON documents, calls one
// library operation and prints a JSON report (DOT for `dot`).
//
// Exit codes: 0 success, 1 domain error (bad document, refuted structure,
// failed check), 2 usage error (flags, unreadable files, bad arguments).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "treeds/amalgam.hpp"
#include "treeds/corpus.hpp"
#include "treeds/fraisse.hpp"
#include "treeds/io.hpp"
#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

using namespace treeds;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised after the report has been written, when the report says "no".
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + out + "'");
    f << text;
}

void emit(const std::string& out, const Json& j) { write_text(out, j.dump(2) + "\n"); }

Json load_json(const std::string& path) {
    std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("/", path + ": malformed JSON: " + e.what());
    }
}

bool is_tree_doc(const Json& j) { return j.is_object() && j.contains("vertices"); }

TreeOfDSets load_tree(const std::string& path) {
    Json j = load_json(path);
    if (!is_tree_doc(j)) throw ParseError("/", path + ": expected a tree document");
    return tree_from_json(j);
}

// A tree document is realized; a relation dump is taken as it stands.
LStructure load_structure(const std::string& path) {
    Json j = load_json(path);
    if (is_tree_doc(j)) return realize(tree_from_json(j)).ls;
    return relations_from_json(j);
}

Json element_map(const TreeOfDSets& from, const TreeOfDSets& to, const Embedding& e) {
    Json m = Json::object();
    auto a = from.domain(), b = to.domain();
    for (size_t i = 0; i < a.size(); ++i) m[a[i]] = b[e.elementMap[i]];
    return m;
}

Json violations_json(const ValidationReport& r) {
    Json v = Json::array();
    for (auto& x : r.violations) v.push_back({{"where", x.where}, {"rule", x.rule}});
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void need_inputs(const std::vector<std::string>& in, size_t n, const char* what) {
    if (in.size() != n) throw UsageError(std::string("expected ") + std::to_string(n) + " --inputs (" + what + ")");
}

const char* kApproximation =
    "Stages are finite substructures of the limit, listed from below: each stage embeds in the next by the "
    "identity on element names. Richness counts extensions realized inside the stage only, so it is a lower "
    "bound on what the limit satisfies. Orbit counts are taken on the finite stage, with hulls built inside "
    "it; they are not the limit's orbit counts, and at desk scale they exceed the number of hull types of "
    "small members.";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trees of D-sets: relations, reconstruction, amalgamation and Fraisse chains"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string input, out, view = "combined", elements, element, compareWith, goldenOut;
    std::vector<std::string> inputs;
    int corpusMax = 5, chainMax = 48, rounds = 8, taskBound = 4, k = 4, auditK = 3, jobs = 1;
    uint64_t seed = 1;
    bool minimal = false, direct = false;

    auto add_input = [&](CLI::App* c) { c->add_option("--input", input, "Input document (path, - for stdin)")->required(); };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", out, "Write the output here instead of stdout"); };
    auto add_jobs = [&](CLI::App* c) { c->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256)); };

    auto* cValidate = app.add_subcommand("validate", "Check a tree document");
    add_input(cValidate);
    add_out(cValidate);

    auto* cRealize = app.add_subcommand("realize", "Dump the relations realized by a tree");
    add_input(cRealize);
    add_out(cRealize);

    auto* cReconstruct = app.add_subcommand("reconstruct", "Rebuild the structure tree from relations");
    add_input(cReconstruct);
    add_out(cReconstruct);

    auto* cMember = app.add_subcommand("member", "Decide membership in the class");
    add_input(cMember);
    add_out(cMember);

    auto* cIso = app.add_subcommand("iso", "Isomorphism of two trees or two relation dumps");
    cIso->add_option("--inputs", inputs, "Two documents")->required()->expected(2);
    add_out(cIso);

    auto* cExtend = app.add_subcommand("extend", "Enumerate one-point extensions up to isomorphism over the base");
    add_input(cExtend);
    cExtend->add_option("--element", element, "Name of the new element");
    add_out(cExtend);

    auto* cAmalgamate = app.add_subcommand("amalgamate", "Amalgamate E1 and E2 over A (embeddings by element name)");
    cAmalgamate->add_option("--inputs", inputs, "A, E1, E2")->required()->expected(3);
    add_out(cAmalgamate);

    auto* cJep = app.add_subcommand("jep", "Jointly embed two members");
    cJep->add_option("--inputs", inputs, "A, B")->required()->expected(2);
    add_out(cJep);

    auto* cHull = app.add_subcommand("hull", "Hull of a set of elements");
    add_input(cHull);
    cHull->add_option("--elements", elements, "Comma separated element names")->required();
    cHull->add_flag("--minimal", minimal, "Also search for a smallest superset inducing a member");
    add_out(cHull);

    auto* cChain = app.add_subcommand("chain", "Build a chain of stages and report richness and orbit counts");
    cChain->add_option("--input", input, "Seed tree (default: the two-element edge)");
    cChain->add_option("--rounds", rounds, "Rounds")->check(CLI::NonNegativeNumber);
    cChain->add_option("--max-size", chainMax, "Stage size cap");
    cChain->add_option("--task-bound", taskBound, "Largest base of a task")->check(CLI::Range(1, 6));
    cChain->add_option("--seed", seed, "Random seed for tie breaking");
    cChain->add_option("--k", k, "Largest orbit size reported")->check(CLI::Range(1, 6));
    cChain->add_option("--audit-k", auditK, "Base size of the richness audit")->check(CLI::Range(1, 4));
    add_jobs(cChain);
    add_out(cChain);

    auto* cCorpus = app.add_subcommand("corpus", "Enumerate members up to isomorphism");
    cCorpus->add_option("--max-size", corpusMax, "Largest domain size")->check(CLI::Range(1, 6));
    cCorpus->add_option("--golden", goldenOut, "Write counts and serialized members here");
    cCorpus->add_option("--compare", compareWith, "Fail unless the counts equal those of this golden file");
    cCorpus->add_flag("--direct", direct, "Also compare with the direct enumeration of trees");
    add_jobs(cCorpus);
    add_out(cCorpus);

    auto* cDot = app.add_subcommand("dot", "Render a tree (or the reconstruction of a relation dump) as DOT");
    add_input(cDot);
    cDot->add_option("--view", view, "dsets, structureTree or combined");
    add_out(cDot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (cValidate->parsed()) {
            Json doc = load_json(input);
            Json rep;
            try {
                TreeOfDSets t = tree_from_json(doc);
                rep = {{"valid", true}, {"violations", violations_json(validate(t))},
                       {"domain", t.domain()}, {"vertices", t.vertex_count()}};
            } catch (const ParseError& e) {
                rep = {{"valid", false}, {"pointer", e.pointer}, {"error", e.what()}};
                emit(out, rep);
                return 1;
            }
            emit(out, rep);
        } else if (cRealize->parsed()) {
            emit(out, relation_dump(realize(load_tree(input)).ls));
        } else if (cReconstruct->parsed()) {
            emit(out, reconstruction_to_json(reconstruct(load_structure(input))));
        } else if (cMember->parsed()) {
            Membership m = is_member_of_D(load_structure(input));
            Json rep{{"member", m.member}};
            if (m.member) rep["tree"] = tree_to_json(*m.tree);
            else rep["refutation"] = m.refutation;
            emit(out, rep);
        } else if (cIso->parsed()) {
            need_inputs(inputs, 2, "two documents");
            Json a = load_json(inputs[0]), b = load_json(inputs[1]);
            Json rep;
            if (is_tree_doc(a) && is_tree_doc(b)) {
                TreeOfDSets ta = tree_from_json(a), tb = tree_from_json(b);
                auto m = tree_iso(ta, tb);
                rep["isomorphic"] = m.has_value();
                if (m) {
                    auto da = ta.domain(), db = tb.domain();
                    Json em = Json::object(), vm = Json::object();
                    for (size_t i = 0; i < da.size(); ++i) em[da[i]] = db[m->elementMap[i]];
                    for (int v = 0; v < ta.vertex_count(); ++v) vm[ta.vid[v]] = tb.vid[m->vertexMap[v]];
                    rep["elementMap"] = em;
                    rep["vertexMap"] = vm;
                }
            } else {
                LStructure la = is_tree_doc(a) ? realize(tree_from_json(a)).ls : relations_from_json(a);
                LStructure lb = is_tree_doc(b) ? realize(tree_from_json(b)).ls : relations_from_json(b);
                auto m = ls_iso(la, lb);
                rep["isomorphic"] = m.has_value();
                if (m) {
                    Json em = Json::object();
                    for (int i = 0; i < la.size(); ++i) em[la.names()[i]] = lb.names()[(*m)[i]];
                    rep["elementMap"] = em;
                }
            }
            emit(out, rep);
        } else if (cExtend->parsed()) {
            TreeOfDSets t = load_tree(input);
            auto exts = enumerate_extensions(t, element);
            Json list = Json::array();
            for (auto& e : exts)
                list.push_back({{"descriptor", e.descriptor.to_string()},
                                {"kind", kind_name(e.descriptor.kind)},
                                {"newElement", e.descriptor.newElement},
                                {"tree", tree_to_json(e.tree)}});
            emit(out, Json{{"base", t.domain()}, {"count", exts.size()}, {"extensions", list}});
        } else if (cAmalgamate->parsed()) {
            need_inputs(inputs, 3, "A, E1, E2");
            TreeOfDSets a = load_tree(inputs[0]), e1 = load_tree(inputs[1]), e2 = load_tree(inputs[2]);
            Embedding f1 = name_embedding(a, e1), f2 = name_embedding(a, e2);
            if (!f1.verified || !f2.verified) throw DataError("A does not embed in E1 and E2 by element names");
            Amalgam m = amalgamate(a, e1, f1, e2, f2);
            auto problems = check_amalgam(a, e1, f1, e2, f2, m);
            emit(out, Json{{"tree", tree_to_json(m.tree)},
                           {"g1", element_map(e1, m.tree, m.g1)},
                           {"g2", element_map(e2, m.tree, m.g2)},
                           {"problems", problems}});
            if (!problems.empty()) throw CheckFailed("amalgam failed its checks");
        } else if (cJep->parsed()) {
            need_inputs(inputs, 2, "A, B");
            TreeOfDSets a = load_tree(inputs[0]), b = load_tree(inputs[1]);
            JointEmbedding j = joint_embed(a, b);
            bool ok = j.fa.verified && j.fb.verified && is_member_of_D(realize(j.tree).ls).member;
            emit(out, Json{{"tree", tree_to_json(j.tree)},
                           {"fa", element_map(a, j.tree, j.fa)},
                           {"fb", element_map(b, j.tree, j.fb)},
                           {"verified", ok}});
            if (!ok) throw CheckFailed("joint embedding failed its checks");
        } else if (cHull->parsed()) {
            TreeOfDSets t = load_tree(input);
            auto dom = t.domain();
            std::vector<int> a;
            for (auto& n : split_list(elements)) {
                auto it = std::lower_bound(dom.begin(), dom.end(), n);
                if (it == dom.end() || *it != n) throw UsageError("unknown element '" + n + "'");
                a.push_back(static_cast<int>(it - dom.begin()));
            }
            if (a.empty()) throw UsageError("--elements is empty");
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
            auto h = hull(t, a);
            auto names = [&](const std::vector<int>& v) {
                std::vector<std::string> s;
                for (int i : v) s.push_back(dom[i]);
                return s;
            };
            int n = static_cast<int>(a.size());
            Json rep{{"elements", names(a)},
                     {"hull", names(h)},
                     {"size", h.size()},
                     {"bound", n + hull_bound_f(n)},
                     {"member", is_member_of_D(realize_on(t, h)).member}};
            if (minimal) rep["minimal"] = names(minimal_hull(t, a));
            emit(out, rep);
            if (!rep["member"].get<bool>() || static_cast<long long>(h.size()) > n + hull_bound_f(n))
                throw CheckFailed("hull failed its checks");
        } else if (cChain->parsed()) {
            ChainConfig cfg;
            cfg.seed = input.empty() ? fixtures::fix2() : load_tree(input);
            cfg.rounds = rounds;
            cfg.maxSize = chainMax;
            cfg.taskBound = taskBound;
            cfg.rngSeed = seed;
            cfg.jobs = jobs;
            auto t0 = std::chrono::steady_clock::now();
            auto stages = build_chain(cfg);
            Json st = Json::array();
            for (auto& s : stages) {
                RichnessReport r = richness_audit(s, auditK, jobs);
                size_t copyPairs = 0, copyRealized = 0;
                Json bySize = Json::array();
                for (auto& [tot, emb] : r.typesBySize) bySize.push_back({{"total", tot}, {"embedded", emb}});
                for (auto& e : r.entries) {
                    copyPairs += e.copyPairs;
                    copyRealized += e.copyPairsRealized;
                }
                Json orbits = Json::object();
                for (int kk = 1; kk <= std::min(k, s.structure.domain_size()); ++kk)
                    orbits[std::to_string(kk)] = orbit_signature(s, kk, jobs);
                Json prov = Json::array();
                for (auto& p : s.provenance)
                    prov.push_back({{"task", p.task.summary},
                                    {"kind", kind_name(p.task.kind)},
                                    {"base", p.base},
                                    {"newElement", p.newElement},
                                    {"descriptor", p.descriptor.to_string()}});
                Json def = Json::array();
                for (auto& d : s.deferred)
                    def.push_back({{"task", d.task.summary}, {"baseSize", d.task.baseSize}, {"copies", d.copies}});
                st.push_back({{"stage", s.stageIndex},
                              {"size", s.structure.domain_size()},
                              {"added", prov},
                              {"deferred", def},
                              {"richness",
                               {{"k", r.k},
                                {"typesTotal", r.typesTotal},
                                {"typesEmbedded", r.typesEmbedded},
                                {"typesBySize", bySize},
                                {"extensionsTotal", r.extensionsTotal},
                                {"extensionsRealized", r.extensionsRealized},
                                {"copyPairs", copyPairs},
                                {"copyPairsRealized", copyRealized},
                                {"full", r.full()}}},
                              {"orbits", orbits}});
            }
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cerr << "chain: " << stages.size() << " stages in " << secs << " s\n";
            emit(out, Json{{"config",
                            {{"rounds", rounds},
                             {"maxSize", chainMax},
                             {"taskBound", taskBound},
                             {"seed", seed},
                             {"seedDomain", cfg.seed.domain()}}},
                           {"approximation", kApproximation},
                           {"stages", st},
                           {"final", tree_to_json(stages.back().structure)}});
        } else if (cCorpus->parsed()) {
            Corpus c = build_corpus(corpusMax, jobs);
            Json counts = Json::object();
            for (int n = 1; n <= corpusMax; ++n) counts[std::to_string(n)] = c.count(n);
            Json rep{{"maxSize", corpusMax}, {"counts", counts}, {"total", c.total()}};
            bool ok = true;
            if (direct) {
                auto keys = direct_enumeration_keys(corpusMax, jobs);
                bool same = true;
                for (int n = 1; n <= corpusMax; ++n)
                    same = same && keys[n] == std::set<std::string>(c.keys[n].begin(), c.keys[n].end());
                rep["directEnumerationAgrees"] = same;
                ok = ok && same;
            }
            if (!compareWith.empty()) {
                Json g = load_json(compareWith);
                if (!g.is_object() || !g.contains("counts")) throw ParseError("/counts", "golden file lacks counts");
                bool same = true;
                for (auto& [n, v] : g["counts"].items())
                    if (std::stoi(n) <= corpusMax) same = same && counts.contains(n) && counts[n] == v;
                rep["goldenAgrees"] = same;
                ok = ok && same;
            }
            if (!goldenOut.empty()) {
                Json members = Json::array();
                for (int n = 1; n <= corpusMax; ++n)
                    for (size_t i = 0; i < c.bySize[n].size(); ++i)
                        members.push_back({{"size", n}, {"key", c.keys[n][i]}, {"tree", tree_to_json(c.bySize[n][i])}});
                write_text(goldenOut, Json{{"maxSize", corpusMax}, {"counts", counts}, {"members", members}}.dump(2) + "\n");
            }
            emit(out, rep);
            if (!ok) throw CheckFailed("corpus disagrees with its oracle");
        } else if (cDot->parsed()) {
            DotView v = parse_view(view);
            Json j = load_json(input);
            if (is_tree_doc(j)) write_text(out, render_dot(tree_from_json(j), v));
            else write_text(out, render_dot(reconstruct(relations_from_json(j)), v));
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CheckFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
