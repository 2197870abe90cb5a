#include "treeds/io.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "treeds/errors.hpp"

namespace treeds {

namespace {

// ===========================================================================
// schema helpers
// ===========================================================================

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string at(const std::string& ptr, size_t i) { return ptr + "/" + std::to_string(i); }

void expect_object(const Json& j, const std::string& ptr, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw ParseError(ptr.empty() ? "/" : ptr, "expected an object");
    std::set<std::string> known;
    for (auto k : required) {
        known.insert(k);
        if (!j.contains(k)) throw ParseError(at(ptr, k), "missing required key");
    }
    for (auto k : optional) known.insert(k);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ParseError(at(ptr, it.key()), "unknown key");
}

const Json& expect_array(const Json& j, const std::string& ptr) {
    if (!j.is_array()) throw ParseError(ptr, "expected an array");
    return j;
}

std::string expect_string(const Json& j, const std::string& ptr) {
    if (!j.is_string()) throw ParseError(ptr, "expected a string");
    return j.get<std::string>();
}

int node_of(const DSetGraph& d, const Json& j, const std::string& ptr) {
    std::string n = expect_string(j, ptr);
    int v = d.find(n);
    if (v < 0) throw ParseError(ptr, "unknown node '" + n + "'");
    return v;
}

Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("/", std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

// ===========================================================================
// trees
// ===========================================================================

Json tree_to_json(const TreeOfDSets& t) {
    std::vector<int> order(t.vertex_count());
    for (int v = 0; v < t.vertex_count(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return t.vid[a] < t.vid[b]; });

    Json vertices = Json::array(), f = Json::array(), g = Json::array();
    std::vector<std::array<std::string, 3>> fRows;
    std::vector<std::array<std::string, 4>> gRows;
    for (int v : order) {
        const DSetGraph& d = t.label[v];
        std::vector<std::string> nodes;
        for (int u = 0; u < d.size(); ++u) nodes.push_back(d.name(u));
        std::sort(nodes.begin(), nodes.end());

        std::vector<std::array<std::string, 2>> edges;
        for (auto [a, b] : d.edges()) {
            std::string x = d.name(a), y = d.name(b);
            if (y < x) std::swap(x, y);
            edges.push_back({x, y});
        }
        std::sort(edges.begin(), edges.end());

        std::vector<std::pair<std::string, Json>> leaves;
        for (int l : d.leaves()) {
            Json elem = nullptr;
            if (v == t.root) {
                auto it = t.element.find(l);
                if (it != t.element.end()) elem = it->second;
            }
            leaves.emplace_back(d.name(l), elem);
        }
        std::sort(leaves.begin(), leaves.end(), [](auto& a, auto& b) { return a.first < b.first; });

        std::vector<std::array<std::string, 2>> special;
        for (int r = 0; r < d.size(); ++r)
            if (d.special(r) >= 0) special.push_back({d.name(r), d.name(d.special(r))});
        std::sort(special.begin(), special.end());

        Json dj;
        dj["nodes"] = nodes;
        dj["edges"] = Json::array();
        for (auto& e : edges) dj["edges"].push_back({e[0], e[1]});
        dj["leaves"] = Json::array();
        for (auto& [n, e] : leaves) dj["leaves"].push_back({{"node", n}, {"element", e}});
        dj["special"] = Json::array();
        for (auto& s : special) dj["special"].push_back({{"ram", s[0]}, {"neighbor", s[1]}});

        Json vj;
        vj["id"] = t.vid[v];
        vj["parent"] = t.parent[v] < 0 ? Json(nullptr) : Json(t.vid[t.parent[v]]);
        vj["dset"] = std::move(dj);
        vertices.push_back(std::move(vj));

        if (t.parent[v] >= 0) {
            int p = t.parent[v];
            const DSetGraph& pd = t.label[p];
            fRows.push_back({t.vid[p], t.vid[v], pd.name(t.fram[v])});
            for (auto [leaf, nb] : t.g[v]) gRows.push_back({t.vid[p], t.vid[v], d.name(leaf), pd.name(nb)});
        }
    }
    std::sort(fRows.begin(), fRows.end());
    std::sort(gRows.begin(), gRows.end());
    for (auto& r : fRows) f.push_back({{"vertex", r[0]}, {"successor", r[1]}, {"ram", r[2]}});
    for (auto& r : gRows) g.push_back({{"parent", r[0]}, {"child", r[1]}, {"leaf", r[2]}, {"branchNeighbor", r[3]}});

    Json doc;
    doc["version"] = kFormatVersion;
    doc["vertices"] = std::move(vertices);
    doc["f"] = std::move(f);
    doc["g"] = std::move(g);
    return doc;
}

std::string serialize(const TreeOfDSets& t) { return tree_to_json(t).dump(2) + "\n"; }

TreeOfDSets tree_from_json(const Json& doc) {
    expect_object(doc, "", {"version", "vertices", "f", "g"});
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kFormatVersion)
        throw ParseError("/version", "unsupported version (expected " + std::to_string(kFormatVersion) + ")");

    const Json& vs = expect_array(doc["vertices"], "/vertices");
    if (vs.empty()) throw ParseError("/vertices", "no vertices");

    struct Raw {
        std::string id;
        std::string parent;  // empty at the root
        DSetGraph d;
        std::map<int, std::string> elements;
        std::vector<std::string> docNodes;
    };
    std::vector<Raw> raw(vs.size());
    std::map<std::string, size_t> byId;
    int rootIdx = -1;
    for (size_t i = 0; i < vs.size(); ++i) {
        std::string p = at("/vertices", i);
        const Json& vj = vs[i];
        expect_object(vj, p, {"id", "parent", "dset"});
        Raw& r = raw[i];
        r.id = expect_string(vj["id"], at(p, "id"));
        if (r.id.empty()) throw ParseError(at(p, "id"), "empty vertex id");
        if (!byId.emplace(r.id, i).second) throw ParseError(at(p, "id"), "duplicate vertex id '" + r.id + "'");
        if (vj["parent"].is_null()) {
            if (rootIdx >= 0) throw ParseError(at(p, "parent"), "second root");
            rootIdx = static_cast<int>(i);
        } else {
            r.parent = expect_string(vj["parent"], at(p, "parent"));
        }

        std::string dp = at(p, "dset");
        const Json& dj = vj["dset"];
        expect_object(dj, dp, {"nodes", "edges", "leaves", "special"});
        const Json& nodes = expect_array(dj["nodes"], at(dp, "nodes"));
        for (size_t k = 0; k < nodes.size(); ++k) {
            std::string np = at(at(dp, "nodes"), k);
            std::string n = expect_string(nodes[k], np);
            if (r.d.find(n) >= 0) throw ParseError(np, "duplicate node '" + n + "'");
            r.d.add_node(n);
            r.docNodes.push_back(n);
        }
        const Json& edges = expect_array(dj["edges"], at(dp, "edges"));
        for (size_t k = 0; k < edges.size(); ++k) {
            std::string ep = at(at(dp, "edges"), k);
            if (!edges[k].is_array() || edges[k].size() != 2) throw ParseError(ep, "an edge is a pair of node names");
            int a = node_of(r.d, edges[k][0], at(ep, 0)), b = node_of(r.d, edges[k][1], at(ep, 1));
            if (a == b) throw ParseError(ep, "self loop");
            if (r.d.adjacent(a, b)) throw ParseError(ep, "duplicate edge");
            r.d.add_edge(a, b);
        }
        // Degree-2 nodes are reported here, before anything relies on the shape.
        for (int u = 0; u < r.d.size(); ++u)
            if (r.d.degree(u) == 2)
                throw ParseError(at(at(dp, "nodes"), static_cast<size_t>(u)),
                                 "node '" + r.d.name(u) + "' of degree 2 (no dyadic vertices allowed)");

        const Json& sp = expect_array(dj["special"], at(dp, "special"));
        for (size_t k = 0; k < sp.size(); ++k) {
            std::string spp = at(at(dp, "special"), k);
            expect_object(sp[k], spp, {"ram", "neighbor"});
            int rv = node_of(r.d, sp[k]["ram"], at(spp, "ram"));
            int nb = node_of(r.d, sp[k]["neighbor"], at(spp, "neighbor"));
            if (r.d.special(rv) >= 0) throw ParseError(spp, "second special branch at '" + r.d.name(rv) + "'");
            if (!r.d.is_ram(rv)) throw ParseError(at(spp, "ram"), "not a ramification point");
            if (!r.d.adjacent(rv, nb)) throw ParseError(at(spp, "neighbor"), "not adjacent to the ramification point");
            r.d.set_special(rv, nb);
        }

        const Json& lv = expect_array(dj["leaves"], at(dp, "leaves"));
        std::set<int> listed;
        for (size_t k = 0; k < lv.size(); ++k) {
            std::string lp = at(at(dp, "leaves"), k);
            expect_object(lv[k], lp, {"node", "element"});
            int u = node_of(r.d, lv[k]["node"], at(lp, "node"));
            if (!r.d.is_leaf(u)) throw ParseError(at(lp, "node"), "'" + r.d.name(u) + "' is not a leaf");
            if (!listed.insert(u).second) throw ParseError(at(lp, "node"), "leaf listed twice");
            const Json& e = lv[k]["element"];
            if (!e.is_null()) {
                if (!vj["parent"].is_null()) throw ParseError(at(lp, "element"), "element names belong on root leaves");
                r.elements[u] = expect_string(e, at(lp, "element"));
            }
        }
        for (int u : r.d.leaves())
            if (!listed.count(u)) throw ParseError(at(dp, "leaves"), "leaf '" + r.d.name(u) + "' is not listed");
    }
    if (rootIdx < 0) throw ParseError("/vertices", "no root (every vertex has a parent)");
    for (size_t i = 0; i < raw.size(); ++i)
        if (!raw[i].parent.empty() && !byId.count(raw[i].parent))
            throw ParseError(at(at("/vertices", i), "parent"), "unknown vertex '" + raw[i].parent + "'");

    // f and g, keyed by the child
    std::map<size_t, std::pair<std::string, std::string>> fOf;  // child -> (ram name, pointer)
    const Json& fs = expect_array(doc["f"], "/f");
    for (size_t k = 0; k < fs.size(); ++k) {
        std::string p = at("/f", k);
        expect_object(fs[k], p, {"vertex", "successor", "ram"});
        std::string par = expect_string(fs[k]["vertex"], at(p, "vertex"));
        std::string ch = expect_string(fs[k]["successor"], at(p, "successor"));
        if (!byId.count(ch)) throw ParseError(at(p, "successor"), "unknown vertex '" + ch + "'");
        size_t c = byId[ch];
        if (raw[c].parent != par) throw ParseError(at(p, "vertex"), "'" + par + "' is not the parent of '" + ch + "'");
        if (fOf.count(c)) throw ParseError(p, "second f entry for '" + ch + "'");
        fOf[c] = {expect_string(fs[k]["ram"], at(p, "ram")), at(p, "ram")};
    }
    std::map<size_t, std::vector<std::pair<size_t, Json>>> gOf;  // child -> (entry index, entry)
    const Json& gs = expect_array(doc["g"], "/g");
    for (size_t k = 0; k < gs.size(); ++k) {
        std::string p = at("/g", k);
        expect_object(gs[k], p, {"parent", "child", "leaf", "branchNeighbor"});
        std::string par = expect_string(gs[k]["parent"], at(p, "parent"));
        std::string ch = expect_string(gs[k]["child"], at(p, "child"));
        if (!byId.count(ch)) throw ParseError(at(p, "child"), "unknown vertex '" + ch + "'");
        size_t c = byId[ch];
        if (raw[c].parent != par) throw ParseError(at(p, "parent"), "'" + par + "' is not the parent of '" + ch + "'");
        gOf[c].emplace_back(k, gs[k]);
    }

    // Rebuild parents-first.
    TreeOfDSets t;
    std::vector<int> newIdx(raw.size(), -1);
    std::vector<size_t> pending;
    std::function<void(size_t)> place = [&](size_t i) {
        if (newIdx[i] >= 0) return;
        if (std::find(pending.begin(), pending.end(), i) != pending.end())
            throw ParseError(at(at("/vertices", i), "parent"), "parent links form a cycle");
        pending.push_back(i);
        int par = -1, fr = -1;
        if (!raw[i].parent.empty()) {
            size_t pi = byId[raw[i].parent];
            place(pi);
            par = newIdx[pi];
            auto it = fOf.find(i);
            if (it == fOf.end()) throw ParseError("/f", "no f entry for successor '" + raw[i].id + "'");
            fr = raw[pi].d.find(it->second.first);
            if (fr < 0) throw ParseError(it->second.second, "unknown node '" + it->second.first + "'");
        }
        newIdx[i] = t.add_vertex(raw[i].id, raw[i].d, par, fr);
        pending.pop_back();
    };
    for (size_t i = 0; i < raw.size(); ++i) place(i);
    t.root = newIdx[rootIdx];
    t.element = raw[rootIdx].elements;
    for (auto& [c, entries] : gOf) {
        const DSetGraph& cd = raw[c].d;
        const DSetGraph& pd = raw[byId[raw[c].parent]].d;
        for (auto& [k, e] : entries) {
            std::string p = at("/g", k);
            int leaf = node_of(cd, e["leaf"], at(p, "leaf"));
            int nb = node_of(pd, e["branchNeighbor"], at(p, "branchNeighbor"));
            if (t.g[newIdx[c]].count(leaf)) throw ParseError(at(p, "leaf"), "second g entry for this leaf");
            t.g[newIdx[c]][leaf] = nb;
        }
    }

    auto rep = validate(t);
    if (!rep.ok()) {
        const Violation& v = rep.violations.front();
        std::string ptr = "/vertices";
        for (size_t i = 0; i < raw.size(); ++i) {
            if (v.where == raw[i].id) {
                ptr = at("/vertices", i);
                break;
            }
            if (v.where.rfind(raw[i].id + "/", 0) == 0) {
                std::string node = v.where.substr(raw[i].id.size() + 1);
                auto& dn = raw[i].docNodes;
                auto it = std::find(dn.begin(), dn.end(), node);
                if (it == dn.end()) continue;
                ptr = at(at(at(at("/vertices", i), "dset"), "nodes"), static_cast<size_t>(it - dn.begin()));
                break;
            }
        }
        throw ParseError(ptr, v.rule);
    }
    return t;
}

TreeOfDSets parse_tree(const std::string& text) { return tree_from_json(parse_text(text)); }

// ===========================================================================
// relations
// ===========================================================================

namespace {

using Tuple = std::vector<int>;

std::vector<std::array<int, 4>> s_orbit(int x, int y, int z, int w) {
    return {{x, y, z, w}, {y, x, z, w}, {x, y, w, z}, {y, x, w, z},
            {z, w, x, y}, {w, z, x, y}, {z, w, y, x}, {w, z, y, x}};
}

// Least tuple of the orbit of `t` under the symmetries of relation `rel`,
// compared by element rank.
Tuple least_form(const std::string& rel, const Tuple& t, const std::vector<int>& rank) {
    std::vector<Tuple> forms;
    auto l2 = [](int x, int y, int z) { return std::vector<std::array<int, 3>>{{x, y, z}, {x, z, y}}; };
    if (rel == "L") {
        for (auto& a : l2(t[0], t[1], t[2])) forms.push_back({a[0], a[1], a[2]});
    } else if (rel == "S") {
        for (auto& a : s_orbit(t[0], t[1], t[2], t[3])) forms.push_back({a[0], a[1], a[2], a[3]});
    } else if (rel == "Lp") {
        for (auto& a : l2(t[0], t[1], t[2])) forms.push_back({a[0], a[1], a[2], t[3]});
    } else if (rel == "Sp") {
        for (auto& a : s_orbit(t[0], t[1], t[2], t[3])) forms.push_back({a[0], a[1], a[2], a[3], t[4]});
    } else if (rel == "Q") {
        for (auto& a : s_orbit(t[0], t[1], t[2], t[3]))
            for (auto& b : l2(t[4], t[5], t[6])) forms.push_back({a[0], a[1], a[2], a[3], b[0], b[1], b[2]});
    } else {  // R
        for (auto& a : l2(t[0], t[1], t[2]))
            for (auto& b : l2(t[3], t[4], t[5])) {
                forms.push_back({a[0], a[1], a[2], b[0], b[1], b[2]});
                forms.push_back({b[0], b[1], b[2], a[0], a[1], a[2]});
            }
    }
    auto less = [&](const Tuple& a, const Tuple& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [&](int x, int y) { return rank[x] < rank[y]; });
    };
    return *std::min_element(forms.begin(), forms.end(), less);
}

const std::array<std::pair<const char*, int>, 6> kRelations{
    {{"L", 3}, {"S", 4}, {"Lp", 4}, {"Sp", 5}, {"Q", 7}, {"R", 6}}};

bool holds(const LStructure& ls, const std::string& rel, const Tuple& t) {
    if (rel == "L") return ls.L(t[0], t[1], t[2]);
    if (rel == "S") return ls.S(t[0], t[1], t[2], t[3]);
    if (rel == "Lp") return ls.Lp(t[0], t[1], t[2], t[3]);
    if (rel == "Sp") return ls.Sp(t[0], t[1], t[2], t[3], t[4]);
    if (rel == "Q") return ls.Q(t[0], t[1], t[2], t[3], t[4], t[5], t[6]);
    return ls.R(t[0], t[1], t[2], t[3], t[4], t[5]);
}

}  // namespace

Json relation_dump(const LStructure& ls) {
    int n = ls.size();
    std::vector<int> byName(n);
    for (int i = 0; i < n; ++i) byName[i] = i;
    std::sort(byName.begin(), byName.end(), [&](int a, int b) { return ls.names()[a] < ls.names()[b]; });
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[byName[i]] = i;

    std::map<std::string, std::set<std::vector<int>>> reps;  // tuples of ranks
    auto keep = [&](const std::string& rel, const Tuple& t) {
        Tuple m = least_form(rel, t, rank);
        std::vector<int> r;
        for (int x : m) r.push_back(rank[x]);
        reps[rel].insert(r);
    };

    if (ls.mode() == LStructure::Mode::Explicit) {
        for (auto& [rel, arity] : kRelations) {
            Tuple t(arity, 0);
            std::function<void(int)> rec = [&](int pos) {
                if (pos == arity) {
                    if (holds(ls, rel, t)) keep(rel, t);
                    return;
                }
                for (int x = 0; x < n; ++x) {
                    t[pos] = x;
                    rec(pos + 1);
                }
            };
            rec(0);
        }
    } else {
        // Everything hangs off the witness ids of L-triples and S-quadruples.
        std::map<int, std::vector<Tuple>> lBy, sBy;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    if (ls.L(x, y, z)) {
                        Tuple t{x, y, z};
                        if (least_form("L", t, rank) == t) lBy[ls.l_group(x, y, z)].push_back(t);
                    }
                    for (int w = 0; w < n; ++w)
                        if (ls.S(x, y, z, w)) {
                            Tuple t{x, y, z, w};
                            if (least_form("S", t, rank) == t) sBy[ls.s_group(x, y, z, w)].push_back(t);
                        }
                }
        for (auto& [g, ts] : lBy)
            for (auto& t : ts) {
                keep("L", t);
                for (int u = 0; u < n; ++u)
                    if (ls.Lp(t[0], t[1], t[2], u)) keep("Lp", {t[0], t[1], t[2], u});
                for (auto& o : ts) keep("R", {t[0], t[1], t[2], o[0], o[1], o[2]});
            }
        for (auto& [g, ts] : sBy)
            for (auto& t : ts) {
                keep("S", t);
                for (int u = 0; u < n; ++u)
                    if (ls.Sp(t[0], t[1], t[2], t[3], u)) keep("Sp", {t[0], t[1], t[2], t[3], u});
                auto it = lBy.find(g);
                if (it == lBy.end()) continue;
                for (auto& o : it->second) keep("Q", {t[0], t[1], t[2], t[3], o[0], o[1], o[2]});
            }
    }

    Json doc;
    doc["domain"] = Json::array();
    for (int i : byName) doc["domain"].push_back(ls.names()[i]);
    for (auto& [rel, arity] : kRelations) {
        Json list = Json::array();
        for (auto& r : reps[rel]) {
            Json row = Json::array();
            for (int x : r) row.push_back(ls.names()[byName[x]]);
            list.push_back(std::move(row));
        }
        doc[rel] = std::move(list);
    }
    return doc;
}

LStructure relations_from_json(const Json& doc) {
    expect_object(doc, "", {"domain"}, {"L", "S", "Lp", "Sp", "Q", "R"});
    const Json& dom = expect_array(doc["domain"], "/domain");
    std::vector<std::string> names;
    std::map<std::string, int> idx;
    for (size_t i = 0; i < dom.size(); ++i) {
        std::string n = expect_string(dom[i], at("/domain", i));
        if (!idx.emplace(n, static_cast<int>(names.size())).second)
            throw ParseError(at("/domain", i), "duplicate element '" + n + "'");
        names.push_back(n);
    }
    if (static_cast<int>(names.size()) > LStructure::kMaxExplicit)
        throw ParseError("/domain", "at most " + std::to_string(LStructure::kMaxExplicit) + " elements are supported");
    LStructure ls = LStructure::explicit_empty(names);
    for (auto& [rel, arity] : kRelations) {
        if (!doc.contains(rel)) continue;
        std::string rp = at("", rel);
        const Json& list = expect_array(doc[rel], rp);
        for (size_t k = 0; k < list.size(); ++k) {
            std::string tp = at(rp, k);
            if (!list[k].is_array() || static_cast<int>(list[k].size()) != arity)
                throw ParseError(tp, std::string(rel) + " tuples have " + std::to_string(arity) + " entries");
            Tuple t;
            for (int a = 0; a < arity; ++a) {
                std::string e = expect_string(list[k][a], at(tp, static_cast<size_t>(a)));
                auto it = idx.find(e);
                if (it == idx.end()) throw ParseError(at(tp, static_cast<size_t>(a)), "unknown element '" + e + "'");
                t.push_back(it->second);
            }
            std::string r = rel;
            if (r == "L") ls.put_L(t[0], t[1], t[2]);
            else if (r == "S") ls.put_S(t[0], t[1], t[2], t[3]);
            else if (r == "Lp") ls.put_Lp(t[0], t[1], t[2], t[3]);
            else if (r == "Sp") ls.put_Sp(t[0], t[1], t[2], t[3], t[4]);
            else if (r == "Q") ls.put_Q(t[0], t[1], t[2], t[3], t[4], t[5], t[6]);
            else ls.put_R(t[0], t[1], t[2], t[3], t[4], t[5]);
        }
    }
    return ls;
}

namespace {

Json dset_json(const DSetGraph& d, const std::map<int, std::string>& leafLabel) {
    Json j;
    std::vector<std::string> nodes;
    for (int u = 0; u < d.size(); ++u) nodes.push_back(d.name(u));
    std::sort(nodes.begin(), nodes.end());
    j["nodes"] = nodes;
    std::vector<std::array<std::string, 2>> edges;
    for (auto [a, b] : d.edges()) {
        std::string x = d.name(a), y = d.name(b);
        if (y < x) std::swap(x, y);
        edges.push_back({x, y});
    }
    std::sort(edges.begin(), edges.end());
    j["edges"] = Json::array();
    for (auto& e : edges) j["edges"].push_back({e[0], e[1]});
    std::map<std::string, std::string> sp, lv;
    for (int r = 0; r < d.size(); ++r)
        if (d.special(r) >= 0) sp[d.name(r)] = d.name(d.special(r));
    for (auto& [u, s] : leafLabel) lv[d.name(u)] = s;
    j["special"] = Json::array();
    for (auto& [r, nb] : sp) j["special"].push_back({{"ram", r}, {"neighbor", nb}});
    j["leaves"] = Json::array();
    for (auto& [u, s] : lv) j["leaves"].push_back({{"node", u}, {"class", s}});
    return j;
}

std::string class_label(const std::vector<std::string>& names, const std::vector<int>& cls) {
    std::string s;
    for (int e : cls) s += (s.empty() ? "" : ",") + names[e];
    return "{" + s + "}";
}

std::string triple_label(const std::vector<std::string>& names, const Triple& t) {
    return names[t[0]] + ";" + names[t[1]] + "," + names[t[2]];
}

}  // namespace

Json reconstruction_to_json(const ReconstructedTree& rt) {
    Json doc;
    doc["domain"] = rt.names;
    doc["vertices"] = Json::array();
    for (size_t i = 0; i < rt.vertices.size(); ++i) {
        const RVertex& v = rt.vertices[i];
        Json vj;
        vj["index"] = i;
        vj["rep"] = triple_label(rt.names, v.rep);
        vj["parent"] = v.parent < 0 ? Json(nullptr) : Json(v.parent);
        std::vector<std::string> tr;
        for (auto& t : v.triples) tr.push_back(triple_label(rt.names, t));
        vj["triples"] = tr;
        std::vector<std::string> js;
        for (int e : v.jset) js.push_back(rt.names[e]);
        vj["jset"] = js;
        std::map<int, std::string> leafLabel;
        for (size_t c = 0; c < v.classes.size(); ++c)
            leafLabel[v.leafOfClass[c]] = class_label(rt.names, v.classes[c]);
        vj["dset"] = dset_json(v.dirTree, leafLabel);
        auto cm = v.parent < 0 ? rt.coneMap.end() : rt.coneMap.find({v.parent, static_cast<int>(i)});
        vj["ramInParent"] = cm == rt.coneMap.end()
                                ? Json(nullptr)
                                : Json(rt.vertices[v.parent].dirTree.name(cm->second));
        doc["vertices"].push_back(std::move(vj));
    }
    return doc;
}

// ===========================================================================
// DOT
// ===========================================================================

DotView parse_view(const std::string& name) {
    if (name == "dsets") return DotView::DSets;
    if (name == "structureTree") return DotView::StructureTree;
    if (name == "combined") return DotView::Combined;
    throw ArgumentError("unknown view '" + name + "' (expected dsets, structureTree or combined)");
}

namespace {

// What the renderer needs of a vertex, for both kinds of tree.
struct DotVertex {
    std::string id;
    std::string caption;
    const DSetGraph* d = nullptr;
    std::map<int, std::string> leafLabel;
    int parent = -1;
    std::string ramInParent;  // node of the parent's D-set
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

void emit_dset(std::ostringstream& os, const DotVertex& v, const std::string& prefix, const std::string& indent) {
    const DSetGraph& d = *v.d;
    std::vector<int> order(d.size());
    for (int u = 0; u < d.size(); ++u) order[u] = u;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d.name(a) < d.name(b); });
    for (int u : order) {
        std::string label = d.name(u);
        auto it = v.leafLabel.find(u);
        if (it != v.leafLabel.end()) label = it->second;
        os << indent << quote(prefix + d.name(u)) << " [label=" << quote(label)
           << ", shape=" << (d.is_leaf(u) ? "box" : "circle") << "];\n";
    }
    std::vector<std::pair<std::string, std::string>> lines;
    for (auto [a, b] : d.edges()) {
        if (d.name(b) < d.name(a)) std::swap(a, b);
        bool sa = d.is_ram(a) && d.special(a) == b;
        bool sb = d.is_ram(b) && d.special(b) == a;
        std::string na = quote(prefix + d.name(a)), nb = quote(prefix + d.name(b));
        // Arrows run from the special neighbour toward the ramification point.
        if (sa && sb) lines.emplace_back(na + " -> " + nb, " [dir=both]");
        else if (sa) lines.emplace_back(nb + " -> " + na, "");
        else if (sb) lines.emplace_back(na + " -> " + nb, "");
        else lines.emplace_back(na + " -> " + nb, " [dir=none]");
    }
    std::sort(lines.begin(), lines.end());
    for (auto& [e, attr] : lines) os << indent << e << attr << ";\n";
}

std::string render(const std::vector<DotVertex>& vs, int root, DotView view) {
    std::ostringstream os;
    if (view == DotView::DSets) {
        os << "digraph dsets {\n";
        emit_dset(os, vs[root], "", "  ");
    } else if (view == DotView::StructureTree) {
        os << "digraph structureTree {\n";
        os << "  rankdir=TB;\n";
        for (const auto& v : vs) os << "  " << quote(v.id) << " [label=" << quote(v.caption) << ", shape=ellipse];\n";
        for (const auto& v : vs)
            if (v.parent >= 0)
                os << "  " << quote(vs[v.parent].id) << " -> " << quote(v.id) << " [label=" << quote(v.ramInParent)
                   << "];\n";
    } else {
        os << "digraph combined {\n";
        os << "  compound=true;\n";
        for (size_t i = 0; i < vs.size(); ++i) {
            os << "  subgraph " << quote("cluster_" + vs[i].id) << " {\n";
            os << "    label=" << quote(vs[i].caption) << ";\n";
            emit_dset(os, vs[i], vs[i].id + "/", "    ");
            os << "  }\n";
        }
        for (const auto& v : vs) {
            if (v.parent < 0) continue;
            const DSetGraph& d = *v.d;
            std::string first = d.name(0);
            for (int u = 1; u < d.size(); ++u) first = std::min(first, d.name(u));
            os << "  " << quote(vs[v.parent].id + "/" + v.ramInParent) << " -> " << quote(v.id + "/" + first)
               << " [lhead=" << quote("cluster_" + v.id) << ", style=dashed];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace

std::string render_dot(const TreeOfDSets& t, DotView view) {
    std::vector<int> order(t.vertex_count());
    for (int v = 0; v < t.vertex_count(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return t.vid[a] < t.vid[b]; });
    std::vector<int> pos(t.vertex_count());
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);

    std::vector<DotVertex> vs;
    for (int v : order) {
        DotVertex dv;
        dv.id = t.vid[v];
        dv.caption = t.vid[v];
        dv.d = &t.label[v];
        if (v == t.root) dv.leafLabel = t.element;
        if (t.parent[v] >= 0) {
            dv.parent = pos[t.parent[v]];
            dv.ramInParent = t.label[t.parent[v]].name(t.fram[v]);
        }
        vs.push_back(std::move(dv));
    }
    return render(vs, pos[t.root], view);
}

std::string render_dot(const ReconstructedTree& rt, DotView view) {
    std::vector<DotVertex> vs;
    int root = -1;
    for (size_t i = 0; i < rt.vertices.size(); ++i) {
        const RVertex& v = rt.vertices[i];
        DotVertex dv;
        dv.id = "v" + std::to_string(i);
        dv.caption = "v" + std::to_string(i) + " (" + triple_label(rt.names, v.rep) + ")";
        dv.d = &v.dirTree;
        for (size_t c = 0; c < v.classes.size(); ++c) {
            // Singleton classes carry the element name itself.
            dv.leafLabel[v.leafOfClass[c]] =
                v.classes[c].size() == 1 ? rt.names[v.classes[c][0]] : class_label(rt.names, v.classes[c]);
        }
        dv.parent = v.parent;
        if (v.parent < 0) {
            if (root < 0) root = static_cast<int>(i);
        } else {
            auto cm = rt.coneMap.find({v.parent, static_cast<int>(i)});
            if (cm != rt.coneMap.end()) dv.ramInParent = rt.vertices[v.parent].dirTree.name(cm->second);
        }
        vs.push_back(std::move(dv));
    }
    if (vs.empty()) return "digraph empty {\n}\n";
    return render(vs, root < 0 ? 0 : root, view);
}

}  // namespace treeds
