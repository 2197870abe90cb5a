#include "treeds/reconstruct.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace treeds {

namespace {

std::string set_string(const LStructure& ls, const std::vector<int>& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + ls.names()[s[i]];
    return out + "}";
}

std::string triple_string(const LStructure& ls, const Triple& t) {
    return "(" + ls.names()[t[0]] + ";" + ls.names()[t[1]] + "," + ls.names()[t[2]] + ")";
}

bool Rt(const LStructure& ls, const Triple& a, int p, int q, int s) { return ls.R(a[0], a[1], a[2], p, q, s); }

bool all_distinct4(int a, int b, int c, int d) {
    return a != b && a != c && a != d && b != c && b != d && c != d;
}

}  // namespace

int RVertex::class_of(int element) const {
    for (size_t i = 0; i < classes.size(); ++i)
        if (std::binary_search(classes[i].begin(), classes[i].end(), element)) return static_cast<int>(i);
    return -1;
}

// ===========================================================================
// K*, J-sets, E-classes, directions
// ===========================================================================

std::vector<Triple> kstar(const LStructure& ls) {
    std::vector<Triple> out;
    int n = ls.size();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = y + 1; z < n; ++z)
                if (x != y && x != z && ls.L(x, y, z)) out.push_back({x, y, z});
    return out;
}

std::vector<std::vector<Triple>> kstar_classes(const LStructure& ls) {
    auto ks = kstar(ls);
    std::vector<std::vector<Triple>> classes;
    std::vector<int> cls(ks.size(), -1);
    for (size_t i = 0; i < ks.size(); ++i) {
        const Triple& t = ks[i];
        if (!Rt(ls, t, t[0], t[1], t[2]))
            throw DataError("R is not reflexive at " + triple_string(ls, t));
        for (size_t c = 0; c < classes.size(); ++c) {
            const Triple& r = classes[c][0];
            bool fwd = Rt(ls, r, t[0], t[1], t[2]), back = Rt(ls, t, r[0], r[1], r[2]);
            if (fwd != back)
                throw DataError("R is not symmetric on " + triple_string(ls, r) + ", " + triple_string(ls, t));
            if (fwd) {
                cls[i] = static_cast<int>(c);
                break;
            }
        }
        if (cls[i] < 0) {
            cls[i] = static_cast<int>(classes.size());
            classes.push_back({});
        }
        classes[cls[i]].push_back(t);
    }
    // Grouped structures carry R as equality of witness ids, which is an
    // equivalence by construction; explicit tables need the full check.
    if (ls.mode() == LStructure::Mode::Explicit) {
        for (size_t i = 0; i < ks.size(); ++i)
            for (size_t j = 0; j < ks.size(); ++j)
                if (Rt(ls, ks[i], ks[j][0], ks[j][1], ks[j][2]) != (cls[i] == cls[j]))
                    throw DataError("R is not transitive around " + triple_string(ls, ks[i]) + ", " +
                                    triple_string(ls, ks[j]));
    }
    return classes;
}

std::vector<int> j_set(const LStructure& ls, const Triple& t) {
    auto [p, q, s] = t;
    if (!ls.L(p, q, s)) throw ArgumentError("j_set: L does not hold at " + triple_string(ls, t));
    std::vector<int> out;
    for (int j = 0; j < ls.size(); ++j)
        if (Rt(ls, t, j, q, s) || Rt(ls, t, p, j, s) || Rt(ls, t, p, j, q)) out.push_back(j);
    return out;
}

std::vector<std::vector<int>> e_partition(const LStructure& ls, const Triple& t) {
    auto J = j_set(ls, t);
    int n = ls.size();
    std::map<std::vector<char>, std::vector<int>> bySig;
    std::vector<std::vector<char>> order;
    for (int u : J) {
        std::vector<char> sig(static_cast<size_t>(2) * n * n);
        for (int m = 0; m < n; ++m)
            for (int k = 0; k < n; ++k) {
                sig[2 * (m * n + k)] = Rt(ls, t, m, k, u);
                sig[2 * (m * n + k) + 1] = Rt(ls, t, u, m, k);
            }
        auto [it, fresh] = bySig.try_emplace(sig);
        if (fresh) order.push_back(sig);
        it->second.push_back(u);
    }
    std::vector<std::vector<int>> out;
    for (auto& s : order) out.push_back(bySig[s]);
    return out;
}

QuatRel direction_d(const LStructure& ls, const Triple& t) {
    auto cl = e_partition(ls, t);
    int k = static_cast<int>(cl.size());
    QuatRel D(k);
    auto [x, y, z] = t;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int d = 0; d < k; ++d) {
                    if (a == b && a != c && a != d) {
                        D.set(a, b, c, d);
                        continue;
                    }
                    if (c == d && c != a && c != b) {
                        D.set(a, b, c, d);
                        continue;
                    }
                    if (!all_distinct4(a, b, c, d)) continue;
                    bool first = ls.Q(cl[a][0], cl[b][0], cl[c][0], cl[d][0], x, y, z);
                    for (int u : cl[a])
                        for (int v : cl[b])
                            for (int s : cl[c])
                                for (int w : cl[d])
                                    if (ls.Q(u, v, s, w, x, y, z) != first)
                                        throw DataError("direction relation at " + triple_string(ls, t) +
                                                        " depends on representatives of " + set_string(ls, cl[a]) +
                                                        set_string(ls, cl[b]) + set_string(ls, cl[c]) +
                                                        set_string(ls, cl[d]));
                    if (first) D.set(a, b, c, d);
                }
    return D;
}

// ===========================================================================
// direction trees
// ===========================================================================

namespace {

// Builds the unique leaf-labelled tree whose leaf D-relation is D, inserting
// leaves one at a time at the only position that keeps all quartets right.
void build_direction_tree(RVertex& v, const std::vector<std::string>& leafNames, const std::string& where) {
    int k = static_cast<int>(leafNames.size());
    DSetGraph g;
    v.leafOfClass.assign(k, -1);
    for (int i = 0; i < k; ++i) v.leafOfClass[i] = g.add_node(leafNames[i]);
    const auto& lo = v.leafOfClass;
    if (k == 2) g.add_edge(lo[0], lo[1]);
    if (k >= 3) {
        int c = g.add_node(g.fresh_name("r"));
        for (int i = 0; i < 3; ++i) g.add_edge(c, lo[i]);
    }
    for (int i = 3; i < k; ++i) {
        std::vector<DSetGraph> fits;
        auto consistent = [&](const DSetGraph& trial) {
            DistanceTable T(trial);
            for (int a = 0; a < i; ++a)
                for (int b = 0; b < i; ++b)
                    for (int c = 0; c < i; ++c) {
                        if (!all_distinct4(a, b, c, i)) continue;
                        if (T.split(lo[a], lo[b], lo[c], lo[i]) != v.ddir(a, b, c, i)) return false;
                    }
            return true;
        };
        for (auto [a, b] : g.edges()) {
            DSetGraph trial = g;
            int m = trial.add_node(trial.fresh_name("r"));
            trial.remove_edge(a, b);
            trial.add_edge(a, m);
            trial.add_edge(m, b);
            trial.add_edge(m, lo[i]);
            if (consistent(trial)) fits.push_back(std::move(trial));
        }
        for (int r : g.ram_points()) {
            DSetGraph trial = g;
            trial.add_edge(r, lo[i]);
            if (consistent(trial)) fits.push_back(std::move(trial));
        }
        if (fits.size() != 1)
            throw Refutation("directions", where + ": direction relation is not a tree relation (" +
                                               std::to_string(fits.size()) + " placements for " + leafNames[i] + ")");
        g = std::move(fits[0]);
    }
    v.dirTree = std::move(g);
}

void assign_specials(const LStructure& ls, RVertex& v, const std::string& where) {
    DSetGraph& g = v.dirTree;
    std::map<int, int> classOfLeaf;
    for (size_t i = 0; i < v.leafOfClass.size(); ++i) classOfLeaf[v.leafOfClass[i]] = static_cast<int>(i);
    for (int c : g.ram_points()) {
        auto nbs = g.neighbors(c);
        std::vector<int> rep;
        for (int nb : nbs) rep.push_back(v.classes[classOfLeaf.at(leaves_in_branch(g, c, nb)[0])][0]);
        int d = static_cast<int>(nbs.size());
        int special = -1;
        for (int b = 0; b < d; ++b) {
            int yes = 0, total = 0;
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j) {
                    if (i == b || j == b) continue;
                    ++total;
                    yes += Rt(ls, v.rep, rep[b], rep[i], rep[j]);
                }
            if (yes == total) {
                if (special >= 0)
                    throw Refutation("specials", where + ": two candidate special branches at " + g.name(c));
                special = b;
            } else if (yes != 0) {
                throw Refutation("specials", where + ": branch " + g.name(nbs[b]) + " at " + g.name(c) +
                                                  " is the apex for some but not all pairs");
            }
        }
        if (special < 0) throw Refutation("specials", where + ": no special branch at " + g.name(c));
        g.set_special(c, nbs[special]);
    }
}

}  // namespace

// ===========================================================================
// reconstruct
// ===========================================================================

ReconstructedTree reconstruct(const LStructure& ls) {
    ReconstructedTree rt;
    rt.names = ls.names();
    int n = ls.size();
    std::vector<std::vector<Triple>> cls;
    try {
        cls = kstar_classes(ls);
    } catch (const DataError& e) {
        throw Refutation("kstar", e.what());
    }
    for (auto& c : cls) {
        RVertex v;
        v.rep = c[0];
        v.triples = c;
        v.jset = j_set(ls, v.rep);
        std::string where = "vertex " + triple_string(ls, v.rep);
        for (auto& t : c)
            if (j_set(ls, t) != v.jset)
                throw Refutation("jsets", where + ": R-equivalent triple " + triple_string(ls, t) + " has another J-set");
        v.classes = e_partition(ls, v.rep);
        if (v.classes.size() < 3) throw Refutation("epartition", where + ": fewer than three directions");
        for (int e : {v.rep[0], v.rep[1], v.rep[2]})
            if (!std::binary_search(v.jset.begin(), v.jset.end(), e))
                throw Refutation("jsets", where + ": J-set misses a member of its own triple");
        try {
            v.ddir = direction_d(ls, v.rep);
        } catch (const DataError& e) {
            throw Refutation("directions", e.what());
        }
        auto ax = check_d_axioms(v.ddir, DLevel::Basic, 1);
        if (!ax.ok()) throw Refutation("directions", where + ": direction relation fails " + ax.failures[0]);
        std::vector<std::string> leafNames;
        for (auto& k : v.classes)
            leafNames.push_back(k.size() == 1 ? ls.names()[k[0]] : set_string(ls, k));
        build_direction_tree(v, leafNames, where);
        assign_specials(ls, v, where);
        rt.vertices.push_back(std::move(v));
    }
    std::stable_sort(rt.vertices.begin(), rt.vertices.end(), [](const RVertex& a, const RVertex& b) {
        if (a.jset.size() != b.jset.size()) return a.jset.size() > b.jset.size();
        return a.rep < b.rep;
    });
    int V = static_cast<int>(rt.vertices.size());
    auto& vs = rt.vertices;
    auto contains = [](const std::vector<int>& big, const std::vector<int>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    // Nested J-sets alone do not make two vertices comparable: incomparable
    // vertices can have nested J-sets, but then the smaller J-set lies inside
    // one direction of the larger. Going up, directions only merge.
    auto refines = [](const RVertex& lo, const RVertex& up) {
        for (auto& k : lo.classes) {
            int target = -1;
            for (int e : k) {
                int c = up.class_of(e);
                if (c < 0) continue;
                if (target >= 0 && c != target) return false;
                target = c;
            }
        }
        return true;
    };
    rt.leq.assign(V, std::vector<char>(V, 0));
    for (int a = 0; a < V; ++a)
        for (int b = 0; b < V; ++b) {
            if (a != b && vs[a].jset == vs[b].jset)
                throw Refutation("jsets", "distinct R-classes " + triple_string(ls, vs[a].rep) + " and " +
                                              triple_string(ls, vs[b].rep) + " share a J-set");
            rt.leq[a][b] = a == b || (contains(vs[a].jset, vs[b].jset) && refines(vs[a], vs[b]));
        }
    if (V == 0) return rt;
    if (static_cast<int>(vs[0].jset.size()) != n)
        throw Refutation("order", "no R-class has the whole domain as its J-set");
    for (auto& k : vs[0].classes)
        if (k.size() != 1) throw Refutation("order", "the root directions are not single elements");
    for (int b = 1; b < V; ++b) {
        std::vector<int> below;
        for (int a = 0; a < V; ++a)
            if (a != b && rt.leq[a][b]) below.push_back(a);
        for (int a1 : below)
            for (int a2 : below)
                if (!rt.leq[a1][a2] && !rt.leq[a2][a1])
                    throw Refutation("order", "the predecessors of " + triple_string(ls, vs[b].rep) +
                                                  " do not form a chain");
        vs[b].parent = below.back();
    }
    for (int a = 0; a < V; ++a)
        for (int b = 0; b < V; ++b) {
            if (a == b || !rt.leq[a][b]) continue;
            const RVertex& lo = vs[a];
            const RVertex& up = vs[b];
            std::string where = triple_string(ls, lo.rep) + " < " + triple_string(ls, up.rep);
            int cp = lo.class_of(up.rep[0]), cq = lo.class_of(up.rep[1]), cs = lo.class_of(up.rep[2]);
            if (cp < 0 || cq < 0 || cs < 0 || cp == cq || cq == cs || cp == cs)
                throw Refutation("cones", where + ": upper triple is not spread over three lower directions");
            const DSetGraph& g = lo.dirTree;
            int r = ram(g, lo.leafOfClass[cp], lo.leafOfClass[cq], lo.leafOfClass[cs]);
            rt.coneMap[{a, b}] = r;
            if (up.parent != a) continue;
            // Each upper direction is one non-special branch at r, and the
            // upper J-set is exactly the union of those branches.
            DistanceTable D(g);
            std::set<int> used;
            std::vector<int> fromBranches;
            for (auto& k : up.classes) {
                int nb = -1;
                for (int e : k) {
                    int c = lo.class_of(e);
                    int here = D.toward(g, r, lo.leafOfClass[c]);
                    if (nb >= 0 && here != nb)
                        throw Refutation("cones", where + ": upper direction " + set_string(ls, k) +
                                                      " meets two branches");
                    nb = here;
                }
                if (nb == g.special(r))
                    throw Refutation("cones", where + ": upper direction " + set_string(ls, k) + " lies in the special branch");
                if (!used.insert(nb).second)
                    throw Refutation("cones", where + ": two upper directions share a branch");
            }
            for (int nb : g.neighbors(r)) {
                if (nb == g.special(r)) continue;
                for (int leaf : leaves_in_branch(g, r, nb)) {
                    for (size_t c = 0; c < lo.leafOfClass.size(); ++c)
                        if (lo.leafOfClass[c] == leaf)
                            fromBranches.insert(fromBranches.end(), lo.classes[c].begin(), lo.classes[c].end());
                }
            }
            std::sort(fromBranches.begin(), fromBranches.end());
            if (fromBranches != up.jset)
                throw Refutation("cones", where + ": upper J-set is not the union of the non-special branches");
        }
    for (int a = 0; a < V; ++a) {
        std::set<int> seen;
        for (int b = 0; b < V; ++b)
            if (vs[b].parent == a && !seen.insert(rt.coneMap.at({a, b})).second)
                throw Refutation("cones", "two successors of " + triple_string(ls, vs[a].rep) +
                                              " sit at the same ramification point");
    }
    return rt;
}

// ===========================================================================
// membership
// ===========================================================================

namespace {

TreeOfDSets tree_from(const ReconstructedTree& rt) {
    TreeOfDSets t;
    const auto& vs = rt.vertices;
    int V = static_cast<int>(vs.size());
    for (int i = 0; i < V; ++i) {
        int par = vs[i].parent;
        t.add_vertex("v" + std::to_string(i), vs[i].dirTree, par, par < 0 ? -1 : rt.coneMap.at({par, i}));
    }
    t.root = 0;
    for (size_t c = 0; c < vs[0].classes.size(); ++c) t.element[vs[0].leafOfClass[c]] = rt.names[vs[0].classes[c][0]];
    for (int i = 1; i < V; ++i) {
        const RVertex& up = vs[i];
        const RVertex& lo = vs[up.parent];
        const DSetGraph& g = lo.dirTree;
        int r = t.fram[i];
        DistanceTable D(g);
        for (size_t c = 0; c < up.classes.size(); ++c) {
            int lc = lo.class_of(up.classes[c][0]);
            t.g[i][up.leafOfClass[c]] = D.toward(g, r, lo.leafOfClass[lc]);
        }
    }
    int next = V;
    for (int i = 0; i < V; ++i) {
        const DSetGraph& g = vs[i].dirTree;
        std::set<int> taken;
        for (int j = 0; j < V; ++j)
            if (vs[j].parent == i) taken.insert(t.fram[j]);
        for (int r : g.ram_points()) {
            if (taken.count(r)) continue;
            if (g.degree(r) != 3)
                throw Refutation("completion", "ramification point " + g.name(r) + " of degree " +
                                                   std::to_string(g.degree(r)) + " has no successor class");
            std::vector<int> ns;
            for (int nb : g.neighbors(r))
                if (nb != g.special(r)) ns.push_back(nb);
            DSetGraph e;
            int a = e.add_node(g.name(ns[0])), b = e.add_node(g.name(ns[1]));
            e.add_edge(a, b);
            int w = t.add_vertex("v" + std::to_string(next++), e, i, r);
            t.g[w][a] = ns[0];
            t.g[w][b] = ns[1];
        }
    }
    return t;
}

TreeOfDSets small_tree(const std::vector<std::string>& names) {
    TreeOfDSets t;
    DSetGraph d;
    std::vector<int> ids;
    for (auto& nm : names) ids.push_back(d.add_node(nm));
    if (ids.size() == 2) d.add_edge(ids[0], ids[1]);
    t.add_vertex("v0", d, -1, -1);
    for (size_t i = 0; i < ids.size(); ++i) t.element[ids[i]] = names[i];
    return t;
}

}  // namespace

Membership is_member_of_D(const LStructure& ls) {
    Membership out;
    int n = ls.size();
    if (n == 0) {
        out.refutation = "empty domain";
        return out;
    }
    try {
        if (n >= 3 && kstar(ls).empty()) throw Refutation("kstar", "no L-triple on three or more elements");
        TreeOfDSets t = n <= 2 ? small_tree(ls.names()) : tree_from(reconstruct(ls));
        auto rep = validate(t);
        if (!rep.ok()) throw Refutation("validate", rep.summary());
        LStructure real = realize(t).ls;
        std::vector<int> perm;
        for (auto& nm : ls.names()) perm.push_back(real.index_of(nm));
        std::string diff;
        if (!same_relations(ls, real.restrict(perm), &diff))
            throw Refutation("compare", "rebuilt tree realizes different relations: " + diff);
        out.member = true;
        out.tree = std::move(t);
    } catch (const Refutation& e) {
        out.refutation = e.what();
    } catch (const DataError& e) {
        out.refutation = e.what();
    } catch (const ArgumentError& e) {
        out.refutation = e.what();
    }
    return out;
}

// ===========================================================================
// round trip against the source tree
// ===========================================================================

std::vector<std::string> check_roundtrip(const TreeOfDSets& t) {
    std::vector<std::string> bad;
    auto real = realize(t);
    const LStructure& ls = real.ls;
    ReconstructedTree rt;
    try {
        rt = reconstruct(ls);
    } catch (const Refutation& e) {
        return {std::string("reconstruct refuted a realized structure: ") + e.what()};
    }
    auto proj = projections(t);
    int n = ls.size();
    std::set<int> witnessing;
    for (int v = 0; v < t.vertex_count(); ++v)
        if (t.label[v].leaves().size() >= 3) witnessing.insert(v);
    int V = static_cast<int>(rt.vertices.size());
    std::vector<int> w(V);
    std::set<int> image;
    for (int i = 0; i < V; ++i) {
        const auto& rep = rt.vertices[i].rep;
        w[i] = ls.l_group(rep[0], rep[1], rep[2]);
        image.insert(w[i]);
    }
    if (static_cast<int>(image.size()) != V) bad.push_back("two reconstructed vertices share a witness");
    if (image != witnessing) bad.push_back("reconstructed vertices differ from the L-witnessing vertices");
    for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j)
            if (static_cast<bool>(rt.leq[i][j]) != below_or_equal(t, w[i], w[j]))
                bad.push_back("order differs between " + t.vid[w[i]] + " and " + t.vid[w[j]]);
    for (int i = 0; i < V; ++i) {
        const RVertex& rv = rt.vertices[i];
        int v = w[i];
        std::map<int, std::vector<int>> byLeaf;
        for (int e = 0; e < n; ++e)
            if (proj[v][e] >= 0) byLeaf[proj[v][e]].push_back(e);
        std::vector<std::vector<int>> expect;
        for (auto& [l, es] : byLeaf) expect.push_back(es);
        std::sort(expect.begin(), expect.end());
        auto got = rv.classes;
        std::sort(got.begin(), got.end());
        if (got != expect) {
            bad.push_back("E-partition differs from the leaf partition at " + t.vid[v]);
            continue;
        }
        std::vector<int> leaves;
        for (auto& k : rv.classes) leaves.push_back(proj[v][k[0]]);
        if (!(leaf_d_relation(t.label[v], leaves) == rv.ddir))
            bad.push_back("direction relation differs from the leaf relation at " + t.vid[v]);
        auto ax = check_d_axioms(rv.ddir, DLevel::Basic, 1);
        if (!ax.ok()) bad.push_back("direction relation at " + t.vid[v] + " fails " + ax.failures[0]);
    }
    return bad;
}

}  // namespace treeds
