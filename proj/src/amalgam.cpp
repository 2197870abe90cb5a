#include "treeds/amalgam.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

namespace treeds {

using Kind = ExtensionDescriptor::Kind;
using Choice = ExtensionDescriptor::Choice;

// ===========================================================================
// descriptors
// ===========================================================================

ExtensionDescriptor ExtensionDescriptor::type_i(const std::string& e) {
    ExtensionDescriptor d;
    d.newElement = e;
    d.kind = Kind::TypeI;
    return d;
}

ExtensionDescriptor ExtensionDescriptor::type_iia(const std::string& e, const std::string& ram,
                                                  ExtensionDescriptor inner) {
    ExtensionDescriptor d;
    d.newElement = e;
    d.kind = Kind::TypeIIa;
    d.ram = ram;
    d.inner = std::make_shared<const ExtensionDescriptor>(std::move(inner));
    return d;
}

ExtensionDescriptor ExtensionDescriptor::type_iib(const std::string& e, const std::string& u,
                                                  const std::string& v, Choice c) {
    ExtensionDescriptor d;
    d.newElement = e;
    d.kind = Kind::TypeIIb;
    d.edgeU = u;
    d.edgeV = v;
    d.choice = c;
    return d;
}

int ExtensionDescriptor::depth() const { return kind == Kind::TypeIIa ? 1 + inner->depth() : 1; }

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::TypeI: return "TypeI";
        case Kind::TypeIIa: return "TypeIIa";
        case Kind::TypeIIb: return "TypeIIb";
    }
    return "?";
}

std::string ExtensionDescriptor::to_string() const {
    std::ostringstream os;
    os << kind_name(kind) << "(" << newElement;
    if (kind == Kind::TypeIIa) os << " at " << ram << ": " << inner->to_string();
    if (kind == Kind::TypeIIb) {
        os << " on " << edgeU << "-" << edgeV << ", special ";
        os << (choice == Choice::NewLeaf ? "new leaf" : choice == Choice::SideU ? edgeU : edgeV);
    }
    os << ")";
    return os.str();
}

bool ExtensionDescriptor::operator==(const ExtensionDescriptor& o) const {
    if (newElement != o.newElement || kind != o.kind) return false;
    switch (kind) {
        case Kind::TypeI: return true;
        case Kind::TypeIIa: return ram == o.ram && *inner == *o.inner;
        case Kind::TypeIIb: return edgeU == o.edgeU && edgeV == o.edgeV && choice == o.choice;
    }
    return false;
}

// ===========================================================================
// embeddings
// ===========================================================================

Embedding verify_embedding(const TreeOfDSets& from, const TreeOfDSets& to, std::vector<int> map) {
    Embedding e;
    e.verified = is_embedding(realize(from).ls, realize(to).ls, map);
    e.elementMap = std::move(map);
    return e;
}

Embedding name_embedding(const TreeOfDSets& from, const TreeOfDSets& to) {
    auto a = from.domain(), b = to.domain();
    std::vector<int> map;
    for (auto& x : a) {
        auto it = std::lower_bound(b.begin(), b.end(), x);
        if (it == b.end() || *it != x) throw ArgumentError("element '" + x + "' missing from the target");
        map.push_back(static_cast<int>(it - b.begin()));
    }
    return verify_embedding(from, to, std::move(map));
}

// ===========================================================================
// applying a descriptor
// ===========================================================================

namespace {

struct Applied {
    TreeOfDSets t;
    std::string node;  // new ramification point (II(b)) or new root centre (I)
};

bool in_domain(const TreeOfDSets& t, const std::string& e) {
    for (auto& [l, n] : t.element)
        if (n == e) return true;
    return false;
}

// A node of d named `name` is renamed out of the way.
void free_node_name(DSetGraph& d, const std::string& name) {
    int v = d.find(name);
    if (v >= 0) d.rename_node(v, d.fresh_name(name + "_"));
}

std::set<int> subtree_of(const TreeOfDSets& t, int nu) {
    std::set<int> out{nu};
    std::vector<int> st{nu};
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int c : t.children(v))
            if (out.insert(c).second) st.push_back(c);
    }
    return out;
}

// Appends the vertices of `src` below out-vertex `par` at node `fr`; the
// root leaves of src are sent to the nodes given by `target`. Vertex ids are
// prefixed, then made unique.
void attach(TreeOfDSets& out, const TreeOfDSets& src, int par, int fr, const std::function<int(int)>& target,
            const std::string& prefix = "") {
    std::set<std::string> used(out.vid.begin(), out.vid.end());
    for (auto& id : src.vid) used.insert(prefix + id);
    std::map<int, int> remap;
    int k = 0;
    for (int v : src.topological()) {
        std::string id = prefix + src.vid[v];
        if (std::find(out.vid.begin(), out.vid.end(), id) != out.vid.end()) {
            while (used.count("v" + std::to_string(k))) ++k;
            id = "v" + std::to_string(k);
            used.insert(id);
        }
        int nv;
        if (v == src.root) {
            nv = out.add_vertex(id, src.label[v], par, fr);
            for (int l : src.label[v].leaves()) out.g[nv][l] = target(l);
        } else {
            nv = out.add_vertex(id, src.label[v], remap.at(src.parent[v]), src.fram[v]);
            out.g[nv] = src.g[v];
        }
        remap[v] = nv;
    }
}

// Copy of t without the subtree at nu; the root stays at index 0.
TreeOfDSets without_subtree(const TreeOfDSets& t, int nu) {
    auto drop = subtree_of(t, nu);
    TreeOfDSets out;
    std::map<int, int> remap;
    for (int v : t.topological()) {
        if (drop.count(v)) continue;
        int par = v == t.root ? -1 : remap.at(t.parent[v]);
        int nv = out.add_vertex(t.vid[v], t.label[v], par, t.fram[v]);
        out.g[nv] = t.g[v];
        remap[v] = nv;
    }
    out.root = 0;
    out.element = t.element;
    return out;
}

// Replace the successor at root ramification point r by `sub`, whose domain
// is the names of r's non-special neighbours plus the placeholders, and add
// one new root leaf per placeholder.
TreeOfDSets graft(const TreeOfDSets& t, int r, const TreeOfDSets& sub,
                  const std::vector<std::pair<std::string, std::string>>& placeholders) {
    const DSetGraph& R0 = t.label[t.root];
    int nu = t.successor_at(t.root, r);
    if (nu < 0) throw ArgumentError("ramification point without successor");
    TreeOfDSets out = without_subtree(t, nu);
    DSetGraph& R = out.label[0];
    std::map<std::string, int> newLeaf;
    for (auto& [ph, e] : placeholders) {
        free_node_name(R, e);
        int en = R.add_node(e);
        R.add_edge(r, en);
        out.element[en] = e;
        newLeaf[ph] = en;
    }
    attach(out, sub, 0, r, [&](int l) {
        const std::string& nm = sub.element.at(l);
        auto it = newLeaf.find(nm);
        return it != newLeaf.end() ? it->second : R0.at(nm);
    });
    return out;
}

std::string placeholder_for(const TreeOfDSets& sub, const std::string& base) {
    std::string p = base;
    while (in_domain(sub, p)) p = "#" + p;
    return p;
}

Applied apply_impl(const TreeOfDSets& t, const ExtensionDescriptor& d) {
    const std::string& e = d.newElement;
    if (e.empty()) throw ArgumentError("extension without a new element name");
    if (in_domain(t, e)) throw ArgumentError("new element '" + e + "' already in the domain");
    if (t.domain_size() == 0) throw ArgumentError("cannot extend an empty tree");
    const DSetGraph& R0 = t.label[t.root];

    if (d.kind == Kind::TypeI) {
        auto dom = t.domain();
        TreeOfDSets out;
        if (dom.size() == 1) {
            DSetGraph g;
            int a = g.add_node(dom[0]), b = g.add_node(e);
            g.add_edge(a, b);
            out.add_vertex(t.vid[t.root], g, -1, -1);
            out.element[a] = dom[0];
            out.element[b] = e;
            return {out, ""};
        }
        DSetGraph star;
        std::map<std::string, int> leafOf;
        for (auto& x : dom) leafOf[x] = star.add_node(x);
        int en = star.add_node(e);
        int c = star.add_node(star.fresh_name("c"));
        for (int v = 0; v < c; ++v) star.add_edge(c, v);
        star.set_special(c, en);
        std::string centre = star.name(c);
        out.add_vertex(t.fresh_vertex_id(), star, -1, -1);
        for (auto& [x, l] : leafOf) out.element[l] = x;
        out.element[en] = e;
        attach(out, t, 0, c, [&](int l) { return leafOf.at(t.element.at(l)); });
        return {out, centre};
    }

    if (d.kind == Kind::TypeIIa) {
        int r = R0.find(d.ram);
        if (r < 0 || !R0.is_ram(r)) throw ArgumentError("'" + d.ram + "' is not a root ramification point");
        if (!d.inner) throw ArgumentError("II(a) descriptor without inner descriptor");
        TreeOfDSets sub = branch_named_subtree(t, t.successor_at(t.root, r));
        if (in_domain(sub, d.inner->newElement))
            throw ArgumentError("inner placeholder '" + d.inner->newElement + "' clashes with a branch name");
        TreeOfDSets sub2 = apply_impl(sub, *d.inner).t;
        return {graft(t, r, sub2, {{d.inner->newElement, e}}), ""};
    }

    int u = R0.find(d.edgeU), v = R0.find(d.edgeV);
    if (u < 0 || v < 0 || !R0.adjacent(u, v))
        throw ArgumentError("'" + d.edgeU + "'-'" + d.edgeV + "' is not a root edge");
    TreeOfDSets out = t;
    DSetGraph& R = out.label[out.root];
    free_node_name(R, e);
    int en = R.add_node(e);
    int m = R.add_node(R.fresh_name("m"));
    R.remove_edge(u, v);
    R.add_edge(u, m);
    R.add_edge(m, v);
    R.add_edge(m, en);
    if (R.is_ram(u) && R.special(u) == v) R.set_special(u, m);
    if (R.is_ram(v) && R.special(v) == u) R.set_special(v, m);
    R.set_special(m, d.choice == Choice::NewLeaf ? en : d.choice == Choice::SideU ? u : v);
    out.element[en] = e;
    for (int w : out.children(out.root)) {
        int from = out.fram[w] == u ? v : out.fram[w] == v ? u : -1;
        if (from < 0) continue;
        for (auto& [l, nb] : out.g[w])
            if (nb == from) nb = m;
    }
    DSetGraph two;
    std::vector<int> side;
    for (int x : R.neighbors(m))
        if (x != R.special(m)) side.push_back(x);
    int a = two.add_node(R.name(side[0])), b = two.add_node(R.name(side[1]));
    two.add_edge(a, b);
    std::string mName = R.name(m);
    int w = out.add_vertex(out.fresh_vertex_id(), two, out.root, m);  // invalidates R
    out.g[w][a] = side[0];
    out.g[w][b] = side[1];
    return {out, mName};
}

}  // namespace

TreeOfDSets apply_extension(const TreeOfDSets& t, const ExtensionDescriptor& d) { return apply_impl(t, d).t; }

// ===========================================================================
// enumeration and classification
// ===========================================================================

std::vector<Extension> all_extensions(const TreeOfDSets& t, const std::string& e) {
    require_valid(t);
    std::vector<Extension> out;
    auto ti = ExtensionDescriptor::type_i(e);
    out.push_back({ti, apply_extension(t, ti)});
    const DSetGraph& R = t.label[t.root];

    std::vector<std::pair<std::string, int>> rams;
    for (int r : R.ram_points()) rams.emplace_back(R.name(r), r);
    std::sort(rams.begin(), rams.end());
    for (auto& [name, r] : rams) {
        TreeOfDSets sub = branch_named_subtree(t, t.successor_at(t.root, r));
        std::string ph = placeholder_for(sub, "#new");
        for (auto& inner : all_extensions(sub, ph)) {
            auto d = ExtensionDescriptor::type_iia(e, name, inner.descriptor);
            out.push_back({d, graft(t, r, inner.tree, {{ph, e}})});
        }
    }

    std::vector<std::pair<std::string, std::string>> edges;
    for (auto [a, b] : R.edges()) {
        std::string x = R.name(a), y = R.name(b);
        if (y < x) std::swap(x, y);
        edges.emplace_back(x, y);
    }
    std::sort(edges.begin(), edges.end());
    for (auto& [u, v] : edges)
        for (Choice c : {Choice::NewLeaf, Choice::SideU, Choice::SideV}) {
            auto d = ExtensionDescriptor::type_iib(e, u, v, c);
            out.push_back({d, apply_extension(t, d)});
        }
    return out;
}

namespace {

std::string fresh_element(const std::vector<std::string>& taken, const std::string& base) {
    std::set<std::string> s(taken.begin(), taken.end());
    if (!s.count(base)) return base;
    for (int k = 1;; ++k)
        if (!s.count(base + std::to_string(k))) return base + std::to_string(k);
}

}  // namespace

std::vector<Extension> enumerate_extensions(const TreeOfDSets& t, const std::string& newElement) {
    std::string e = newElement.empty() ? fresh_element(t.domain(), "e") : newElement;
    std::vector<Extension> out;
    std::unordered_set<std::string> seen;
    for (auto& x : all_extensions(t, e))
        if (seen.insert(labelled_key(realize(x.tree).ls)).second) out.push_back(std::move(x));
    return out;
}

ExtensionDescriptor classify(const TreeOfDSets& a, const TreeOfDSets& e, const Embedding& emb) {
    auto domA = a.domain(), domE = e.domain();
    if (domE.size() != domA.size() + 1 || emb.elementMap.size() != domA.size())
        throw ArgumentError("classify needs a one-point extension");
    if (!is_embedding(realize(a).ls, realize(e).ls, emb.elementMap))
        throw ArgumentError("classify: the map is not an embedding");
    std::vector<char> hit(domE.size(), 0);
    std::map<std::string, std::string> ren;
    for (size_t i = 0; i < domA.size(); ++i) {
        hit.at(emb.elementMap[i]) = 1;
        ren[domE[emb.elementMap[i]]] = domA[i];
    }
    int k = static_cast<int>(std::find(hit.begin(), hit.end(), 0) - hit.begin());
    std::string x = fresh_element(domA, domE[k]);
    ren[domE[k]] = x;
    LStructure target = realize(rename_elements(e, ren)).ls;
    for (auto& ext : all_extensions(a, x))
        if (same_relations(realize(ext.tree).ls, target)) return ext.descriptor;
    throw InconsistencyError("no extension descriptor reproduces the given one-point extension");
}

// ===========================================================================
// peeling
// ===========================================================================

namespace {

bool induces_member(const TreeOfDSets& e, std::vector<int> subset) {
    std::sort(subset.begin(), subset.end());
    return is_member_of_D(realize_on(e, subset)).member;
}

TreeOfDSets induced_member(const TreeOfDSets& e, std::vector<int> subset) {
    std::sort(subset.begin(), subset.end());
    auto m = is_member_of_D(realize_on(e, subset));
    if (!m.member) throw InconsistencyError("induced structure is not a member: " + m.refutation);
    return *m.tree;
}

}  // namespace

std::vector<int> peel(const TreeOfDSets& e, const std::vector<int>& a) {
    int n = e.domain_size();
    if (n > 64) throw ArgumentError("peel supports at most 64 elements");
    uint64_t start = 0;
    for (int i : a) {
        if (i < 0 || i >= n) throw ArgumentError("peel: index out of range");
        start |= uint64_t(1) << i;
    }
    std::vector<int> cur(a.begin(), a.end());
    if (!cur.empty() && !induces_member(e, cur)) throw ArgumentError("peel: A does not induce a member");
    uint64_t full = n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
    std::set<uint64_t> dead;
    std::vector<int> order;
    std::function<bool(uint64_t)> go = [&](uint64_t s) {
        if (s == full) return true;
        if (dead.count(s)) return false;
        for (int x = 0; x < n; ++x) {
            if (s >> x & 1) continue;
            std::vector<int> sub;
            for (int i = 0; i < n; ++i)
                if ((s >> i & 1) || i == x) sub.push_back(i);
            if (!induces_member(e, sub)) continue;
            order.push_back(x);
            if (go(s | uint64_t(1) << x)) return true;
            order.pop_back();
        }
        dead.insert(s);
        return false;
    };
    if (!go(start)) throw InconsistencyError("no membership-preserving order of the extra elements");
    return order;
}

// ===========================================================================
// amalgamation
// ===========================================================================

namespace {

// Renames root-label nodes called like the new elements, and patches the
// top-level node references of the descriptors.
void clear_names(TreeOfDSets& a, ExtensionDescriptor& d1, ExtensionDescriptor& d2) {
    DSetGraph& R = a.label[a.root];
    for (auto* e : {&d1.newElement, &d2.newElement}) {
        int v = R.find(*e);
        if (v < 0) continue;
        std::string old = *e, nn = R.fresh_name(old + "_");
        R.rename_node(v, nn);
        for (auto* d : {&d1, &d2})
            for (auto* s : {&d->ram, &d->edgeU, &d->edgeV})
                if (*s == old) *s = nn;
    }
}

ExtensionDescriptor with_element(const ExtensionDescriptor& d, const std::string& e) {
    ExtensionDescriptor c = d;
    c.newElement = e;
    return c;
}

}  // namespace

TreeOfDSets amalgamate_descriptors(const TreeOfDSets& a0, const ExtensionDescriptor& d10,
                                   const ExtensionDescriptor& d20) {
    if (d10.newElement == d20.newElement) throw ArgumentError("amalgamated extensions need distinct new elements");
    TreeOfDSets a = a0;
    ExtensionDescriptor d1 = d10, d2 = d20;
    clear_names(a, d1, d2);

    // Case i: two new roots, the second placed beneath the first.
    if (d1.kind == Kind::TypeI && d2.kind == Kind::TypeI) return apply_extension(apply_extension(a, d1), d2);
    // Case ii: the Type I root goes beneath the other extension.
    if (d1.kind == Kind::TypeI) return apply_extension(apply_extension(a, d2), d1);
    if (d2.kind == Kind::TypeI) return apply_extension(apply_extension(a, d1), d2);

    // Case iii(1): both at the same ramification point; recurse into the
    // induced structure there and hang both new leaves at r.
    if (d1.kind == Kind::TypeIIa && d2.kind == Kind::TypeIIa && d1.ram == d2.ram) {
        const DSetGraph& R = a.label[a.root];
        int r = R.at(d1.ram);
        TreeOfDSets sub = branch_named_subtree(a, a.successor_at(a.root, r));
        std::string p1 = placeholder_for(sub, "#1"), p2 = placeholder_for(sub, "#2");
        TreeOfDSets sub12 = amalgamate_descriptors(sub, with_element(*d1.inner, p1), with_element(*d2.inner, p2));
        return graft(a, r, sub12, {{p1, d1.newElement}, {p2, d2.newElement}});
    }

    // Same edge: two distinct new ramification points, the second between
    // the first and edgeU.
    if (d1.kind == Kind::TypeIIb && d2.kind == Kind::TypeIIb) {
        ExtensionDescriptor e2 = d2;
        if (e2.edgeU == d1.edgeV && e2.edgeV == d1.edgeU) {
            std::swap(e2.edgeU, e2.edgeV);
            if (e2.choice != Choice::NewLeaf) e2.choice = e2.choice == Choice::SideU ? Choice::SideV : Choice::SideU;
        }
        if (e2.edgeU == d1.edgeU && e2.edgeV == d1.edgeV) {
            Applied x = apply_impl(a, d1);
            e2.edgeV = x.node;
            return apply_extension(x.t, e2);
        }
    }

    // Remaining cases: the two changes touch disjoint parts of the root label.
    return apply_extension(apply_extension(a, d1), d2);
}

namespace {

// The image of A inside e gets A's names; other elements keep theirs unless
// taken, in which case they are primed.
TreeOfDSets rename_over(const TreeOfDSets& a, const TreeOfDSets& e, const Embedding& f,
                        std::set<std::string>& taken, std::vector<std::string>& newNames) {
    auto domA = a.domain(), domE = e.domain();
    if (f.elementMap.size() != domA.size()) throw ArgumentError("embedding size does not match its source");
    std::map<std::string, std::string> ren;
    std::vector<char> hit(domE.size(), 0);
    for (size_t i = 0; i < domA.size(); ++i) {
        int j = f.elementMap[i];
        if (j < 0 || j >= static_cast<int>(domE.size()) || hit[j]) throw ArgumentError("embedding is not injective");
        hit[j] = 1;
        ren[domE[j]] = domA[i];
    }
    newNames.assign(domE.size(), "");
    for (size_t j = 0; j < domE.size(); ++j) {
        if (hit[j]) {
            newNames[j] = ren[domE[j]];
            continue;
        }
        std::string x = domE[j];
        while (taken.count(x)) x += "'";
        taken.insert(x);
        ren[domE[j]] = x;
        newNames[j] = x;
    }
    return rename_elements(e, ren);
}

int index_in(const std::vector<std::string>& dom, const std::string& x) {
    auto it = std::lower_bound(dom.begin(), dom.end(), x);
    if (it == dom.end() || *it != x) throw InconsistencyError("element '" + x + "' lost in amalgamation");
    return static_cast<int>(it - dom.begin());
}

// One-point amalgam where the names already agree on A.
TreeOfDSets amalgamate_named(const TreeOfDSets& a, const TreeOfDSets& e1, const TreeOfDSets& e2) {
    auto d1 = classify(a, e1, name_embedding(a, e1));
    auto d2 = classify(a, e2, name_embedding(a, e2));
    TreeOfDSets t = amalgamate_descriptors(a, d1, d2);
    for (auto* s : {&e1, &e2})
        if (!name_embedding(*s, t).verified)
            throw InconsistencyError("amalgam of " + d1.to_string() + " and " + d2.to_string() +
                                     " does not extend both sides");
    return t;
}

Amalgam finish(const TreeOfDSets& t, const std::vector<std::string>& n1, const TreeOfDSets& e1,
               const std::vector<std::string>& n2, const TreeOfDSets& e2) {
    Amalgam m;
    m.tree = t;
    auto dom = t.domain();
    std::vector<int> g1, g2;
    for (auto& x : n1) g1.push_back(index_in(dom, x));
    for (auto& x : n2) g2.push_back(index_in(dom, x));
    m.g1 = verify_embedding(e1, t, g1);
    m.g2 = verify_embedding(e2, t, g2);
    return m;
}

void require_amalgam(const TreeOfDSets& a, const TreeOfDSets& e1, const Embedding& f1, const TreeOfDSets& e2,
                     const Embedding& f2, const Amalgam& m) {
    auto problems = check_amalgam(a, e1, f1, e2, f2, m);
    if (!problems.empty()) throw InconsistencyError("amalgamation failed: " + problems.front());
}

}  // namespace

Amalgam amalgamate_one_point(const TreeOfDSets& a, const TreeOfDSets& e1, const Embedding& f1,
                             const TreeOfDSets& e2, const Embedding& f2) {
    int n = a.domain_size();
    if (e1.domain_size() != n + 1 || e2.domain_size() != n + 1)
        throw ArgumentError("amalgamate_one_point needs one-point extensions");
    auto ra = realize(a).ls;
    if (!is_embedding(ra, realize(e1).ls, f1.elementMap) || !is_embedding(ra, realize(e2).ls, f2.elementMap))
        throw ArgumentError("amalgamate_one_point: a given map is not an embedding");
    auto domA = a.domain();
    std::set<std::string> taken(domA.begin(), domA.end());
    std::vector<std::string> n1, n2;
    TreeOfDSets r1 = rename_over(a, e1, f1, taken, n1);
    TreeOfDSets r2 = rename_over(a, e2, f2, taken, n2);
    Amalgam m = finish(amalgamate_named(a, r1, r2), n1, e1, n2, e2);
    require_amalgam(a, e1, f1, e2, f2, m);
    return m;
}

Amalgam amalgamate(const TreeOfDSets& a, const TreeOfDSets& e1, const Embedding& f1, const TreeOfDSets& e2,
                   const Embedding& f2) {
    auto ra = realize(a).ls;
    if (!is_embedding(ra, realize(e1).ls, f1.elementMap) || !is_embedding(ra, realize(e2).ls, f2.elementMap))
        throw ArgumentError("amalgamate: a given map is not an embedding");
    auto domA = a.domain();
    std::set<std::string> taken(domA.begin(), domA.end());
    std::vector<std::string> n1, n2;
    TreeOfDSets r1 = rename_over(a, e1, f1, taken, n1);
    TreeOfDSets r2 = rename_over(a, e2, f2, taken, n2);

    // Chains A = B_0 < ... < B_k = E1 and A = C_0 < ... < C_m = E2, then a
    // grid of one-point amalgams D[i][j] over D[i-1][j-1].
    auto chain = [&](const TreeOfDSets& e) {
        auto dom = e.domain();
        std::vector<int> base;
        for (auto& x : domA) base.push_back(index_in(dom, x));
        auto order = peel(e, base);
        std::vector<TreeOfDSets> out{a};
        std::vector<int> cur = base;
        for (int x : order) {
            cur.push_back(x);
            out.push_back(cur.size() == dom.size() ? e : induced_member(e, cur));
        }
        return out;
    };
    auto B = chain(r1), C = chain(r2);
    std::vector<TreeOfDSets> prev = C;  // row i-1
    for (size_t i = 1; i < B.size(); ++i) {
        std::vector<TreeOfDSets> row{B[i]};
        for (size_t j = 1; j < C.size(); ++j) row.push_back(amalgamate_named(prev[j - 1], row[j - 1], prev[j]));
        prev = std::move(row);
    }
    Amalgam m = finish(prev.back(), n1, e1, n2, e2);
    require_amalgam(a, e1, f1, e2, f2, m);
    return m;
}

std::vector<std::string> check_amalgam(const TreeOfDSets& a, const TreeOfDSets& e1, const Embedding& f1,
                                       const TreeOfDSets& e2, const Embedding& f2, const Amalgam& m) {
    std::vector<std::string> out;
    auto rt = realize(m.tree).ls;
    std::string diff;
    if (!is_embedding(realize(e1).ls, rt, m.g1.elementMap, &diff)) out.push_back("g1 is not an embedding: " + diff);
    if (!is_embedding(realize(e2).ls, rt, m.g2.elementMap, &diff)) out.push_back("g2 is not an embedding: " + diff);
    if (!out.empty()) return out;
    int n = a.domain_size();
    std::set<int> img1;
    for (int i = 0; i < n; ++i)
        if (m.g1.elementMap[f1.elementMap[i]] != m.g2.elementMap[f2.elementMap[i]])
            out.push_back("embeddings do not commute on element " + a.domain()[i]);
    std::vector<char> inA1(e1.domain_size(), 0), inA2(e2.domain_size(), 0);
    for (int i = 0; i < n; ++i) inA1[f1.elementMap[i]] = inA2[f2.elementMap[i]] = 1;
    for (int j = 0; j < e1.domain_size(); ++j)
        if (!inA1[j]) img1.insert(m.g1.elementMap[j]);
    for (int j = 0; j < e2.domain_size(); ++j)
        if (!inA2[j] && img1.count(m.g2.elementMap[j])) out.push_back("new elements identified");
    auto rep = validate(m.tree);
    if (!rep.ok()) out.push_back("amalgam tree invalid: " + rep.summary());
    auto mem = is_member_of_D(rt);
    if (!mem.member) out.push_back("amalgam is not a member: " + mem.refutation);
    return out;
}

// ===========================================================================
// joint embedding
// ===========================================================================

JointEmbedding joint_embed(const TreeOfDSets& a, const TreeOfDSets& b) {
    require_valid(a);
    require_valid(b);
    auto domA = a.domain(), domB = b.domain();
    if (domA.empty() || domB.empty()) throw ArgumentError("joint_embed needs nonempty structures");
    std::set<std::string> taken(domA.begin(), domA.end());
    std::map<std::string, std::string> renB;
    for (auto& x : domB) {
        std::string y = x;
        while (taken.count(y)) y += "'";
        taken.insert(y);
        renB[x] = y;
    }

    JointEmbedding out;
    TreeOfDSets& t = out.tree;
    DSetGraph R;
    std::map<std::string, int> leafOf;
    for (auto& x : domA) leafOf[x] = R.add_node(x);
    for (auto& x : domB) leafOf[renB[x]] = R.add_node(renB[x]);
    int n = static_cast<int>(domA.size()), m = static_cast<int>(domB.size());
    int ra = -1, rb = -1;
    if (n >= 2) ra = R.add_node(R.fresh_name("r"));
    if (m >= 2) rb = R.add_node(R.fresh_name("r'"));
    // A side hangs off ra, or is a single leaf at rb's special position.
    for (auto& x : domA) {
        if (ra >= 0) R.add_edge(ra, leafOf[x]);
    }
    for (auto& x : domB) {
        if (rb >= 0) R.add_edge(rb, leafOf[renB[x]]);
    }
    int aEnd = ra >= 0 ? ra : leafOf[domA[0]];
    int bEnd = rb >= 0 ? rb : leafOf[renB[domB[0]]];
    R.add_edge(aEnd, bEnd);
    if (ra >= 0) R.set_special(ra, bEnd);
    if (rb >= 0) R.set_special(rb, aEnd);
    t.add_vertex("rho", R, -1, -1);
    for (auto& [x, l] : leafOf) t.element[l] = x;
    if (ra >= 0) attach(t, a, 0, ra, [&](int l) { return leafOf.at(a.element.at(l)); }, "a:");
    if (rb >= 0) attach(t, b, 0, rb, [&](int l) { return leafOf.at(renB.at(b.element.at(l))); }, "b:");

    auto dom = t.domain();
    std::vector<int> fa, fb;
    for (auto& x : domA) fa.push_back(index_in(dom, x));
    for (auto& x : domB) fb.push_back(index_in(dom, renB[x]));
    out.fa = verify_embedding(a, t, fa);
    out.fb = verify_embedding(b, t, fb);
    if (!out.fa.verified || !out.fb.verified) throw InconsistencyError("joint embedding does not embed both sides");
    return out;
}

// ===========================================================================
// hull
// ===========================================================================

HullContext::HullContext(const TreeOfDSets& t)
    : t_(&t), n_(t.domain_size()), proj_(projections(t)), order_(t.topological()) {
    dist_.reserve(t.vertex_count());
    for (int v = 0; v < t.vertex_count(); ++v) dist_.emplace_back(t.label[v]);
}

HullContext::Span HullContext::span(int v, const std::vector<char>& in) const {
    Span s;
    const DSetGraph& d = t_->label[v];
    std::vector<int> hit;
    for (int i = 0; i < n_; ++i)
        if (in[i] && proj_[v][i] >= 0) hit.push_back(proj_[v][i]);
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    if (hit.size() < 3) return s;
    for (int x : d.ram_points()) {
        std::set<int> dirs;
        for (int h : hit) dirs.insert(dist_[v].toward(d, x, h));
        if (dirs.size() >= 3) s.rams.push_back(x);
    }
    return s;
}

// Skip vertices where the set sits in distinct non-special branches of a
// single ramification point: nothing is witnessed there.
int HullContext::start_vertex(const std::vector<char>& in) const {
    int v = t_->root;
    for (;;) {
        auto s = span(v, in);
        if (s.rams.size() != 1) return v;
        int r = s.rams[0];
        const DSetGraph& d = t_->label[v];
        for (int i = 0; i < n_; ++i)
            if (in[i] && (proj_[v][i] < 0 || dist_[v].toward(d, r, proj_[v][i]) == d.special(r))) return v;
        int w = t_->successor_at(v, r);
        if (w < 0) return v;
        v = w;
    }
}

std::vector<int> HullContext::hull(const std::vector<int>& a) const {
    if (a.empty()) throw ArgumentError("hull of the empty set");
    std::vector<char> in(n_, 0);
    for (int i : a) {
        if (i < 0 || i >= n_) throw ArgumentError("hull: index out of range");
        in[i] = 1;
    }
    if (a.size() > 2) {
        for (bool changed = true; changed;) {
            changed = false;
            int s = start_vertex(in);
            for (int v : order_) {
                if (!below_or_equal(*t_, s, v)) continue;
                const DSetGraph& d = t_->label[v];
                for (int r : span(v, in).rams) {
                    int sp = d.special(r);
                    bool covered = false;
                    int pick = -1;
                    for (int i = 0; i < n_ && !covered; ++i) {
                        if (proj_[v][i] < 0 || dist_[v].toward(d, r, proj_[v][i]) != sp) continue;
                        if (in[i]) covered = true;
                        else if (pick < 0) pick = i;
                    }
                    if (covered) continue;
                    if (pick < 0) throw InconsistencyError("empty special branch");
                    in[pick] = 1;
                    changed = true;
                }
            }
        }
    }
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
        if (in[i]) out.push_back(i);
    return out;
}

std::vector<int> hull(const TreeOfDSets& e, const std::vector<int>& a) { return HullContext(e).hull(a); }

long long hull_bound_f(int n) {
    if (n <= 3) return 0;
    long long total = 0;
    for (int i = 1; i <= n - 3; ++i) {
        long long term = 1;
        for (int k = i + 1; k <= n - 2; ++k) term *= k;
        total += term;
    }
    return total;
}

std::vector<int> minimal_hull(const TreeOfDSets& e, const std::vector<int>& a) {
    if (a.empty()) throw ArgumentError("hull of the empty set");
    int n = e.domain_size();
    std::vector<char> in(n, 0);
    for (int i : a) in.at(i) = 1;
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (!in[i]) rest.push_back(i);
    std::vector<int> base(a.begin(), a.end());
    std::sort(base.begin(), base.end());
    for (size_t k = 0; k <= rest.size(); ++k) {
        std::vector<char> mask(rest.size(), 0);
        std::fill(mask.begin(), mask.begin() + k, 1);
        do {
            std::vector<int> s = base;
            for (size_t j = 0; j < rest.size(); ++j)
                if (mask[j]) s.push_back(rest[j]);
            std::sort(s.begin(), s.end());
            if (induces_member(e, s)) return s;
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    throw InconsistencyError("no superset induces a member");
}

}  // namespace treeds
