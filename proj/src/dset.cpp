#include "treeds/dset.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "treeds/errors.hpp"

namespace treeds {

// ===========================================================================
// DSetGraph
// ===========================================================================

int DSetGraph::add_node(const std::string& name) {
    if (index_.count(name)) throw ArgumentError("duplicate node name '" + name + "'");
    int v = size();
    names_.push_back(name);
    adj_.emplace_back();
    special_.push_back(-1);
    index_[name] = v;
    return v;
}

void DSetGraph::add_edge(int a, int b) {
    if (a == b) throw ArgumentError("self loop at " + name(a));
    if (adjacent(a, b)) throw ArgumentError("duplicate edge " + name(a) + "-" + name(b));
    adj_.at(a).push_back(b);
    adj_.at(b).push_back(a);
    std::sort(adj_[a].begin(), adj_[a].end());
    std::sort(adj_[b].begin(), adj_[b].end());
}

void DSetGraph::remove_edge(int a, int b) {
    auto drop = [](std::vector<int>& v, int x) { v.erase(std::remove(v.begin(), v.end(), x), v.end()); };
    drop(adj_.at(a), b);
    drop(adj_.at(b), a);
}

void DSetGraph::set_special(int r, int nb) { special_.at(r) = nb; }

void DSetGraph::rename_node(int v, const std::string& n) {
    if (names_.at(v) == n) return;
    if (index_.count(n)) throw ArgumentError("duplicate node name '" + n + "'");
    index_.erase(names_[v]);
    names_[v] = n;
    index_[n] = v;
}
void DSetGraph::clear_special(int r) { special_.at(r) = -1; }

int DSetGraph::find(const std::string& n) const {
    auto it = index_.find(n);
    return it == index_.end() ? -1 : it->second;
}

int DSetGraph::at(const std::string& n) const {
    int v = find(n);
    if (v < 0) throw ArgumentError("unknown node '" + n + "'");
    return v;
}

std::string DSetGraph::fresh_name(const std::string& prefix) const {
    if (find(prefix) < 0) return prefix;
    for (int k = size();; ++k) {
        std::string c = prefix + std::to_string(k);
        if (find(c) < 0) return c;
    }
}

bool DSetGraph::adjacent(int a, int b) const {
    const auto& n = adj_.at(a);
    return std::binary_search(n.begin(), n.end(), b);
}

std::vector<int> DSetGraph::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (is_leaf(v)) out.push_back(v);
    return out;
}

std::vector<int> DSetGraph::ram_points() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (is_ram(v)) out.push_back(v);
    return out;
}

std::vector<std::pair<int, int>> DSetGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < size(); ++v)
        for (int u : adj_[v])
            if (v < u) out.emplace_back(v, u);
    return out;
}

std::vector<int> DSetGraph::distances_from(int s) const {
    std::vector<int> d(size(), -1);
    std::deque<int> q{s};
    d.at(s) = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : adj_[v])
            if (d[u] < 0) {
                d[u] = d[v] + 1;
                q.push_back(u);
            }
    }
    return d;
}

std::vector<int> DSetGraph::path(int a, int b) const {
    std::vector<int> prev(size(), -2);
    std::deque<int> q{a};
    prev.at(a) = -1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (v == b) break;
        for (int u : adj_[v])
            if (prev[u] == -2) {
                prev[u] = v;
                q.push_back(u);
            }
    }
    if (prev.at(b) == -2) throw DataError("nodes not connected");
    std::vector<int> p;
    for (int v = b; v != -1; v = prev[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
}

std::vector<int> DSetGraph::component(int r, int nb) const {
    std::vector<char> seen(size(), 0);
    seen.at(r) = 1;
    std::vector<int> out, stack{nb};
    seen.at(nb) = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (int u : adj_[v])
            if (!seen[u]) {
                seen[u] = 1;
                stack.push_back(u);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ===========================================================================
// geometry
// ===========================================================================

namespace {

void need_leaf(const DSetGraph& d, int v) {
    if (v < 0 || v >= d.size()) throw ArgumentError("node index out of range");
    if (!d.is_leaf(v)) throw ArgumentError("'" + d.name(v) + "' is not a leaf");
}

}  // namespace

int ram(const DSetGraph& d, int x, int y, int z) {
    need_leaf(d, x);
    need_leaf(d, y);
    need_leaf(d, z);
    if (x == y || y == z || x == z) throw ArgumentError("ram needs three distinct leaves");
    auto dx = d.distances_from(x), dy = d.distances_from(y), dz = d.distances_from(z);
    for (int v = 0; v < d.size(); ++v)
        if (dx[v] + dy[v] == dx[y] && dy[v] + dz[v] == dy[z] && dx[v] + dz[v] == dx[z]) return v;
    throw DataError("no median found");
}

int branch_of(const DSetGraph& d, int r, int x) {
    if (r == x) throw ArgumentError("branch_of: node coincides with the ramification point");
    auto p = d.path(r, x);
    return p.at(1);
}

std::vector<int> branches_at(const DSetGraph& d, int r) { return d.neighbors(r); }

bool leaf_d(const DSetGraph& d, int x, int y, int z, int w) {
    for (int v : {x, y, z, w}) need_leaf(d, v);
    if (x == y && x != z && x != w) return true;
    if (z == w && z != x && z != y) return true;
    if (x == y || x == z || x == w || y == z || y == w || z == w) return false;
    auto pxy = d.path(x, y), pzw = d.path(z, w);
    std::set<int> a(pxy.begin(), pxy.end());
    for (int v : pzw)
        if (a.count(v)) return false;
    return true;
}

std::vector<int> leaves_in_branch(const DSetGraph& d, int r, int nb) {
    std::vector<int> out;
    for (int v : d.component(r, nb))
        if (d.is_leaf(v)) out.push_back(v);
    return out;
}

DistanceTable::DistanceTable(const DSetGraph& d) : n_(d.size()), dist_(static_cast<size_t>(n_) * n_) {
    for (int v = 0; v < n_; ++v) {
        auto row = d.distances_from(v);
        std::copy(row.begin(), row.end(), dist_.begin() + static_cast<long>(v) * n_);
    }
}

int DistanceTable::median(int x, int y, int z) const {
    const DistanceTable& D = *this;
    for (int v = 0; v < n_; ++v)
        if (D(x, v) + D(v, y) == D(x, y) && D(y, v) + D(v, z) == D(y, z) && D(x, v) + D(v, z) == D(x, z))
            return v;
    return -1;
}

int DistanceTable::toward(const DSetGraph& d, int r, int x) const {
    for (int u : d.neighbors(r))
        if ((*this)(u, x) + 1 == (*this)(r, x)) return u;
    return -1;
}

// ===========================================================================
// TreeOfDSets
// ===========================================================================

int TreeOfDSets::add_vertex(const std::string& id, DSetGraph lab, int par, int fr) {
    int v = vertex_count();
    vid.push_back(id);
    parent.push_back(par);
    label.push_back(std::move(lab));
    fram.push_back(fr);
    g.emplace_back();
    return v;
}

int TreeOfDSets::find_vertex(const std::string& id) const {
    for (int v = 0; v < vertex_count(); ++v)
        if (vid[v] == id) return v;
    return -1;
}

std::string TreeOfDSets::fresh_vertex_id() const {
    for (int k = vertex_count();; ++k) {
        std::string c = "v" + std::to_string(k);
        if (find_vertex(c) < 0) return c;
    }
}

std::vector<int> TreeOfDSets::children(int v) const {
    std::vector<int> out;
    for (int w = 0; w < vertex_count(); ++w)
        if (parent[w] == v) out.push_back(w);
    return out;
}

int TreeOfDSets::successor_at(int v, int r) const {
    for (int w = 0; w < vertex_count(); ++w)
        if (parent[w] == v && fram[w] == r) return w;
    return -1;
}

std::vector<std::string> TreeOfDSets::domain() const {
    std::vector<std::string> out;
    for (auto& [leaf, name] : element) out.push_back(name);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> TreeOfDSets::domain_leaves() const {
    std::vector<std::pair<std::string, int>> tmp;
    for (auto& [leaf, name] : element) tmp.emplace_back(name, leaf);
    std::sort(tmp.begin(), tmp.end());
    std::vector<int> out;
    for (auto& p : tmp) out.push_back(p.second);
    return out;
}

int TreeOfDSets::leaf_of(const std::string& elem) const {
    for (auto& [leaf, name] : element)
        if (name == elem) return leaf;
    throw ArgumentError("unknown element '" + elem + "'");
}

std::vector<int> TreeOfDSets::topological() const {
    std::vector<int> order{root};
    for (size_t i = 0; i < order.size(); ++i)
        for (int c : children(order[i])) order.push_back(c);
    return order;
}

// ===========================================================================
// validation
// ===========================================================================

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (auto& v : violations) os << v.where << ": " << v.rule << "\n";
    return os.str();
}

ValidationReport validate(const DSetGraph& d, const std::string& where) {
    ValidationReport rep;
    auto add = [&](const std::string& at, const std::string& rule) { rep.violations.push_back({at, rule}); };
    if (d.size() == 0) {
        add(where, "empty D-set");
        return rep;
    }
    int edgeCount = 0;
    for (int v = 0; v < d.size(); ++v) edgeCount += d.degree(v);
    edgeCount /= 2;
    auto dist = d.distances_from(0);
    bool connected = std::all_of(dist.begin(), dist.end(), [](int x) { return x >= 0; });
    if (!connected) add(where, "graph is not connected");
    if (edgeCount != d.size() - 1) add(where, "graph is not a tree (edge count)");
    for (int v = 0; v < d.size(); ++v) {
        std::string at = where + "/" + d.name(v);
        if (d.degree(v) == 2) add(at, "node of degree 2 (no dyadic vertices allowed)");
        if (d.is_ram(v)) {
            if (d.special(v) < 0)
                add(at, "ramification point lacks special branch");
            else if (!d.adjacent(v, d.special(v)))
                add(at, "special neighbour is not adjacent to the ramification point");
        } else if (d.special(v) >= 0) {
            add(at, "special branch designated at a non-ramification node");
        }
    }
    return rep;
}

ValidationReport validate(const TreeOfDSets& t) {
    ValidationReport rep;
    auto add = [&](const std::string& at, const std::string& rule) { rep.violations.push_back({at, rule}); };
    int nv = t.vertex_count();
    if (nv == 0) {
        add("tree", "no vertices");
        return rep;
    }
    if (t.root < 0 || t.root >= nv || t.parent[t.root] != -1) {
        add("tree", "root is missing or has a parent");
        return rep;
    }
    std::set<std::string> ids;
    for (int v = 0; v < nv; ++v) {
        if (!ids.insert(t.vid[v]).second) add(t.vid[v], "duplicate vertex id");
        if (v != t.root && t.parent[v] == -1) add(t.vid[v], "second root");
    }
    // reachability / acyclicity of the parent links
    std::vector<int> order = t.topological();
    if (static_cast<int>(order.size()) != nv) {
        add("tree", "vertex not reachable from the root (orphan label)");
        return rep;
    }
    for (int v = 0; v < nv; ++v) {
        auto sub = validate(t.label[v], t.vid[v]);
        for (auto& x : sub.violations) rep.violations.push_back(x);
    }
    if (!rep.ok()) return rep;

    // root elements
    const DSetGraph& R = t.label[t.root];
    std::set<int> rootLeaves;
    for (int l : R.leaves()) rootLeaves.insert(l);
    std::set<std::string> names;
    for (auto& [leaf, name] : t.element) {
        if (!rootLeaves.count(leaf)) add(t.vid[t.root], "element '" + name + "' is not on a root leaf");
        if (!names.insert(name).second) add(t.vid[t.root], "duplicate element name '" + name + "'");
        if (name.empty()) add(t.vid[t.root], "empty element name");
    }
    for (int l : rootLeaves)
        if (!t.element.count(l)) add(t.vid[t.root] + "/" + R.name(l), "root leaf carries no element name");

    for (int v = 0; v < nv; ++v) {
        const DSetGraph& d = t.label[v];
        auto kids = t.children(v);
        auto rams = d.ram_points();
        std::set<int> used;
        for (int w : kids) {
            int r = t.fram[w];
            if (r < 0 || r >= d.size() || !d.is_ram(r)) {
                add(t.vid[w], "f maps the successor to a non-ramification node");
                continue;
            }
            if (!used.insert(r).second) add(t.vid[w], "two successors share a ramification point (f not injective)");
        }
        for (int r : rams)
            if (!used.count(r)) add(t.vid[v] + "/" + d.name(r), "ramification point has no successor (f not surjective)");
        if (kids.empty() && !rams.empty()) add(t.vid[v], "vertex without successors has ramification points");
        if (v != t.root && d.leaves().size() < 2) add(t.vid[v], "non-root label with fewer than two leaves");
    }
    if (!rep.ok()) return rep;

    for (int w = 0; w < nv; ++w) {
        if (w == t.root) continue;
        int v = t.parent[w];
        const DSetGraph& pd = t.label[v];
        const DSetGraph& cd = t.label[w];
        int r = t.fram[w];
        std::set<int> nonSpecial;
        for (int u : pd.neighbors(r))
            if (u != pd.special(r)) nonSpecial.insert(u);
        auto lv = cd.leaves();
        if (static_cast<int>(lv.size()) != pd.degree(r) - 1)
            add(t.vid[w], "leaf count differs from degree(f(w)) - 1");
        std::set<int> hit;
        for (int l : lv) {
            auto it = t.g[w].find(l);
            if (it == t.g[w].end()) {
                add(t.vid[w] + "/" + cd.name(l), "leaf has no g image");
                continue;
            }
            if (!nonSpecial.count(it->second))
                add(t.vid[w] + "/" + cd.name(l), "g maps the leaf to a special or non-adjacent branch");
            else if (!hit.insert(it->second).second)
                add(t.vid[w] + "/" + cd.name(l), "g is not injective");
        }
        for (auto& [l, nb] : t.g[w])
            if (l < 0 || l >= cd.size() || !cd.is_leaf(l)) add(t.vid[w], "g defined on a non-leaf");
        if (hit.size() != nonSpecial.size() && rep.ok()) add(t.vid[w], "g is not surjective onto non-special branches");
    }
    return rep;
}

void require_valid(const TreeOfDSets& t) {
    auto rep = validate(t);
    if (!rep.ok()) throw ArgumentError("invalid tree of D-sets: " + rep.summary());
}

// ===========================================================================
// projections and g-chains
// ===========================================================================

std::vector<std::vector<int>> projections(const TreeOfDSets& t) {
    auto leaves = t.domain_leaves();
    int n = static_cast<int>(leaves.size());
    std::vector<std::vector<int>> proj(t.vertex_count(), std::vector<int>(n, -1));
    proj[t.root] = leaves;
    for (int v : t.topological()) {
        const DSetGraph& d = t.label[v];
        auto kids = t.children(v);
        if (kids.empty()) continue;
        DistanceTable D(d);
        for (int w : kids) {
            int r = t.fram[w];
            std::map<int, int> inv;
            for (auto& [l, nb] : t.g[w]) inv[nb] = l;
            for (int i = 0; i < n; ++i) {
                int l = proj[v][i];
                if (l < 0) continue;
                int nb = D.toward(d, r, l);
                auto it = inv.find(nb);
                proj[w][i] = it == inv.end() ? -1 : it->second;
            }
        }
    }
    return proj;
}

bool below_or_equal(const TreeOfDSets& t, int nu, int mu) {
    for (int v = mu; v != -1; v = t.parent[v])
        if (v == nu) return true;
    return false;
}

std::set<int> g_chain(const TreeOfDSets& t, int mu, int nu, int leaf) {
    if (mu < 0 || mu >= t.vertex_count() || nu < 0 || nu >= t.vertex_count())
        throw ArgumentError("g_chain: unknown vertex");
    if (!below_or_equal(t, nu, mu)) throw ArgumentError("g_chain: target vertex is not below the source");
    if (!t.label[mu].is_leaf(leaf)) throw ArgumentError("g_chain: not a leaf of the source label");
    std::set<int> cur{leaf};
    for (int w = mu; w != nu; w = t.parent[w]) {
        const DSetGraph& pd = t.label[t.parent[w]];
        std::set<int> next;
        for (int l : cur) {
            int nb = t.g[w].at(l);
            for (int x : leaves_in_branch(pd, t.fram[w], nb)) next.insert(x);
        }
        cur = std::move(next);
    }
    return cur;
}

int height(const TreeOfDSets& t) {
    int best = 0;
    for (int v = 0; v < t.vertex_count(); ++v) {
        int h = 0;
        for (int u = v; u != -1; u = t.parent[u]) ++h;
        best = std::max(best, h);
    }
    return best;
}

namespace {

TreeOfDSets copy_subtree(const TreeOfDSets& t, int nu, const std::function<std::string(int)>& leafName) {
    if (nu < 0 || nu >= t.vertex_count()) throw ArgumentError("unknown vertex");
    TreeOfDSets out;
    std::map<int, int> remap;
    std::vector<int> order{nu};
    for (size_t i = 0; i < order.size(); ++i)
        for (int c : t.children(order[i])) order.push_back(c);
    for (int v : order) {
        int par = v == nu ? -1 : remap.at(t.parent[v]);
        int nv = out.add_vertex(t.vid[v], t.label[v], par, v == nu ? -1 : t.fram[v]);
        if (v != nu) out.g[nv] = t.g[v];
        remap[v] = nv;
    }
    out.root = 0;
    for (int l : out.label[0].leaves()) out.element[l] = leafName(l);
    return out;
}

}  // namespace

TreeOfDSets induced_at(const TreeOfDSets& t, int nu) {
    if (nu == t.root) return t;
    const DSetGraph& d = t.label.at(nu);
    return copy_subtree(t, nu, [&](int l) { return d.name(l); });
}

TreeOfDSets branch_named_subtree(const TreeOfDSets& t, int nu) {
    if (nu == t.root) throw ArgumentError("branch_named_subtree: root has no parent branches");
    const DSetGraph& pd = t.label.at(t.parent.at(nu));
    const auto& gm = t.g.at(nu);
    return copy_subtree(t, nu, [&](int l) { return pd.name(gm.at(l)); });
}

TreeOfDSets rename_elements(const TreeOfDSets& t, const std::map<std::string, std::string>& m) {
    TreeOfDSets out = t;
    for (auto& [leaf, name] : out.element) {
        auto it = m.find(name);
        if (it != m.end()) name = it->second;
    }
    return out;
}

// ===========================================================================
// fixtures
// ===========================================================================

namespace fixtures {

namespace {

DSetGraph edge(const std::string& a, const std::string& b) {
    DSetGraph d;
    int x = d.add_node(a);
    int y = d.add_node(b);
    d.add_edge(x, y);
    return d;
}

DSetGraph star(const std::string& c, const std::vector<std::string>& leaves, const std::string& special) {
    DSetGraph d;
    int r = d.add_node(c);
    for (auto& l : leaves) d.add_edge(r, d.add_node(l));
    d.set_special(r, d.at(special));
    return d;
}

}  // namespace

TreeOfDSets singleton(const std::string& a) {
    TreeOfDSets t;
    DSetGraph d;
    int v = d.add_node(a);
    t.add_vertex("rho", d, -1, -1);
    t.element[v] = a;
    return t;
}

TreeOfDSets fix2() {
    TreeOfDSets t;
    t.add_vertex("rho", edge("a", "b"), -1, -1);
    t.element[0] = "a";
    t.element[1] = "b";
    return t;
}

TreeOfDSets fix1() {
    TreeOfDSets t;
    DSetGraph root = star("r", {"x", "y", "z"}, "x");
    t.add_vertex("rho", root, -1, -1);
    for (auto e : {"x", "y", "z"}) t.element[root.at(e)] = e;
    DSetGraph up = edge("ybar", "zbar");
    int nu = t.add_vertex("nu", up, 0, root.at("r"));
    t.g[nu][up.at("ybar")] = root.at("y");
    t.g[nu][up.at("zbar")] = root.at("z");
    return t;
}

TreeOfDSets fix5() {
    TreeOfDSets t;
    DSetGraph root;
    int r = root.add_node("r"), r2 = root.add_node("r'");
    for (auto e : {"x", "y", "p"}) root.add_edge(r, root.add_node(e));
    for (auto e : {"z", "w"}) root.add_edge(r2, root.add_node(e));
    root.add_edge(r, r2);
    root.set_special(r, root.at("x"));
    root.set_special(r2, root.at("z"));
    t.add_vertex("rho", root, -1, -1);
    for (auto e : {"x", "y", "z", "w", "p"}) t.element[root.at(e)] = e;

    DSetGraph nuLab = star("r''", {"ybar", "pbar", "cbar"}, "pbar");
    int nu = t.add_vertex("nu", nuLab, 0, r);
    t.g[nu][nuLab.at("ybar")] = root.at("y");
    t.g[nu][nuLab.at("pbar")] = root.at("p");
    t.g[nu][nuLab.at("cbar")] = r2;

    DSetGraph nu1Lab = edge("ybar", "cbar");
    int nu1 = t.add_vertex("nu1", nu1Lab, nu, nuLab.at("r''"));
    t.g[nu1][nu1Lab.at("ybar")] = nuLab.at("ybar");
    t.g[nu1][nu1Lab.at("cbar")] = nuLab.at("cbar");

    DSetGraph nupLab = edge("rside", "w");
    int nup = t.add_vertex("nu'", nupLab, 0, r2);
    t.g[nup][nupLab.at("rside")] = r;
    t.g[nup][nupLab.at("w")] = root.at("w");
    return t;
}

}  // namespace fixtures

}  // namespace treeds
