#include <algorithm>
#include <functional>

#include "treeds/reconstruct.hpp"

namespace treeds {

namespace {

// ===========================================================================
// colour refinement
// ===========================================================================

std::vector<int> refine(const LStructure& ls, std::vector<int> color) {
    int n = ls.size();
    std::vector<Triple> Ls = kstar(ls);
    std::vector<std::array<int, 4>> Ss;  // (a,b | c,d) once per quadruple split
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = a + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d)
                    if (b != c && b != d && ls.S(a, b, c, d)) Ss.push_back({a, b, c, d});
    int classes = static_cast<int>(std::set<int>(color.begin(), color.end()).size());
    for (int round = 0; round < n; ++round) {
        std::vector<std::vector<std::vector<int>>> tok(n);
        for (auto& t : Ls) {
            int a = t[0], b = t[1], c = t[2];
            auto pair = [&](int u, int v) { return std::minmax(color[u], color[v]); };
            auto [b1, b2] = pair(b, c);
            tok[a].push_back({0, b1, b2});
            tok[b].push_back({1, color[a], color[c]});
            tok[c].push_back({1, color[a], color[b]});
            for (int u = 0; u < n; ++u)
                if (ls.Lp(a, b, c, u)) tok[u].push_back({2, color[a], b1, b2});
        }
        for (auto& q : Ss) {
            int m[4] = {q[0], q[1], q[2], q[3]};
            for (int i = 0; i < 4; ++i) {
                int partner = m[i ^ 1], o1 = m[(i ^ 2) & 2], o2 = m[((i ^ 2) & 2) + 1];
                auto [x1, x2] = std::minmax(color[o1], color[o2]);
                tok[m[i]].push_back({3, color[partner], x1, x2});
            }
            for (int u = 0; u < n; ++u)
                if (ls.Sp(q[0], q[1], q[2], q[3], u)) {
                    std::array<int, 2> p1{std::min(color[q[0]], color[q[1]]), std::max(color[q[0]], color[q[1]])};
                    std::array<int, 2> p2{std::min(color[q[2]], color[q[3]]), std::max(color[q[2]], color[q[3]])};
                    if (p2 < p1) std::swap(p1, p2);
                    tok[u].push_back({4, p1[0], p1[1], p2[0], p2[1]});
                }
        }
        std::vector<std::vector<int>> sig(n);
        for (int i = 0; i < n; ++i) {
            std::sort(tok[i].begin(), tok[i].end());
            sig[i].push_back(color[i]);
            for (auto& t : tok[i]) {
                sig[i].push_back(-1);
                sig[i].insert(sig[i].end(), t.begin(), t.end());
            }
        }
        auto uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int i = 0; i < n; ++i)
            color[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[i]) - uniq.begin());
        int now = static_cast<int>(uniq.size());
        if (now == classes) break;
        classes = now;
    }
    return color;
}

// ===========================================================================
// incremental code
// ===========================================================================
//
// Positions are filled left to right; when position k is filled we emit every
// piece of information about tuples whose largest position is k:
//   triples   apex mask, then for each apex its R-ordinal (a new ordinal is
//             followed by the earlier S-items Q-related to it)
//   4-sets    split mask, the Q-ordinal of each split, then L' bits
//   5-sets    S' bits
// The result is self-delimiting, so equal codes mean equal relations.

class Encoder {
public:
    explicit Encoder(const LStructure& ls) : ls_(ls) {}

    void push(int e, std::vector<int>& code) {
        pos_.push_back(e);
        frames_.push_back({code.size(), lreps_.size(), sitems_.size()});
        int k = static_cast<int>(pos_.size()) - 1;
        const auto& P = pos_;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                int a = P[i], b = P[j], c = P[k];
                Triple forms[3] = {{a, b, c}, {b, a, c}, {c, a, b}};
                int mask = 0;
                for (int f = 0; f < 3; ++f)
                    if (ls_.L(forms[f][0], forms[f][1], forms[f][2])) mask |= 1 << f;
                code.push_back(mask);
                for (int f = 0; f < 3; ++f)
                    if (mask >> f & 1) code.push_back(l_ordinal(forms[f], code));
            }
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                for (int l = j + 1; l < k; ++l) {
                    int a = P[i], b = P[j], c = P[l], d = P[k];
                    std::array<int, 4> splits[3] = {{a, b, c, d}, {a, c, b, d}, {a, d, b, c}};
                    int mask = 0;
                    for (int f = 0; f < 3; ++f)
                        if (ls_.S(splits[f][0], splits[f][1], splits[f][2], splits[f][3])) mask |= 1 << f;
                    code.push_back(mask);
                    for (int f = 0; f < 3; ++f)
                        if (mask >> f & 1) {
                            auto& s = splits[f];
                            int ord = 0;
                            for (size_t g = 0; g < lreps_.size(); ++g)
                                if (ls_.Q(s[0], s[1], s[2], s[3], lreps_[g][0], lreps_[g][1], lreps_[g][2])) {
                                    ord = static_cast<int>(g) + 1;
                                    break;
                                }
                            code.push_back(ord);
                            sitems_.push_back(s);
                        }
                    int four[4] = {a, b, c, d};
                    for (int u = 0; u < 4; ++u) {
                        int o[3], m = 0;
                        for (int v = 0; v < 4; ++v)
                            if (v != u) o[m++] = four[v];
                        Triple forms[3] = {{o[0], o[1], o[2]}, {o[1], o[0], o[2]}, {o[2], o[0], o[1]}};
                        for (auto& f : forms)
                            if (ls_.L(f[0], f[1], f[2])) code.push_back(ls_.Lp(f[0], f[1], f[2], four[u]));
                    }
                }
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                for (int l = j + 1; l < k; ++l)
                    for (int m = l + 1; m < k; ++m) {
                        int five[5] = {P[i], P[j], P[l], P[m], P[k]};
                        for (int u = 0; u < 5; ++u) {
                            int o[4], c = 0;
                            for (int v = 0; v < 5; ++v)
                                if (v != u) o[c++] = five[v];
                            std::array<int, 4> splits[3] = {{o[0], o[1], o[2], o[3]}, {o[0], o[2], o[1], o[3]}, {o[0], o[3], o[1], o[2]}};
                            for (auto& s : splits)
                                if (ls_.S(s[0], s[1], s[2], s[3])) code.push_back(ls_.Sp(s[0], s[1], s[2], s[3], five[u]));
                        }
                    }
    }

    void pop(std::vector<int>& code) {
        auto f = frames_.back();
        frames_.pop_back();
        pos_.pop_back();
        code.resize(f.code);
        lreps_.resize(f.lreps);
        sitems_.resize(f.sitems);
    }

private:
    int l_ordinal(const Triple& t, std::vector<int>& code) {
        for (size_t g = 0; g < lreps_.size(); ++g)
            if (ls_.R(t[0], t[1], t[2], lreps_[g][0], lreps_[g][1], lreps_[g][2])) return static_cast<int>(g) + 1;
        lreps_.push_back(t);
        int ord = static_cast<int>(lreps_.size());
        // Earlier S-items of this group were coded with ordinal 0.
        std::vector<int> linked;
        for (size_t s = 0; s < sitems_.size(); ++s)
            if (ls_.Q(sitems_[s][0], sitems_[s][1], sitems_[s][2], sitems_[s][3], t[0], t[1], t[2]))
                linked.push_back(static_cast<int>(s));
        code.push_back(ord);
        code.push_back(static_cast<int>(linked.size()));
        code.insert(code.end(), linked.begin(), linked.end());
        return ord;
    }

    struct Frame {
        size_t code, lreps, sitems;
    };
    const LStructure& ls_;
    std::vector<int> pos_;
    std::vector<Triple> lreps_;
    std::vector<std::array<int, 4>> sitems_;
    std::vector<Frame> frames_;
};

std::string pack(const std::vector<int>& marks, const std::vector<int>& code) {
    std::string out;
    auto put = [&](int v) {
        unsigned u = static_cast<unsigned>(v);
        out.push_back(static_cast<char>(u & 0xff));
        out.push_back(static_cast<char>((u >> 8) & 0xff));
    };
    put(static_cast<int>(marks.size()));
    for (int m : marks) put(m);
    for (int c : code) put(c);
    return out;
}

}  // namespace

std::string labelled_key(const LStructure& ls, const std::vector<int>& colors) {
    int n = ls.size();
    std::vector<int> marks = colors.empty() ? std::vector<int>(n, 0) : colors;
    Encoder enc(ls);
    std::vector<int> code;
    for (int i = 0; i < n; ++i) enc.push(i, code);
    return pack(marks, code);
}

CanonicalForm canonical_form(const LStructure& ls, const std::vector<int>& colors) {
    int n = ls.size();
    std::vector<int> marks = colors.empty() ? std::vector<int>(n, 0) : colors;
    if (static_cast<int>(marks.size()) != n) throw ArgumentError("canonical_form: colour vector has wrong size");
    // Marks are compared first, so they lead the refinement.
    std::vector<int> base = marks;
    {
        auto u = base;
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        for (int& c : base) c = static_cast<int>(std::lower_bound(u.begin(), u.end(), c) - u.begin());
    }
    std::vector<int> color = refine(ls, base);
    // Cell order: by refined colour; refinement keeps the mark order.
    std::vector<int> slotColor(n);
    {
        auto sorted = color;
        std::sort(sorted.begin(), sorted.end());
        slotColor = sorted;
    }
    Encoder enc(ls);
    std::vector<int> code, best;
    std::vector<int> order, bestOrder;
    std::vector<char> used(n, 0);
    bool have = false;
    // cmp: 0 while the current prefix equals best, -1 once it is smaller.
    std::function<void(int, int)> dfs = [&](int k, int cmp) {
        if (k == n) {
            if (!have || cmp < 0 || code.size() < best.size()) {
                best = code;
                bestOrder = order;
                have = true;
            }
            return;
        }
        for (int e = 0; e < n; ++e) {
            if (used[e] || color[e] != slotColor[k]) continue;
            size_t start = code.size();
            enc.push(e, code);
            int c = cmp;
            bool prune = false;
            if (have && c == 0) {
                for (size_t i = start; i < code.size(); ++i) {
                    if (i >= best.size() || code[i] > best[i]) {
                        prune = true;
                        break;
                    }
                    if (code[i] < best[i]) {
                        c = -1;
                        break;
                    }
                }
            }
            if (!prune) {
                used[e] = 1;
                order.push_back(e);
                dfs(k + 1, c);
                order.pop_back();
                used[e] = 0;
            }
            enc.pop(code);
        }
    };
    dfs(0, 0);
    std::vector<int> posMarks;
    for (int e : bestOrder) posMarks.push_back(marks[e]);
    return {pack(posMarks, best), bestOrder};
}

std::optional<std::vector<int>> ls_iso(const LStructure& a, const LStructure& b) {
    if (a.size() != b.size()) return std::nullopt;
    auto ca = canonical_form(a), cb = canonical_form(b);
    if (ca.key != cb.key) return std::nullopt;
    std::vector<int> map(a.size());
    for (int p = 0; p < a.size(); ++p) map[ca.order[p]] = cb.order[p];
    if (!is_embedding(a, b, map)) return std::nullopt;
    return map;
}

// ===========================================================================
// trees of D-sets
// ===========================================================================

namespace {

// Leaf partition of each vertex in terms of domain indices.
std::vector<std::vector<std::vector<int>>> leaf_partitions(const TreeOfDSets& t,
                                                            const std::vector<std::vector<int>>& proj,
                                                            std::vector<std::map<int, std::vector<int>>>& byLeaf) {
    int n = t.domain_size();
    std::vector<std::vector<std::vector<int>>> out(t.vertex_count());
    byLeaf.assign(t.vertex_count(), {});
    for (int v = 0; v < t.vertex_count(); ++v) {
        for (int e = 0; e < n; ++e)
            if (proj[v][e] >= 0) byLeaf[v][proj[v][e]].push_back(e);
        for (auto& [l, es] : byLeaf[v]) out[v].push_back(es);
        std::sort(out[v].begin(), out[v].end());
    }
    return out;
}

}  // namespace

std::optional<TreeIso> tree_iso(const TreeOfDSets& a, const TreeOfDSets& b) {
    if (a.domain_size() != b.domain_size() || a.vertex_count() != b.vertex_count()) return std::nullopt;
    auto pi = ls_iso(realize(a).ls, realize(b).ls);
    if (!pi) return std::nullopt;
    auto pa = projections(a), pb = projections(b);
    std::vector<std::map<int, std::vector<int>>> la, lb;
    auto parta = leaf_partitions(a, pa, la), partb = leaf_partitions(b, pb, lb);
    std::map<std::vector<std::vector<int>>, int> keyB;
    for (int v = 0; v < b.vertex_count(); ++v)
        if (!keyB.emplace(partb[v], v).second) return std::nullopt;
    TreeIso m;
    m.elementMap = *pi;
    m.vertexMap.assign(a.vertex_count(), -1);
    m.nodeMap.assign(a.vertex_count(), {});
    for (int v = 0; v < a.vertex_count(); ++v) {
        std::vector<std::vector<int>> img;
        for (auto& cls : parta[v]) {
            std::vector<int> c;
            for (int e : cls) c.push_back((*pi)[e]);
            std::sort(c.begin(), c.end());
            img.push_back(c);
        }
        std::sort(img.begin(), img.end());
        auto it = keyB.find(img);
        if (it == keyB.end()) return std::nullopt;
        int w = it->second;
        m.vertexMap[v] = w;
        const DSetGraph& da = a.label[v];
        const DSetGraph& db = b.label[w];
        if (da.size() != db.size()) return std::nullopt;
        std::vector<int>& nm = m.nodeMap[v];
        nm.assign(da.size(), -1);
        std::map<int, int> leafB;  // first element -> leaf of b
        for (auto& [l, es] : lb[w]) leafB[es[0]] = l;
        for (auto& [l, es] : la[v]) {
            int first = (*pi)[es[0]];
            for (int e : es) first = std::min(first, (*pi)[e]);
            auto f = leafB.find(first);
            if (f == leafB.end()) return std::nullopt;
            nm[l] = f->second;
        }
        for (int r : da.ram_points()) {
            auto nbs = da.neighbors(r);
            int rep[3];
            for (int i = 0; i < 3; ++i) rep[i] = nm[leaves_in_branch(da, r, nbs[i])[0]];
            if (rep[0] < 0 || rep[1] < 0 || rep[2] < 0) return std::nullopt;
            nm[r] = ram(db, rep[0], rep[1], rep[2]);
        }
    }
    if (!check_tree_iso(a, b, m).empty()) return std::nullopt;
    return m;
}

std::vector<std::string> check_tree_iso(const TreeOfDSets& a, const TreeOfDSets& b, const TreeIso& m) {
    std::vector<std::string> bad;
    int V = a.vertex_count();
    if (b.vertex_count() != V || static_cast<int>(m.vertexMap.size()) != V) return {"vertex counts differ"};
    std::set<int> img(m.vertexMap.begin(), m.vertexMap.end());
    if (static_cast<int>(img.size()) != V || img.count(-1)) bad.push_back("vertex map is not a bijection");
    if (m.vertexMap[a.root] != b.root) bad.push_back("root is not preserved");
    for (int v = 0; v < V && bad.empty(); ++v) {
        int w = m.vertexMap[v];
        const auto& nm = m.nodeMap[v];
        const DSetGraph& da = a.label[v];
        const DSetGraph& db = b.label[w];
        std::string at = a.vid[v] + "->" + b.vid[w];
        int pv = a.parent[v];
        if ((pv < 0 ? -1 : m.vertexMap[pv]) != b.parent[w]) bad.push_back(at + ": parent not preserved");
        std::set<int> nimg(nm.begin(), nm.end());
        if (static_cast<int>(nm.size()) != da.size() || da.size() != db.size() ||
            static_cast<int>(nimg.size()) != da.size() || nimg.count(-1)) {
            bad.push_back(at + ": node map is not a bijection");
            continue;
        }
        for (auto [x, y] : da.edges())
            if (!db.adjacent(nm[x], nm[y])) bad.push_back(at + ": edge " + da.name(x) + "-" + da.name(y) + " not preserved");
        if (da.edges().size() != db.edges().size()) bad.push_back(at + ": edge counts differ");
        for (int r : da.ram_points())
            if (nm[da.special(r)] != db.special(nm[r])) bad.push_back(at + ": special branch at " + da.name(r) + " not preserved");
        if (pv >= 0) {
            const auto& pm = m.nodeMap[pv];
            if (pm[a.fram[v]] != b.fram[w]) bad.push_back(at + ": f not preserved");
            for (auto& [l, nb] : a.g[v]) {
                auto it = b.g[w].find(nm[l]);
                if (it == b.g[w].end() || it->second != pm[nb]) bad.push_back(at + ": g not preserved at " + da.name(l));
            }
        }
    }
    if (bad.empty()) {
        auto da = a.domain(), db = b.domain();
        for (auto& [l, e] : a.element) {
            int i = static_cast<int>(std::lower_bound(da.begin(), da.end(), e) - da.begin());
            auto it = b.element.find(m.nodeMap[a.root][l]);
            if (it == b.element.end() || it->second != db[m.elementMap[i]]) bad.push_back("element map disagrees with root leaves");
        }
    }
    return bad;
}

}  // namespace treeds
