#include "treeds/corpus.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "treeds/amalgam.hpp"
#include "treeds/parallel.hpp"
#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

namespace treeds {

size_t Corpus::total() const {
    size_t n = 0;
    for (auto& v : bySize) n += v.size();
    return n;
}

namespace {

std::string element_name(int i) { return i < 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i); }

std::string key_of(const TreeOfDSets& t) { return canonical_key(realize(t).ls); }

}  // namespace

Corpus build_corpus(int maxSize, int jobs) {
    if (maxSize < 0) throw ArgumentError("negative corpus size");
    Corpus c;
    c.maxSize = maxSize;
    c.bySize.resize(maxSize + 1);
    c.keys.resize(maxSize + 1);
    if (maxSize == 0) return c;
    auto add = [&](int n, TreeOfDSets t, std::string key) {
        if (c.index.count(key)) return;
        c.index[key] = {n, static_cast<int>(c.bySize[n].size())};
        c.bySize[n].push_back(std::move(t));
        c.keys[n].push_back(std::move(key));
    };
    auto seed = fixtures::singleton(element_name(0));
    add(1, seed, key_of(seed));
    for (int n = 1; n < maxSize; ++n) {
        const auto& layer = c.bySize[n];
        std::vector<std::vector<std::pair<std::string, TreeOfDSets>>> found(layer.size());
        parallel_for(layer.size(), jobs, [&](size_t i) {
            for (auto& x : enumerate_extensions(layer[i], element_name(n)))
                found[i].emplace_back(key_of(x.tree), std::move(x.tree));
        });
        for (auto& f : found)
            for (auto& [k, t] : f) add(n + 1, std::move(t), k);
    }
    return c;
}

// ===========================================================================
// direct enumeration
// ===========================================================================

namespace {

struct Topo {
    std::vector<std::vector<int>> adj;
    std::vector<int> leaf;  // insertion label of a leaf node, -1 for internal nodes
};

// Leaf-labelled trees on leaves 0..k-1 without degree-2 nodes: leaf i is
// inserted on an edge or at an internal node of each tree on 0..i-1.
std::vector<Topo> topologies(int k) {
    if (k == 1) return {Topo{{{}}, {0}}};
    std::vector<Topo> cur{Topo{{{1}, {0}}, {0, 1}}};
    for (int leaf = 2; leaf < k; ++leaf) {
        std::vector<Topo> next;
        for (auto& a : cur) {
            int n = static_cast<int>(a.adj.size());
            for (int u = 0; u < n; ++u)
                for (int v : a.adj[u]) {
                    if (v < u) continue;
                    Topo b = a;
                    int m = n, l = n + 1;
                    b.adj.resize(n + 2);
                    std::replace(b.adj[u].begin(), b.adj[u].end(), v, m);
                    std::replace(b.adj[v].begin(), b.adj[v].end(), u, m);
                    b.adj[m] = {u, v, l};
                    b.adj[l] = {m};
                    b.leaf.push_back(-1);
                    b.leaf.push_back(leaf);
                    next.push_back(std::move(b));
                }
            for (int x = 0; x < n; ++x) {
                if (a.adj[x].size() < 3) continue;
                Topo b = a;
                b.adj[x].push_back(n);
                b.adj.push_back({x});
                b.leaf.push_back(leaf);
                next.push_back(std::move(b));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

DSetGraph to_graph(const Topo& a, std::vector<int>& leafNode) {
    int n = static_cast<int>(a.adj.size());
    DSetGraph d;
    std::vector<int> node(n, -1);
    int inner = 0;
    for (int v = 0; v < n; ++v)
        node[v] = d.add_node(a.leaf[v] >= 0 ? std::to_string(a.leaf[v]) : "n" + std::to_string(inner++));
    for (int v = 0; v < n; ++v)
        for (int w : a.adj[v])
            if (v < w) d.add_edge(node[v], node[w]);
    leafNode.clear();
    for (int v = 0; v < n; ++v)
        if (a.leaf[v] >= 0) leafNode.push_back(node[v]);
    return d;
}

void attach_sub(TreeOfDSets& out, const TreeOfDSets& src, int par, int fr, const std::vector<int>& target,
                const std::string& prefix) {
    std::map<int, int> remap;
    for (int v : src.topological()) {
        int nv;
        if (v == src.root) {
            nv = out.add_vertex(prefix, src.label[v], par, fr);
            for (auto& [l, name] : src.element) out.g[nv][l] = target.at(std::stoi(name));
        } else {
            nv = out.add_vertex(prefix + "." + src.vid[v], src.label[v], remap.at(src.parent[v]), src.fram[v]);
            out.g[nv] = src.g[v];
        }
        remap[v] = nv;
    }
}

struct Gen {
    std::map<int, std::vector<TreeOfDSets>> memo;

    const std::vector<TreeOfDSets>& trees(int k) {
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        std::vector<TreeOfDSets> out;
        for (auto& topo : topologies(k)) {
            std::vector<int> leafNode;
            DSetGraph base = to_graph(topo, leafNode);
            auto rams = base.ram_points();
            // options[i] = (special neighbour, successor) choices at rams[i]
            std::vector<std::vector<std::pair<int, const TreeOfDSets*>>> options;
            for (int r : rams) {
                std::vector<std::pair<int, const TreeOfDSets*>> opt;
                const auto& subs = trees(base.degree(r) - 1);
                for (int sp : base.neighbors(r))
                    for (auto& s : subs) opt.emplace_back(sp, &s);
                options.push_back(std::move(opt));
            }
            std::vector<size_t> pick(rams.size(), 0);
            for (;;) {
                TreeOfDSets t;
                DSetGraph d = base;
                for (size_t i = 0; i < rams.size(); ++i) d.set_special(rams[i], options[i][pick[i]].first);
                t.add_vertex("v", d, -1, -1);
                for (int l : leafNode) t.element[l] = d.name(l);
                for (size_t i = 0; i < rams.size(); ++i) {
                    std::vector<int> side;
                    for (int nb : d.neighbors(rams[i]))
                        if (nb != d.special(rams[i])) side.push_back(nb);
                    attach_sub(t, *options[i][pick[i]].second, 0, rams[i], side, "v" + std::to_string(i));
                }
                out.push_back(std::move(t));
                size_t i = 0;
                while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
                if (i == pick.size()) break;
            }
        }
        return memo[k] = std::move(out);
    }
};

}  // namespace

std::vector<TreeOfDSets> all_trees_on(int leaves) {
    if (leaves < 1) throw ArgumentError("trees need at least one leaf");
    Gen g;
    return g.trees(leaves);
}

std::vector<std::set<std::string>> direct_enumeration_keys(int maxSize, int jobs) {
    std::vector<std::set<std::string>> out(std::max(maxSize, 0) + 1);
    Gen g;
    for (int n = 1; n <= maxSize; ++n) {
        const auto& ts = g.trees(n);
        std::vector<std::string> keys(ts.size());
        parallel_for(ts.size(), jobs, [&](size_t i) { keys[i] = key_of(ts[i]); });
        out[n].insert(keys.begin(), keys.end());
    }
    return out;
}

}  // namespace treeds
