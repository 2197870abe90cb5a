#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace treeds {

// A finite unrooted tree with no node of degree 2. Leaves are the nodes of
// degree <= 1. Each ramification point (degree >= 3) names one neighbour; the
// branch through that neighbour is the special branch.
class DSetGraph {
public:
    int add_node(const std::string& name);
    void add_edge(int a, int b);
    void remove_edge(int a, int b);
    void set_special(int ram, int neighbor);
    void clear_special(int ram);
    void rename_node(int v, const std::string& name);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int v) const { return names_.at(v); }
    int find(const std::string& name) const;
    int at(const std::string& name) const;  // throws if absent
    std::string fresh_name(const std::string& prefix) const;

    const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
    int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
    bool adjacent(int a, int b) const;
    bool is_leaf(int v) const { return degree(v) <= 1; }
    bool is_ram(int v) const { return degree(v) >= 3; }
    int special(int ram) const { return special_.at(ram); }

    std::vector<int> leaves() const;
    std::vector<int> ram_points() const;
    std::vector<std::pair<int, int>> edges() const;  // (a,b) with a<b, sorted

    std::vector<int> distances_from(int v) const;
    std::vector<int> path(int a, int b) const;
    // Nodes of the component of (tree - r) that contains neighbour nb.
    std::vector<int> component(int r, int nb) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> special_;
    std::unordered_map<std::string, int> index_;
};

// Geometric primitives on a single D-set graph.
int ram(const DSetGraph& d, int x, int y, int z);
int branch_of(const DSetGraph& d, int r, int x);
std::vector<int> branches_at(const DSetGraph& d, int r);
bool leaf_d(const DSetGraph& d, int x, int y, int z, int w);
std::vector<int> leaves_in_branch(const DSetGraph& d, int r, int nb);

// All-pairs distances; cheap enough for labels of a few hundred nodes.
class DistanceTable {
public:
    explicit DistanceTable(const DSetGraph& d);
    int operator()(int a, int b) const { return dist_[a * n_ + b]; }
    int median(int x, int y, int z) const;
    // Disjoint-geodesic test for four distinct leaves.
    bool split(int x, int y, int z, int w) const {
        return (*this)(x, y) + (*this)(z, w) < (*this)(x, z) + (*this)(y, w);
    }
    int toward(const DSetGraph& d, int r, int x) const;  // neighbour of r on r->x path

private:
    int n_;
    std::vector<int> dist_;
};

struct TreeOfDSets {
    std::vector<std::string> vid;
    std::vector<int> parent;        // -1 at the root
    std::vector<DSetGraph> label;
    std::vector<int> fram;          // node of the parent's label; -1 at the root
    std::vector<std::map<int, int>> g;  // leaf of label(w) -> neighbour of fram[w]
    std::map<int, std::string> element;  // root leaf -> element name
    int root = 0;

    int vertex_count() const { return static_cast<int>(vid.size()); }
    int add_vertex(const std::string& id, DSetGraph lab, int par, int fr);
    int find_vertex(const std::string& id) const;
    std::string fresh_vertex_id() const;
    std::vector<int> children(int v) const;
    int successor_at(int v, int r) const;  // -1 if none

    // Domain in sorted element-name order, with the root leaves carrying them.
    std::vector<std::string> domain() const;
    std::vector<int> domain_leaves() const;
    int domain_size() const { return static_cast<int>(element.size()); }
    int leaf_of(const std::string& elem) const;
    // Vertices listed parents-first.
    std::vector<int> topological() const;
};

struct Violation {
    std::string where;
    std::string rule;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const DSetGraph& d, const std::string& where);
ValidationReport validate(const TreeOfDSets& t);
void require_valid(const TreeOfDSets& t);

// proj[v][i] = leaf of label(v) receiving domain element i, or -1 if omitted.
std::vector<std::vector<int>> projections(const TreeOfDSets& t);

std::set<int> g_chain(const TreeOfDSets& t, int mu, int nu, int leaf);
bool below_or_equal(const TreeOfDSets& t, int nu, int mu);
int height(const TreeOfDSets& t);

// The subtree at nu as a tree of D-sets in its own right; the new root
// leaves are named after their node names.
TreeOfDSets induced_at(const TreeOfDSets& t, int nu);
// Same subtree, root leaves named after the parent's branch neighbours.
TreeOfDSets branch_named_subtree(const TreeOfDSets& t, int nu);

TreeOfDSets rename_elements(const TreeOfDSets& t, const std::map<std::string, std::string>& m);

namespace fixtures {
TreeOfDSets fix1();
TreeOfDSets fix2();
TreeOfDSets fix5();
TreeOfDSets singleton(const std::string& a = "a");
}  // namespace fixtures

}  // namespace treeds
