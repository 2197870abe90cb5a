#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treeds/dset.hpp"
#include "treeds/errors.hpp"
#include "treeds/lstructure.hpp"
#include "treeds/relations.hpp"

namespace treeds {

// (apex; b, c) with b < c.
using Triple = std::array<int, 3>;

// Raised when an LStructure cannot be the realization of a tree of D-sets.
struct Refutation : DataError {
    std::string stage;
    Refutation(std::string st, const std::string& msg) : DataError(st + ": " + msg), stage(std::move(st)) {}
};

std::vector<Triple> kstar(const LStructure& ls);
// Classes of R on K*, each listed in increasing triple order.
std::vector<std::vector<Triple>> kstar_classes(const LStructure& ls);
std::vector<int> j_set(const LStructure& ls, const Triple& t);
// E-classes of J, each sorted, ordered by least element.
std::vector<std::vector<int>> e_partition(const LStructure& ls, const Triple& t);
// D on the classes of e_partition(ls, t), indexed in that order.
QuatRel direction_d(const LStructure& ls, const Triple& t);

struct RVertex {
    Triple rep{};
    std::vector<Triple> triples;
    std::vector<int> jset;
    std::vector<std::vector<int>> classes;
    QuatRel ddir;
    int parent = -1;  // immediate predecessor
    // The D-set of directions: leafOfClass[i] is the leaf for classes[i].
    DSetGraph dirTree;
    std::vector<int> leafOfClass;
    int class_of(int element) const;
};

struct ReconstructedTree {
    std::vector<std::string> names;
    std::vector<RVertex> vertices;  // root first, |J| non-increasing
    std::vector<std::vector<char>> leq;  // leq[a][b]: a <= b (J_a contains J_b)
    std::map<std::pair<int, int>, int> coneMap;  // (lower, upper) -> ram node of lower's dirTree
};

// Throws Refutation when any structural check fails.
ReconstructedTree reconstruct(const LStructure& ls);

struct Membership {
    bool member = false;
    std::optional<TreeOfDSets> tree;
    std::string refutation;
};

Membership is_member_of_D(const LStructure& ls);

// Comparison of reconstruct(realize(t)) with t itself; empty when all agree.
std::vector<std::string> check_roundtrip(const TreeOfDSets& t);

// ===========================================================================
// isomorphism and canonical forms
// ===========================================================================

struct CanonicalForm {
    std::string key;
    std::vector<int> order;  // order[pos] = element placed at position pos
};

// Minimum code over all orderings respecting the refined colouring; `colors`
// (optional) marks elements that must map to equally marked ones.
CanonicalForm canonical_form(const LStructure& ls, const std::vector<int>& colors = {});
inline std::string canonical_key(const LStructure& ls, const std::vector<int>& colors = {}) {
    return canonical_form(ls, colors).key;
}
// Code of the identity ordering; equal keys mean equal relations.
std::string labelled_key(const LStructure& ls, const std::vector<int>& colors = {});

// map[i] = index in b of element i of a.
std::optional<std::vector<int>> ls_iso(const LStructure& a, const LStructure& b);

struct TreeIso {
    std::vector<int> elementMap;  // indices into the sorted domains
    std::vector<int> vertexMap;
    std::vector<std::vector<int>> nodeMap;
};

std::optional<TreeIso> tree_iso(const TreeOfDSets& a, const TreeOfDSets& b);
// Checks every clause of the isomorphism definition; empty when fine.
std::vector<std::string> check_tree_iso(const TreeOfDSets& a, const TreeOfDSets& b, const TreeIso& m);

}  // namespace treeds
