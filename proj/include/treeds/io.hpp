#pragma once

#include <string>

#include "json.hpp"
#include "treeds/dset.hpp"
#include "treeds/lstructure.hpp"
#include "treeds/reconstruct.hpp"

namespace treeds {

using Json = nlohmann::json;

constexpr int kFormatVersion = 1;

// ===========================================================================
// trees
// ===========================================================================

// Sorted keys, vertices sorted by id, every inner array sorted; ends in "\n".
Json tree_to_json(const TreeOfDSets& t);
std::string serialize(const TreeOfDSets& t);

// Rejects unknown keys, dangling names and trees failing validate. Errors
// carry a JSON pointer to the offending value.
TreeOfDSets tree_from_json(const Json& doc);
TreeOfDSets parse_tree(const std::string& text);

// ===========================================================================
// relations
// ===========================================================================

// {"domain": [...], "L": [[x,y,z],...], "S": ..., "Lp": ..., "Sp": ..., "Q": ..., "R": ...}
// with one representative per symmetry orbit, the lexicographically least
// one, and each list sorted.
Json relation_dump(const LStructure& ls);
// Explicit structure from a dump; limited to LStructure::kMaxExplicit elements.
LStructure relations_from_json(const Json& doc);

Json reconstruction_to_json(const ReconstructedTree& rt);

// ===========================================================================
// DOT
// ===========================================================================

enum class DotView { DSets, StructureTree, Combined };

DotView parse_view(const std::string& name);
// DSets: the root D-set with element names on its leaves. StructureTree: the
// vertices as a rooted digraph, edges labelled by the ramification point.
// Combined: one cluster per vertex holding its D-set, successor edges from the
// ramification point to the successor cluster. Special branches are arrows
// from the special neighbour to the ramification point; other edges have no
// direction.
std::string render_dot(const TreeOfDSets& t, DotView view);
std::string render_dot(const ReconstructedTree& rt, DotView view);

}  // namespace treeds
