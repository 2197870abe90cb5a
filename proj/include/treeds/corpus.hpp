#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "treeds/dset.hpp"
#include "treeds/lstructure.hpp"

namespace treeds {

// Members of the class up to isomorphism, by domain size.
struct Corpus {
    int maxSize = 0;
    std::vector<std::vector<TreeOfDSets>> bySize;  // bySize[n]; bySize[0] empty
    std::vector<std::vector<std::string>> keys;    // canonical keys, parallel to bySize
    std::unordered_map<std::string, std::pair<int, int>> index;  // key -> (size, position)

    size_t count(int n) const { return n < static_cast<int>(bySize.size()) ? bySize[n].size() : 0; }
    size_t total() const;
    // Membership by canonical key; only meaningful for |ls| <= maxSize.
    bool contains_key(const std::string& key) const { return index.count(key) > 0; }
};

// Closure of the one-element structure under enumerate_extensions, with
// isomorphism deduplication. Elements are named a, b, c, ... in order of
// addition.
Corpus build_corpus(int maxSize, int jobs = 1);

// Every valid tree of D-sets whose root label has `leaves` leaves, with
// elements named "0", "1", ...; built directly from leaf-labelled trees,
// special choices and successor trees, without the extension machinery.
std::vector<TreeOfDSets> all_trees_on(int leaves);

// Canonical keys of the realizations of all_trees_on(n), for n = 0..maxSize.
std::vector<std::set<std::string>> direct_enumeration_keys(int maxSize, int jobs = 1);

}  // namespace treeds
