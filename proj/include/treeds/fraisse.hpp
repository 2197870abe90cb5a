#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "treeds/amalgam.hpp"
#include "treeds/dset.hpp"
#include "treeds/lstructure.hpp"

namespace treeds {

// ===========================================================================
// small types
// ===========================================================================

// Isomorphism-type key of the induced substructure on `elems`, where elems is
// split into consecutive blocks of the given sizes and isomorphisms must keep
// every block in place. For members of the class the L/S reduct determines
// all relations, so up to 7 elements the key is the minimum L/S code over
// block-respecting orderings; larger sets fall back to canonical_key with
// block colours.
std::string type_key(const LStructure& ls, const std::vector<int>& elems, const std::vector<int>& blocks);

// A one-point extension type: a member E with a marked new point, A = E - point.
struct PairType {
    int baseSize = 0;       // |A|
    std::string baseKey;    // type_key of A
    std::string key;        // type_key of (new point, A) with blocks {1, |A|}
    ExtensionDescriptor::Kind kind = ExtensionDescriptor::Kind::TypeI;
    TreeOfDSets base;       // a representative A
    TreeOfDSets extension;  // a representative E
    std::string newElement; // the marked point of E
    std::string summary;    // "over {..}: " + the classifying descriptor
};

// All pair types with 1 <= |A| <= maxBase, sorted by (|A|, kind, key).
std::vector<PairType> pair_types(int maxBase, int jobs = 1);

// Keys of every base type and pair type occurring in ls with |A| <= maxBase.
struct RealizedTypes {
    std::set<std::string> bases;
    std::set<std::string> pairs;
};
RealizedTypes realized_types(const LStructure& ls, int maxBase, int jobs = 1);

// ===========================================================================
// chains
// ===========================================================================

struct ChainConfig {
    TreeOfDSets seed;
    int rounds = 0;
    int maxSize = 0;
    int taskBound = 0;
    uint64_t rngSeed = 0;
    int jobs = 1;
};

// A task asks for a copy of A in the stage to be extended by a new point in a
// given way, up to isomorphism over the copy. Tasks are grouped by the pair
// type of (A, extension).
struct ChainTask {
    int baseSize = 0;
    ExtensionDescriptor::Kind kind = ExtensionDescriptor::Kind::TypeI;
    std::string key;      // pair type key
    std::string summary;  // the extension over a representative A
};

struct ProvenanceEntry {
    ChainTask task;
    std::vector<std::string> base;   // the copy of A, in canonical order
    std::string newElement;
    ExtensionDescriptor descriptor;  // one-point extension of the working structure
    TreeOfDSets extension;           // the extension E of a representative A
    Embedding fromExtension;         // E into the new stage
};

struct DeferredTasks {
    ChainTask task;
    size_t copies = 0;  // (copy, extension) pairs of this type left open
};

struct ChainStage {
    TreeOfDSets structure;
    int stageIndex = 0;
    std::vector<ProvenanceEntry> provenance;
    std::vector<DeferredTasks> deferred;  // left over because of maxSize
    Embedding embeddingFromPrevious;      // identity on names; empty for stage 0
};

std::vector<ChainStage> build_chain(const ChainConfig& cfg);

// ===========================================================================
// reports
// ===========================================================================

struct RichnessEntry {
    int baseSize = 0;
    std::string baseKey;
    ExtensionDescriptor::Kind kind = ExtensionDescriptor::Kind::TypeI;
    int total = 0;     // pair types of this kind over the base type
    int realized = 0;  // ... realized over some copy
    size_t copyPairs = 0;          // (copy, extension) pairs in the stage
    size_t copyPairsRealized = 0;  // ... realized over that very copy
    double coverage() const { return total ? static_cast<double>(realized) / total : 1.0; }
    double copy_coverage() const {
        return copyPairs ? static_cast<double>(copyPairsRealized) / static_cast<double>(copyPairs) : 1.0;
    }
};

struct RichnessReport {
    int k = 0;
    int typesTotal = 0;     // members with 1..k elements, up to isomorphism
    int typesEmbedded = 0;
    std::vector<std::pair<int, int>> typesBySize;  // (total, embedded) for sizes 1..k
    std::vector<RichnessEntry> entries;            // one per embedded base type and kind
    int extensionsTotal = 0;
    int extensionsRealized = 0;
    bool full() const { return typesEmbedded == typesTotal && extensionsRealized == extensionsTotal; }
};

// A pair type counts as realized when some copy of A in the stage is extended
// by some stage point in that way; coverage() is monotone along a chain.
// copy_coverage() asks the same of every copy and drops whenever new copies
// appear.
RichnessReport richness_audit(const ChainStage& stage, int k, int jobs = 1);

// Number of isomorphism types of (hull(A), A) over all k-subsets A.
size_t orbit_signature(const ChainStage& stage, int k, int jobs = 1);

}  // namespace treeds
