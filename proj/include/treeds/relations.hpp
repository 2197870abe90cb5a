#pragma once

#include <string>
#include <vector>

#include "treeds/dset.hpp"
#include "treeds/lstructure.hpp"

namespace treeds {

// A quaternary relation on {0..n-1}.
class QuatRel {
public:
    QuatRel() = default;
    explicit QuatRel(int n) : n_(n), bits_(static_cast<size_t>(n) * n * n * n, 0) {}
    int size() const { return n_; }
    bool operator()(int x, int y, int z, int w) const { return bits_[idx(x, y, z, w)]; }
    void set(int x, int y, int z, int w, bool v = true) { bits_[idx(x, y, z, w)] = v; }
    bool operator==(const QuatRel& o) const { return n_ == o.n_ && bits_ == o.bits_; }

private:
    size_t idx(int x, int y, int z, int w) const { return ((static_cast<size_t>(x) * n_ + y) * n_ + z) * n_ + w; }
    int n_ = 0;
    std::vector<uint8_t> bits_;
};

// Group ids of the grouped structure are vertex indices of the tree, so
// ls.l_group / ls.s_group are the witness maps.
struct Realization {
    LStructure ls;
    std::vector<std::string> witnessVertex;  // group id -> vertex id
};

Realization realize(const TreeOfDSets& t);
// Relations among the listed elements only (indices into t.domain()).
LStructure realize_on(const TreeOfDSets& t, const std::vector<int>& subset);

QuatRel leaf_d_relation(const DSetGraph& d, const std::vector<int>& leaves);
QuatRel root_d(const LStructure& ls);

LStructure derive_from_ls(const LStructure& ls);
// Build the (L,S)-reduct check: throws ArgumentError on symmetry violations.
void check_ls_symmetry(const LStructure& ls);

enum class DLevel { Basic, Proper, Dense };

struct AxiomReport {
    std::vector<std::string> failures;  // "(D2) at (a,b,c,d)"
    bool ok() const { return failures.empty(); }
};

AxiomReport check_d_axioms(const QuatRel& rel, DLevel level, size_t maxFailures = 64);

// For distinct x,y,z exactly one of the three apex choices holds.
std::vector<std::string> apex_violations(const LStructure& ls);

}  // namespace treeds
