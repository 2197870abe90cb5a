#pragma once

#include <memory>
#include <string>
#include <vector>

#include "treeds/dset.hpp"
#include "treeds/errors.hpp"
#include "treeds/lstructure.hpp"

namespace treeds {

// Raised when a construction that the theory guarantees comes out wrong.
struct InconsistencyError : DataError {
    using DataError::DataError;
};

// How to add one element to a tree of D-sets.
//   TypeI   new root: a star on the old domain plus the new element, which is
//           special; the old root hangs off the centre.
//   TypeIIa new leaf at the root ramification point `ram`; `inner` says how
//           the induced structure at that point grows (its own new element is
//           a placeholder that becomes the new leaf).
//   TypeIIb new ramification point on the root edge edgeU-edgeV carrying the
//           new leaf; `choice` picks its special branch.
struct ExtensionDescriptor {
    enum class Kind { TypeI, TypeIIa, TypeIIb };
    enum class Choice { NewLeaf, SideU, SideV };

    std::string newElement;
    Kind kind = Kind::TypeI;
    std::string ram;
    std::shared_ptr<const ExtensionDescriptor> inner;
    std::string edgeU, edgeV;
    Choice choice = Choice::NewLeaf;

    static ExtensionDescriptor type_i(const std::string& e);
    static ExtensionDescriptor type_iia(const std::string& e, const std::string& ram, ExtensionDescriptor inner);
    static ExtensionDescriptor type_iib(const std::string& e, const std::string& u, const std::string& v, Choice c);

    int depth() const;
    std::string to_string() const;
    bool operator==(const ExtensionDescriptor& o) const;
};

const char* kind_name(ExtensionDescriptor::Kind k);

// elementMap[i] = index in the target's sorted domain of element i of the source.
struct Embedding {
    std::vector<int> elementMap;
    bool verified = false;
};

// Checks preservation and reflection of all six relations.
Embedding verify_embedding(const TreeOfDSets& from, const TreeOfDSets& to, std::vector<int> map);
// Map between two trees that identifies equally named elements.
Embedding name_embedding(const TreeOfDSets& from, const TreeOfDSets& to);

TreeOfDSets apply_extension(const TreeOfDSets& t, const ExtensionDescriptor& d);

struct Extension {
    ExtensionDescriptor descriptor;
    TreeOfDSets tree;
};

// One representative per isomorphism type over the old domain (fixed
// pointwise). The new element is called `newElement`, or a fresh "e..." name.
std::vector<Extension> enumerate_extensions(const TreeOfDSets& t, const std::string& newElement = "");
// Same, without deduplication.
std::vector<Extension> all_extensions(const TreeOfDSets& t, const std::string& newElement);

// The first descriptor, in enumeration order, that reproduces E over A.
ExtensionDescriptor classify(const TreeOfDSets& a, const TreeOfDSets& e, const Embedding& emb);

// Order of domain(E) \ A (indices into E's sorted domain) whose every prefix
// induces a member of the class. Throws InconsistencyError if none exists.
std::vector<int> peel(const TreeOfDSets& e, const std::vector<int>& a);

struct Amalgam {
    TreeOfDSets tree;
    Embedding g1, g2;
};

// Amalgam of two descriptors over the same base, which must carry distinct
// new elements.
TreeOfDSets amalgamate_descriptors(const TreeOfDSets& a, const ExtensionDescriptor& d1,
                                   const ExtensionDescriptor& d2);

Amalgam amalgamate_one_point(const TreeOfDSets& a, const TreeOfDSets& e1, const Embedding& f1,
                             const TreeOfDSets& e2, const Embedding& f2);
Amalgam amalgamate(const TreeOfDSets& a, const TreeOfDSets& e1, const Embedding& f1, const TreeOfDSets& e2,
                   const Embedding& f2);

// Both embeddings verified, both compose to the same map on A, and the
// amalgam is a member. Empty when all hold.
std::vector<std::string> check_amalgam(const TreeOfDSets& a, const TreeOfDSets& e1, const Embedding& f1,
                                       const TreeOfDSets& e2, const Embedding& f2, const Amalgam& m);

struct JointEmbedding {
    TreeOfDSets tree;
    Embedding fa, fb;
};

JointEmbedding joint_embed(const TreeOfDSets& a, const TreeOfDSets& b);

// ===========================================================================
// hull
// ===========================================================================

// Precomputed projections and distance tables of one tree, for repeated hulls.
class HullContext {
public:
    explicit HullContext(const TreeOfDSets& t);
    const TreeOfDSets& tree() const { return *t_; }
    // Sorted indices; A must be nonempty.
    std::vector<int> hull(const std::vector<int>& a) const;

private:
    struct Span {
        std::vector<int> rams;
    };
    Span span(int v, const std::vector<char>& in) const;
    int start_vertex(const std::vector<char>& in) const;

    const TreeOfDSets* t_;
    int n_;
    std::vector<std::vector<int>> proj_;
    std::vector<DistanceTable> dist_;
    std::vector<int> order_;
};

std::vector<int> hull(const TreeOfDSets& e, const std::vector<int>& a);
// Sum over i = 1..n-3 of (n-2)!/i!; zero for n <= 3.
long long hull_bound_f(int n);
// Smallest superset of A inducing a member; ties broken lexicographically.
std::vector<int> minimal_hull(const TreeOfDSets& e, const std::vector<int>& a);

}  // namespace treeds
