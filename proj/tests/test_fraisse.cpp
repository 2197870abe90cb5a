#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>
#include <set>

#include "treeds/corpus.hpp"
#include "treeds/fraisse.hpp"
#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

using namespace treeds;

namespace {

TreeOfDSets random_member(std::mt19937& rng, int size) {
    TreeOfDSets t = fixtures::singleton("a0");
    for (int k = 1; k < size; ++k) {
        auto xs = all_extensions(t, "a" + std::to_string(k));
        t = xs[rng() % xs.size()].tree;
    }
    return t;
}

std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> sub;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(sub.size()) == k) {
            out.push_back(sub);
            return;
        }
        for (int y = from; y < n; ++y) {
            sub.push_back(y);
            rec(y + 1);
            sub.pop_back();
        }
    };
    rec(0);
    return out;
}

// Oracle key: the general canonical form with the first block coloured 1.
std::string oracle_key(const LStructure& ls, const std::vector<int>& elems, int marked) {
    std::vector<int> colors(elems.size(), 0);
    for (int i = 0; i < marked; ++i) colors[i] = 1;
    return canonical_key(ls.restrict(elems), colors);
}

ChainConfig config(int rounds, int maxSize, int taskBound, uint64_t seed = 1) {
    ChainConfig c;
    c.seed = fixtures::fix2();
    c.rounds = rounds;
    c.maxSize = maxSize;
    c.taskBound = taskBound;
    c.rngSeed = seed;
    return c;
}

}  // namespace

// ===========================================================================
// type keys
// ===========================================================================

TEST(TypeKey, AgreesWithCanonicalFormOnMarkedCorpusMembers) {
    auto c = build_corpus(5);
    std::map<std::string, std::string> fwd, back;
    for (int s = 1; s <= 5; ++s)
        for (auto& e : c.bySize[s]) {
            auto ls = realize(e).ls;
            for (int x = 0; x < s; ++x) {
                std::vector<int> elems{x};
                for (int i = 0; i < s; ++i)
                    if (i != x) elems.push_back(i);
                std::string a = type_key(ls, elems, {1, s - 1}), b = oracle_key(ls, elems, 1);
                auto [i, fi] = fwd.emplace(a, b);
                auto [j, fj] = back.emplace(b, a);
                EXPECT_EQ(i->second, b);
                EXPECT_EQ(j->second, a);
            }
        }
    EXPECT_GT(fwd.size(), 60u);
}

// Subsets of a larger member need not induce members; the key must still
// separate exactly what the general canonical form separates.
TEST(TypeKey, AgreesWithCanonicalFormOnArbitrarySubsets) {
    std::mt19937 rng(11);
    for (int round = 0; round < 3; ++round) {
        auto t = random_member(rng, 9);
        auto ls = realize(t).ls;
        std::map<std::string, std::string> fwd, back;
        for (int k = 3; k <= 5; ++k)
            for (auto& sub : subsets(9, k))
                for (int marked : {0, 1, 2}) {
                    std::string a = type_key(ls, sub, {marked, k - marked}), b = oracle_key(ls, sub, marked);
                    auto [i, fi] = fwd.emplace(a, b);
                    auto [j, fj] = back.emplace(b, a);
                    ASSERT_EQ(i->second, b);
                    ASSERT_EQ(j->second, a);
                }
    }
}

TEST(TypeKey, NonMemberSubsetDiffersFromMemberWithSameLAndS) {
    // Root point c4 has only d in its special branch; dropping d leaves two
    // witnesses with the same J-set, which no tree realizes.
    auto c = build_corpus(5);
    bool found = false;
    for (auto& e : c.bySize[5]) {
        auto ls = realize(e).ls;
        for (int x = 0; x < 5 && !found; ++x) {
            std::vector<int> rest;
            for (int i = 0; i < 5; ++i)
                if (i != x) rest.push_back(i);
            if (is_member_of_D(ls.restrict(rest)).member) continue;
            found = true;
            EXPECT_FALSE(c.contains_key(canonical_key(ls.restrict(rest))));
            auto key = type_key(ls, rest, {4});
            for (auto& m : c.bySize[4]) {
                auto lm = realize(m).ls;
                EXPECT_NE(type_key(lm, {0, 1, 2, 3}, {4}), key);
            }
        }
    }
    EXPECT_TRUE(found);
}

TEST(TypeKey, LargeSetsAndBadBlocks) {
    std::mt19937 rng(3);
    auto t = random_member(rng, 9);
    auto ls = realize(t).ls;
    std::vector<int> all{0, 1, 2, 3, 4, 5, 6, 7, 8};
    EXPECT_EQ(type_key(ls, all, {2, 7}).substr(0, 1), "c");
    EXPECT_THROW(type_key(ls, all, {2, 6}), ArgumentError);
    EXPECT_THROW(type_key(ls, {0, 1}, {-1, 3}), ArgumentError);
}

// ===========================================================================
// pair types
// ===========================================================================

TEST(PairTypes, CountsMatchCorpusOrbitOracle) {
    auto c = build_corpus(5);
    for (int maxBase = 1; maxBase <= 4; ++maxBase) {
        std::set<std::string> oracle;
        for (int s = 2; s <= maxBase + 1; ++s)
            for (auto& e : c.bySize[s]) {
                auto ls = realize(e).ls;
                for (int x = 0; x < s; ++x) {
                    std::vector<int> elems{x};
                    for (int i = 0; i < s; ++i)
                        if (i != x) elems.push_back(i);
                    std::vector<int> rest(elems.begin() + 1, elems.end());
                    if (!c.contains_key(canonical_key(ls.restrict(rest)))) continue;
                    oracle.insert(oracle_key(ls, elems, 1));
                }
            }
        EXPECT_EQ(pair_types(maxBase).size(), oracle.size()) << "maxBase " << maxBase;
    }
}

TEST(PairTypes, SmallCasesAndOrder) {
    auto p = pair_types(2);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].baseSize, 1);
    EXPECT_EQ(p[1].baseSize, 2);
    EXPECT_EQ(p[1].kind, ExtensionDescriptor::Kind::TypeI);
    EXPECT_EQ(p[2].kind, ExtensionDescriptor::Kind::TypeIIb);
    auto q = pair_types(4);
    for (size_t i = 1; i < q.size(); ++i)
        EXPECT_LE(std::tie(q[i - 1].baseSize, q[i - 1].kind, q[i - 1].key), std::tie(q[i].baseSize, q[i].kind, q[i].key));
    for (auto& t : q) {
        EXPECT_EQ(t.base.domain_size(), t.baseSize);
        EXPECT_EQ(t.extension.domain_size(), t.baseSize + 1);
    }
    EXPECT_THROW(pair_types(0), ArgumentError);
}

TEST(RealizedTypes, MatchesBruteForceOnRandomMember) {
    std::mt19937 rng(5);
    auto t = random_member(rng, 8);
    auto ls = realize(t).ls;
    auto got = realized_types(ls, 3);
    std::set<std::string> pairs, bases;
    for (int s = 1; s <= 4; ++s)
        for (auto& sub : subsets(8, s)) {
            if (s <= 3) bases.insert(type_key(ls, sub, {s}));
            for (int x = 0; x < s && s >= 2; ++x) {
                std::vector<int> elems{sub[x]};
                for (int i = 0; i < s; ++i)
                    if (i != x) elems.push_back(sub[i]);
                pairs.insert(type_key(ls, elems, {1, s - 1}));
            }
        }
    EXPECT_EQ(got.bases, bases);
    EXPECT_EQ(got.pairs, pairs);
    auto par = realized_types(ls, 3, 3);
    EXPECT_EQ(par.pairs, got.pairs);
}

// ===========================================================================
// chains
// ===========================================================================

TEST(Chain, ZeroRoundsIsTheSeed) {
    auto st = build_chain(config(0, 10, 3));
    ASSERT_EQ(st.size(), 1u);
    EXPECT_TRUE(same_relations(realize(st[0].structure).ls, realize(fixtures::fix2()).ls));
}

TEST(Chain, RejectsBadConfig) {
    auto c = config(1, 10, 3);
    c.maxSize = 1;
    EXPECT_THROW(build_chain(c), ArgumentError);
    c = config(1, 10, 0);
    EXPECT_THROW(build_chain(c), ArgumentError);
    c = config(-1, 10, 2);
    EXPECT_THROW(build_chain(c), ArgumentError);
    c = config(1, 10, 2);
    c.seed.label[c.seed.root].set_special(0, 1);  // a leaf cannot carry a special
    EXPECT_THROW(build_chain(c), std::exception);
}

// Oracle: search maps a -> u, b -> v, e -> x into the stage directly.
TEST(Chain, OneRoundRealizesEveryExtensionOfFix2) {
    auto st = build_chain(config(1, 20, 2));
    ASSERT_EQ(st.size(), 2u);
    const auto& t = st[1].structure;
    auto ls = realize(t).ls;
    int n = t.domain_size();
    for (auto& x : enumerate_extensions(fixtures::fix2(), "e")) {
        auto le = realize(x.tree).ls;
        int a = le.index_of("a"), b = le.index_of("b"), e = le.index_of("e");
        bool found = false;
        for (int u = 0; u < n && !found; ++u)
            for (int v = 0; v < n && !found; ++v)
                for (int w = 0; w < n && !found; ++w) {
                    if (u == v || u == w || v == w) continue;
                    std::vector<int> map(3);
                    map[a] = u;
                    map[b] = v;
                    map[e] = w;
                    found = is_embedding(le, ls, map);
                }
        EXPECT_TRUE(found) << x.descriptor.to_string();
    }
}

TEST(Chain, StagesAreMembersAndEmbed) {
    auto st = build_chain(config(3, 24, 3));
    ASSERT_EQ(st.size(), 4u);
    for (size_t i = 0; i < st.size(); ++i) {
        const auto& s = st[i];
        EXPECT_EQ(s.stageIndex, static_cast<int>(i));
        auto ls = realize(s.structure).ls;
        EXPECT_TRUE(is_member_of_D(ls).member);
        EXPECT_TRUE(apex_violations(ls).empty());
        EXPECT_LE(s.structure.domain_size(), 24);
        if (i == 0) continue;
        EXPECT_TRUE(s.embeddingFromPrevious.verified);
        EXPECT_TRUE(is_embedding(realize(st[i - 1].structure).ls, ls, s.embeddingFromPrevious.elementMap));
        EXPECT_EQ(s.structure.domain_size(), st[i - 1].structure.domain_size() + static_cast<int>(s.provenance.size()));
        for (auto& p : s.provenance) {
            EXPECT_TRUE(p.fromExtension.verified);
            EXPECT_LE(p.task.baseSize, 3);
            EXPECT_EQ(static_cast<int>(p.base.size()), p.task.baseSize);
        }
        if (!s.deferred.empty()) EXPECT_EQ(s.structure.domain_size(), 24);
    }
    EXPECT_EQ(st.back().structure.domain_size(), 24);
}

TEST(Chain, TasksFollowTheCanonicalOrder) {
    auto st = build_chain(config(2, 30, 3));
    for (auto& s : st)
        for (size_t i = 1; i < s.provenance.size(); ++i) {
            auto& a = s.provenance[i - 1].task;
            auto& b = s.provenance[i].task;
            EXPECT_LE(std::tie(a.baseSize, a.kind, a.key), std::tie(b.baseSize, b.kind, b.key));
        }
}

TEST(Chain, Deterministic) {
    auto a = build_chain(config(2, 20, 3, 42));
    auto b = build_chain(config(2, 20, 3, 42));
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].structure.domain(), b[i].structure.domain());
        EXPECT_TRUE(same_relations(realize(a[i].structure).ls, realize(b[i].structure).ls));
        ASSERT_EQ(a[i].provenance.size(), b[i].provenance.size());
        for (size_t j = 0; j < a[i].provenance.size(); ++j) {
            EXPECT_EQ(a[i].provenance[j].base, b[i].provenance[j].base);
            EXPECT_TRUE(a[i].provenance[j].descriptor == b[i].provenance[j].descriptor);
        }
    }
}

TEST(Chain, CapDefersRemainingTasks) {
    auto st = build_chain(config(3, 6, 3));
    EXPECT_EQ(st.back().structure.domain_size(), 6);
    size_t open = 0;
    for (auto& d : st.back().deferred) {
        EXPECT_GT(d.copies, 0u);
        open += d.copies;
    }
    EXPECT_GT(open, 0u);
}

// ===========================================================================
// reports
// ===========================================================================

TEST(Richness, SeedOnlyStage) {
    ChainStage s;
    s.structure = fixtures::fix2();
    auto r = richness_audit(s, 2);
    ASSERT_EQ(r.typesBySize.size(), 2u);
    EXPECT_EQ(r.typesBySize[0], std::make_pair(1, 1));
    EXPECT_EQ(r.typesBySize[1], std::make_pair(1, 1));
    // the singleton's only extension is realized, FIX2's two are not
    EXPECT_EQ(r.extensionsTotal, 3);
    EXPECT_EQ(r.extensionsRealized, 1);
    EXPECT_FALSE(r.full());
}

TEST(Richness, CoverageIsMonotoneAndBecomesFull) {
    auto st = build_chain(config(3, 30, 3));
    int prevTypes = 0, prevExt = 0;
    for (auto& s : st) {
        auto r = richness_audit(s, 3);
        EXPECT_GE(r.typesEmbedded, prevTypes);
        EXPECT_GE(r.extensionsRealized, prevExt);
        for (auto& e : r.entries) {
            EXPECT_LE(e.realized, e.total);
            EXPECT_LE(e.copyPairsRealized, e.copyPairs);
        }
        prevTypes = r.typesEmbedded;
        prevExt = r.extensionsRealized;
    }
    EXPECT_TRUE(richness_audit(st.back(), 3).full());
}

TEST(Orbits, SmallSignatures) {
    auto st = build_chain(config(2, 16, 3));
    const auto& s = st.back();
    EXPECT_EQ(orbit_signature(s, 1), 1u);
    EXPECT_EQ(orbit_signature(s, 2), 1u);
    EXPECT_EQ(orbit_signature(s, 3), 1u);
    EXPECT_GE(orbit_signature(s, 4), 2u);
    EXPECT_THROW(orbit_signature(s, 0), ArgumentError);
    EXPECT_THROW(orbit_signature(s, 17), ArgumentError);
    EXPECT_EQ(orbit_signature(s, 4, 3), orbit_signature(s, 4, 1));
}

// Oracle: hulls through the one-shot hull() and general canonical forms.
TEST(Orbits, MatchesBruteForce) {
    std::mt19937 rng(9);
    auto t = random_member(rng, 9);
    ChainStage s;
    s.structure = t;
    auto ls = realize(t).ls;
    std::set<std::string> types;
    for (auto& a : subsets(9, 4)) {
        auto f = hull(t, a);
        std::vector<int> elems = a;
        for (int x : f)
            if (!std::binary_search(a.begin(), a.end(), x)) elems.push_back(x);
        types.insert(oracle_key(ls, elems, 4));
    }
    EXPECT_EQ(orbit_signature(s, 4), types.size());
}
