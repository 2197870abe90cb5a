#include <gtest/gtest.h>

#include <set>

#include "treeds/corpus.hpp"
#include "treeds/parallel.hpp"
#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

using namespace treeds;

TEST(Corpus, CountsUpToFive) {
    auto c = build_corpus(5);
    std::vector<size_t> want{0, 1, 1, 1, 4, 17};
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(c.count(n), want[n]) << "size " << n;
    EXPECT_EQ(c.total(), 24u);
}

TEST(Corpus, MatchesDirectEnumeration) {
    auto c = build_corpus(5);
    auto direct = direct_enumeration_keys(5);
    for (int n = 1; n <= 5; ++n) {
        std::set<std::string> mine(c.keys[n].begin(), c.keys[n].end());
        EXPECT_EQ(mine, direct[n]) << "size " << n;
    }
}

TEST(Corpus, KeysAreDistinctAndIndexed) {
    auto c = build_corpus(5);
    for (int n = 1; n <= 5; ++n)
        for (size_t i = 0; i < c.keys[n].size(); ++i) {
            auto it = c.index.find(c.keys[n][i]);
            ASSERT_NE(it, c.index.end());
            EXPECT_EQ(it->second, std::make_pair(n, static_cast<int>(i)));
        }
}

TEST(Corpus, MembersAreValidAndRecognised) {
    auto c = build_corpus(5);
    for (int n = 1; n <= 5; ++n)
        for (auto& t : c.bySize[n]) {
            EXPECT_TRUE(validate(t).ok()) << validate(t).summary();
            EXPECT_EQ(static_cast<int>(t.domain().size()), n);
            EXPECT_TRUE(is_member_of_D(realize(t).ls).member);
        }
}

// Number of leaf-labelled trees without degree-2 nodes and with at least one
// internal node, times the special and successor choices at every node.
TEST(Corpus, DirectTreeCounts) {
    EXPECT_EQ(all_trees_on(1).size(), 1u);
    EXPECT_EQ(all_trees_on(2).size(), 1u);
    // star on 3 leaves: 3 specials, 1 successor shape
    EXPECT_EQ(all_trees_on(3).size(), 3u);
    // star: 4 specials x 3 successors; 3 quartets: 3 x 3 at their two points
    EXPECT_EQ(all_trees_on(4).size(), 39u);
    for (auto& t : all_trees_on(4)) EXPECT_TRUE(validate(t).ok()) << validate(t).summary();
}

TEST(Corpus, ParallelMatchesSerial) {
    auto a = build_corpus(5, 1);
    auto b = build_corpus(5, 3);
    EXPECT_EQ(a.keys, b.keys);
}

TEST(Parallel, RethrowsFirstError) {
    EXPECT_THROW(parallel_for(10, 3, [](size_t i) {
                     if (i == 4) throw DataError("boom");
                 }),
                 DataError);
}
