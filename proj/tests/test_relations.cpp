#include <gtest/gtest.h>

#include "treeds/dset.hpp"
#include "treeds/errors.hpp"
#include "treeds/relations.hpp"

using namespace treeds;

namespace {

struct Named {
    LStructure ls;
    int operator[](const std::string& n) const { return ls.index_of(n); }
};

Named realized(const TreeOfDSets& t) { return {realize(t).ls}; }

int count_L(const LStructure& ls) {
    int n = ls.size(), c = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) c += ls.L(x, y, z);
    return c;
}

int count_S(const LStructure& ls) {
    int n = ls.size(), c = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) c += ls.S(x, y, z, w);
    return c;
}

}  // namespace

TEST(Realize, Fix1) {
    auto r = realized(fixtures::fix1());
    int x = r["x"], y = r["y"], z = r["z"];
    EXPECT_TRUE(r.ls.L(x, y, z));
    EXPECT_TRUE(r.ls.L(x, z, y));
    EXPECT_EQ(count_L(r.ls), 2);
    EXPECT_EQ(count_S(r.ls), 0);
    for (int u = 0; u < 3; ++u) EXPECT_FALSE(r.ls.Lp(x, y, z, u));
    EXPECT_TRUE(r.ls.R(x, y, z, x, z, y));
}

TEST(Realize, Fix2AllEmpty) {
    auto r = realized(fixtures::fix2());
    EXPECT_EQ(count_L(r.ls), 0);
    EXPECT_EQ(count_S(r.ls), 0);
    std::string diff;
    EXPECT_TRUE(same_relations(r.ls, LStructure::explicit_empty(r.ls.names()), &diff)) << diff;
}

TEST(Realize, Fix5) {
    auto r = realized(fixtures::fix5());
    int x = r["x"], y = r["y"], z = r["z"], w = r["w"], p = r["p"];
    EXPECT_TRUE(r.ls.S(x, y, z, w));
    EXPECT_TRUE(r.ls.L(x, y, z));
    EXPECT_TRUE(r.ls.L(x, y, p));
    EXPECT_TRUE(r.ls.L(p, y, z));
    EXPECT_TRUE(r.ls.Lp(p, y, z, x));
    EXPECT_FALSE(r.ls.Q(p, y, z, w, p, y, z));
    EXPECT_FALSE(r.ls.Lp(x, y, z, p));
    EXPECT_TRUE(r.ls.R(p, y, z, p, y, w));
    EXPECT_FALSE(r.ls.R(p, y, z, x, y, z));
}

TEST(Realize, WitnessVertices) {
    auto t = fixtures::fix5();
    auto r = realize(t);
    int x = r.ls.index_of("x"), y = r.ls.index_of("y"), z = r.ls.index_of("z"), p = r.ls.index_of("p");
    EXPECT_EQ(r.witnessVertex[r.ls.l_group(x, y, z)], "rho");
    EXPECT_EQ(r.witnessVertex[r.ls.l_group(p, y, z)], "nu");
}

TEST(Realize, ApexOnFixtures) {
    for (auto t : {fixtures::fix1(), fixtures::fix2(), fixtures::fix5(), fixtures::singleton()})
        EXPECT_TRUE(apex_violations(realize(t).ls).empty());
}

TEST(RealizeOn, MatchesRestriction) {
    auto t = fixtures::fix5();
    auto full = realize(t).ls;
    std::vector<int> sub = {1, 2, 3, 4};
    std::string diff;
    EXPECT_TRUE(same_relations(realize_on(t, sub), full.restrict(sub), &diff)) << diff;
}

TEST(RootD, Fix5) {
    auto r = realized(fixtures::fix5());
    auto D = root_d(r.ls);
    EXPECT_TRUE(D(r["x"], r["y"], r["z"], r["w"]));
    EXPECT_FALSE(D(r["x"], r["z"], r["y"], r["w"]));
}

TEST(RootD, Fix1OnlyDegenerate) {
    auto D = root_d(realize(fixtures::fix1()).ls);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z)
                for (int w = 0; w < 3; ++w) {
                    bool degenerate = (x == y && x != z && x != w) || (z == w && z != x && z != y);
                    EXPECT_EQ(D(x, y, z, w), degenerate);
                }
}

TEST(RootD, EqualsRootLeafD) {
    for (auto t : {fixtures::fix1(), fixtures::fix2(), fixtures::fix5()}) {
        auto ls = realize(t).ls;
        auto leaves = t.domain_leaves();
        EXPECT_TRUE(root_d(ls) == leaf_d_relation(t.label[t.root], leaves));
    }
}

TEST(Derive, Fix5RoundTrip) {
    auto ls = realize(fixtures::fix5()).ls;
    std::string diff;
    EXPECT_TRUE(same_relations(derive_from_ls(ls), ls, &diff)) << diff;
}

TEST(Derive, Fix1) {
    auto r = realized(fixtures::fix1());
    auto d = derive_from_ls(r.ls);
    int x = r["x"], y = r["y"], z = r["z"];
    for (int u = 0; u < 3; ++u) EXPECT_FALSE(d.Lp(x, y, z, u));
    EXPECT_TRUE(d.R(x, y, z, x, y, z));
    EXPECT_TRUE(d.R(x, y, z, x, z, y));
    std::string diff;
    EXPECT_TRUE(same_relations(d, r.ls, &diff)) << diff;
}

TEST(Derive, LPrimeFormulaOnFix5) {
    auto r = realized(fixtures::fix5());
    int x = r["x"], y = r["y"], z = r["z"], p = r["p"];
    const auto& ls = r.ls;
    bool rhs = ls.L(p, y, z) && ls.L(x, y, z) && ls.L(x, p, z) && ls.L(x, p, y) && !ls.S(p, x, y, z);
    EXPECT_TRUE(rhs);
    EXPECT_TRUE(ls.Lp(p, y, z, x));
}

TEST(Derive, AcceptsClosedInput) {
    auto ls = LStructure::explicit_empty({"a", "b", "c"});
    ls.put_L(0, 1, 2);
    EXPECT_NO_THROW(derive_from_ls(ls));
}

TEST(Axioms, LeafDOfFixturesIsBasic) {
    for (auto t : {fixtures::fix1(), fixtures::fix5()}) {
        auto rel = leaf_d_relation(t.label[t.root], t.label[t.root].leaves());
        EXPECT_TRUE(check_d_axioms(rel, DLevel::Basic).ok());
    }
}

TEST(Axioms, D2Violation) {
    QuatRel rel(4);
    rel.set(0, 1, 2, 3);
    rel.set(0, 2, 1, 3);
    auto rep = check_d_axioms(rel, DLevel::Basic, 1000);
    bool found = false;
    for (auto& f : rep.failures)
        if (f.rfind("(D2)", 0) == 0) found = true;
    EXPECT_TRUE(found);
}

TEST(Axioms, StarIsNotProper) {
    auto t = fixtures::fix1();
    auto rel = leaf_d_relation(t.label[0], t.label[0].leaves());
    EXPECT_TRUE(check_d_axioms(rel, DLevel::Basic).ok());
    auto rep = check_d_axioms(rel, DLevel::Proper);
    ASSERT_FALSE(rep.ok());
    EXPECT_EQ(rep.failures[0].rfind("(D5)", 0), 0u);
}
