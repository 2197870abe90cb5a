#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "treeds/amalgam.hpp"
#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

using namespace treeds;
using Kind = ExtensionDescriptor::Kind;
using Choice = ExtensionDescriptor::Choice;

namespace {

LStructure rel(const TreeOfDSets& t) { return realize(t).ls; }

int idx(const LStructure& ls, const std::string& n) { return ls.index_of(n); }

bool L(const LStructure& ls, const std::string& x, const std::string& y, const std::string& z) {
    return ls.L(idx(ls, x), idx(ls, y), idx(ls, z));
}

std::vector<int> ids(const TreeOfDSets& t, std::vector<std::string> names) {
    auto dom = t.domain();
    std::vector<int> out;
    for (auto& n : names) out.push_back(static_cast<int>(std::find(dom.begin(), dom.end(), n) - dom.begin()));
    std::sort(out.begin(), out.end());
    return out;
}

Extension find_kind(const std::vector<Extension>& xs, Kind k) {
    for (auto& x : xs)
        if (x.descriptor.kind == k) return x;
    throw std::runtime_error("kind not found");
}

// Random member built by a chain of random one-point extensions.
TreeOfDSets random_member(std::mt19937& rng, int size) {
    TreeOfDSets t = fixtures::singleton("a0");
    for (int k = 1; k < size; ++k) {
        auto xs = all_extensions(t, "a" + std::to_string(k));
        t = xs[rng() % xs.size()].tree;
    }
    return t;
}

}  // namespace

TEST(Descriptor, ToStringAndEquality) {
    auto a = ExtensionDescriptor::type_iib("e", "a", "b", Choice::SideU);
    EXPECT_EQ(a.to_string(), "TypeIIb(e on a-b, special a)");
    auto b = ExtensionDescriptor::type_iia("e", "r", ExtensionDescriptor::type_i("#new"));
    EXPECT_EQ(b.depth(), 2);
    EXPECT_TRUE(b == ExtensionDescriptor::type_iia("e", "r", ExtensionDescriptor::type_i("#new")));
    EXPECT_FALSE(a == b);
}

TEST(Apply, TypeIOnSingletonIsAnEdge) {
    auto t = apply_extension(fixtures::singleton("a"), ExtensionDescriptor::type_i("e"));
    EXPECT_TRUE(validate(t).ok());
    EXPECT_EQ(t.domain(), (std::vector<std::string>{"a", "e"}));
    EXPECT_EQ(t.vertex_count(), 1);
}

TEST(Apply, TypeIOnFix1) {
    auto t = apply_extension(fixtures::fix1(), ExtensionDescriptor::type_i("e"));
    ASSERT_TRUE(validate(t).ok()) << validate(t).summary();
    auto ls = rel(t);
    int x = idx(ls, "x"), y = idx(ls, "y"), z = idx(ls, "z"), e = idx(ls, "e");
    EXPECT_TRUE(ls.Lp(x, y, z, e));
    EXPECT_TRUE(ls.L(e, x, y));
    EXPECT_EQ(height(t), 3);
}

TEST(Apply, RejectsExistingName) {
    EXPECT_THROW(apply_extension(fixtures::fix2(), ExtensionDescriptor::type_i("a")), ArgumentError);
}

TEST(Apply, RejectsUnknownEdge) {
    EXPECT_THROW(apply_extension(fixtures::fix2(), ExtensionDescriptor::type_iib("e", "a", "q", Choice::NewLeaf)),
                 ArgumentError);
}

TEST(Apply, NewElementNamedLikeInternalNode) {
    // "r" is the centre of fix1's root label.
    auto t = apply_extension(fixtures::fix1(), ExtensionDescriptor::type_iib("r", "r", "y", Choice::SideU));
    ASSERT_TRUE(validate(t).ok()) << validate(t).summary();
    EXPECT_TRUE(is_member_of_D(rel(t)).member);
    EXPECT_EQ(t.domain_size(), 4);
}

TEST(Apply, TypeIIaOnFix1) {
    auto t = apply_extension(fixtures::fix1(),
                             ExtensionDescriptor::type_iia("e", "r", ExtensionDescriptor::type_i("#new")));
    ASSERT_TRUE(validate(t).ok()) << validate(t).summary();
    auto ls = rel(t);
    // x special at r, e a new non-special branch, and e special one level up.
    EXPECT_TRUE(L(ls, "x", "y", "e"));
    EXPECT_TRUE(L(ls, "x", "z", "e"));
    EXPECT_TRUE(L(ls, "e", "y", "z"));
    EXPECT_TRUE(is_member_of_D(ls).member);
}

TEST(Enumerate, Fix2HasThreeExtensions) {
    auto xs = enumerate_extensions(fixtures::fix2());
    ASSERT_EQ(xs.size(), 3u);
    std::set<std::string> apexes;
    for (auto& x : xs) {
        auto ls = rel(x.tree);
        for (auto ap : {"a", "b", "e"}) {
            std::vector<std::string> o;
            for (auto q : {"a", "b", "e"})
                if (std::string(q) != ap) o.push_back(q);
            if (L(ls, ap, o[0], o[1])) apexes.insert(ap);
        }
    }
    EXPECT_EQ(apexes, (std::set<std::string>{"a", "b", "e"}));
}

TEST(Enumerate, SingletonHasOne) { EXPECT_EQ(enumerate_extensions(fixtures::singleton()).size(), 1u); }

TEST(Enumerate, Fix1IncludesTypeIWithLPrime) {
    auto xs = enumerate_extensions(fixtures::fix1());
    auto ti = find_kind(xs, Kind::TypeI);
    auto ls = rel(ti.tree);
    EXPECT_TRUE(ls.Lp(idx(ls, "x"), idx(ls, "y"), idx(ls, "z"), idx(ls, "e")));
}

TEST(Enumerate, OutputsAreMembersAndDistinctOverA) {
    for (auto t : {fixtures::fix1(), fixtures::fix2(), fixtures::fix5()}) {
        auto xs = enumerate_extensions(t);
        std::set<std::string> keys;
        for (auto& x : xs) {
            EXPECT_TRUE(validate(x.tree).ok()) << x.descriptor.to_string();
            EXPECT_EQ(x.tree.domain_size(), t.domain_size() + 1);
            EXPECT_TRUE(is_member_of_D(rel(x.tree)).member) << x.descriptor.to_string();
            EXPECT_TRUE(name_embedding(t, x.tree).verified) << x.descriptor.to_string();
            EXPECT_TRUE(keys.insert(labelled_key(rel(x.tree))).second);
        }
    }
}

// Deleting one element of a random member and re-extending the rest must
// reproduce the member over the remaining elements.
TEST(Enumerate, CoversRestrictionsOfRandomMembers) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto e = random_member(rng, 5);
        auto dom = e.domain();
        for (int drop = 0; drop < 5; ++drop) {
            std::vector<int> rest;
            for (int i = 0; i < 5; ++i)
                if (i != drop) rest.push_back(i);
            auto m = is_member_of_D(realize_on(e, rest));
            if (!m.member) continue;
            auto xs = enumerate_extensions(*m.tree, dom[drop]);
            bool found = false;
            for (auto& x : xs)
                if (labelled_key(rel(x.tree)) == labelled_key(rel(e))) found = true;
            EXPECT_TRUE(found) << "trial " << trial << " drop " << dom[drop];
        }
    }
}

TEST(Classify, Fix1TypeI) {
    auto a = fixtures::fix1();
    auto xs = enumerate_extensions(a);
    auto ti = find_kind(xs, Kind::TypeI);
    auto d = classify(a, ti.tree, name_embedding(a, ti.tree));
    EXPECT_EQ(d.kind, Kind::TypeI);
}

TEST(Classify, Fix2SideA) {
    auto a = fixtures::fix2();
    for (auto& x : enumerate_extensions(a)) {
        if (!L(rel(x.tree), "a", "b", "e")) continue;
        auto d = classify(a, x.tree, name_embedding(a, x.tree));
        EXPECT_EQ(d.kind, Kind::TypeIIb);
        std::string side = d.choice == Choice::SideU ? d.edgeU : d.edgeV;
        EXPECT_EQ(side, "a");
    }
}

TEST(Classify, RoundTripOfIIa) {
    auto a = fixtures::fix5();
    for (auto& x : all_extensions(a, "q")) {
        if (x.descriptor.kind != Kind::TypeIIa) continue;
        auto d = classify(a, x.tree, name_embedding(a, x.tree));
        EXPECT_EQ(d.kind, Kind::TypeIIa);
        EXPECT_EQ(d.ram, x.descriptor.ram);
    }
}

TEST(Classify, RenamedExtension) {
    auto a = fixtures::fix2();
    auto x = enumerate_extensions(a)[1].tree;
    auto renamed = rename_elements(x, {{"a", "p"}, {"b", "q"}, {"e", "a"}});
    // a -> p, b -> q in the renamed domain {a, p, q}
    Embedding emb = verify_embedding(a, renamed, {1, 2});
    ASSERT_TRUE(emb.verified);
    auto d = classify(a, renamed, emb);
    auto back = rename_elements(apply_extension(a, d), {{d.newElement, "e"}});
    EXPECT_TRUE(same_relations(rel(back), rel(x)));
}

TEST(Peel, TrivialCases) {
    auto e = fixtures::fix5();
    EXPECT_TRUE(peel(e, {0, 1, 2, 3, 4}).empty());
    auto one = peel(e, ids(e, {"x", "y", "z", "w"}));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(e.domain()[one[0]], "p");
}

TEST(Peel, Fix5FromXYZ) {
    auto e = fixtures::fix5();
    auto base = ids(e, {"x", "y", "z"});
    auto order = peel(e, base);
    ASSERT_EQ(order.size(), 2u);
    std::vector<int> cur = base;
    for (int x : order) {
        cur.push_back(x);
        auto s = cur;
        std::sort(s.begin(), s.end());
        EXPECT_TRUE(is_member_of_D(realize_on(e, s)).member);
    }
}

TEST(Peel, RejectsNonMemberBase) {
    auto e = fixtures::fix5();
    EXPECT_THROW(peel(e, ids(e, {"p", "w", "y", "z"})), ArgumentError);
}

TEST(Amalgam, TypeIPlusTypeIOnFix1) {
    auto a = fixtures::fix1();
    auto e1 = apply_extension(a, ExtensionDescriptor::type_i("e1"));
    auto e2 = apply_extension(a, ExtensionDescriptor::type_i("e2"));
    auto m = amalgamate_one_point(a, e1, name_embedding(a, e1), e2, name_embedding(a, e2));
    EXPECT_EQ(m.tree.domain_size(), 5);
    EXPECT_TRUE(m.g1.verified && m.g2.verified);
    // a chain of two new roots: e2 special at the bottom, e1 one level up
    const auto& R = m.tree.label[m.tree.root];
    ASSERT_EQ(R.ram_points().size(), 1u);
    int c = R.ram_points()[0];
    EXPECT_EQ(m.tree.element.at(R.special(c)), "e2");
    int up = m.tree.successor_at(m.tree.root, c);
    const auto& U = m.tree.label[up];
    int c2 = U.ram_points()[0];
    int sp = m.tree.g[up].at(U.special(c2));
    EXPECT_EQ(m.tree.element.at(sp), "e1");
}

TEST(Amalgam, DistinctEdgesGiveTwoNewRamPoints) {
    auto a = fixtures::fix1();
    auto e1 = apply_extension(a, ExtensionDescriptor::type_iib("e1", "r", "y", Choice::NewLeaf));
    auto e2 = apply_extension(a, ExtensionDescriptor::type_iib("e2", "r", "z", Choice::SideU));
    auto m = amalgamate_one_point(a, e1, name_embedding(a, e1), e2, name_embedding(a, e2));
    EXPECT_EQ(m.tree.label[m.tree.root].ram_points().size(), 3u);
    EXPECT_TRUE(check_amalgam(a, e1, name_embedding(a, e1), e2, name_embedding(a, e2), m).empty());
}

TEST(Amalgam, IsomorphicExtensionsStayDistinct) {
    auto a = fixtures::fix2();
    for (auto& x : enumerate_extensions(a)) {
        auto f = name_embedding(a, x.tree);
        auto m = amalgamate_one_point(a, x.tree, f, x.tree, f);
        EXPECT_EQ(m.tree.domain_size(), 4);
        EXPECT_NE(m.g1.elementMap, m.g2.elementMap);
    }
}

// Every pair of one-point extensions of small bases amalgamates.
TEST(Amalgam, ExhaustiveSmallBases) {
    for (auto a : {fixtures::singleton(), fixtures::fix2(), fixtures::fix1()}) {
        auto xs = enumerate_extensions(a, "e");
        for (auto& x1 : xs)
            for (auto& x2 : xs) {
                auto f1 = name_embedding(a, x1.tree), f2 = name_embedding(a, x2.tree);
                Amalgam m;
                ASSERT_NO_THROW(m = amalgamate_one_point(a, x1.tree, f1, x2.tree, f2))
                    << x1.descriptor.to_string() << " + " << x2.descriptor.to_string();
                EXPECT_TRUE(check_amalgam(a, x1.tree, f1, x2.tree, f2, m).empty());
            }
    }
}

TEST(Amalgam, SameRamRecursion) {
    auto a = fixtures::fix5();
    std::vector<Extension> at;
    for (auto& x : all_extensions(a, "e"))
        if (x.descriptor.kind == Kind::TypeIIa && x.descriptor.ram == "r") at.push_back(x);
    ASSERT_GE(at.size(), 2u);
    for (auto& x1 : at)
        for (auto& x2 : at) {
            auto f1 = name_embedding(a, x1.tree), f2 = name_embedding(a, x2.tree);
            auto m = amalgamate_one_point(a, x1.tree, f1, x2.tree, f2);
            EXPECT_TRUE(check_amalgam(a, x1.tree, f1, x2.tree, f2, m).empty());
        }
}

TEST(Amalgam, GeneralFix1IntoFix5) {
    auto a = fixtures::fix1();
    auto e5 = fixtures::fix5();
    // x, y, z in fix5 realize fix1's relations
    auto f1 = verify_embedding(a, e5, ids(e5, {"x", "y", "z"}));
    ASSERT_TRUE(f1.verified);
    auto e2 = apply_extension(a, ExtensionDescriptor::type_i("e"));
    auto f2 = name_embedding(a, e2);
    auto m = amalgamate(a, e5, f1, e2, f2);
    EXPECT_EQ(m.tree.domain_size(), 6);
    EXPECT_TRUE(check_amalgam(a, e5, f1, e2, f2, m).empty());
}

TEST(Amalgam, GeneralWithEqualSides) {
    auto a = fixtures::fix2();
    auto f = name_embedding(a, a);
    auto e2 = enumerate_extensions(a)[0].tree;
    auto m = amalgamate(a, a, f, e2, name_embedding(a, e2));
    EXPECT_EQ(m.tree.domain_size(), 3);
    EXPECT_TRUE(m.g1.verified && m.g2.verified);
}

TEST(Amalgam, RandomTwoStepExtensions) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        auto a = random_member(rng, 3);
        auto grow = [&](const std::string& p) {
            auto t = a;
            for (int k = 0; k < 2; ++k) {
                auto xs = all_extensions(t, p + std::to_string(k));
                t = xs[rng() % xs.size()].tree;
            }
            return t;
        };
        auto e1 = grow("p"), e2 = grow("q");
        auto f1 = name_embedding(a, e1), f2 = name_embedding(a, e2);
        auto m = amalgamate(a, e1, f1, e2, f2);
        EXPECT_EQ(m.tree.domain_size(), 7);
        EXPECT_TRUE(check_amalgam(a, e1, f1, e2, f2, m).empty());
    }
}

TEST(Jep, Fix2Fix2) {
    auto j = joint_embed(fixtures::fix2(), fixtures::fix2());
    EXPECT_EQ(j.tree.domain_size(), 4);
    EXPECT_TRUE(is_member_of_D(rel(j.tree)).member);
    const auto& R = j.tree.label[j.tree.root];
    auto rams = R.ram_points();
    ASSERT_EQ(rams.size(), 2u);
    EXPECT_EQ(R.special(rams[0]), rams[1]);
    EXPECT_EQ(R.special(rams[1]), rams[0]);
}

TEST(Jep, Fix1Fix1) {
    auto a = fixtures::fix1();
    auto j = joint_embed(a, a);
    EXPECT_EQ(j.tree.domain_size(), 6);
    EXPECT_TRUE(j.fa.verified);
    EXPECT_TRUE(j.fb.verified);
    EXPECT_TRUE(is_member_of_D(rel(j.tree)).member);
    std::set<int> img(j.fa.elementMap.begin(), j.fa.elementMap.end());
    for (int i : j.fb.elementMap) EXPECT_FALSE(img.count(i));
}

TEST(Jep, SingletonSides) {
    for (auto b : {fixtures::singleton("b"), fixtures::fix1(), fixtures::fix5()}) {
        auto j = joint_embed(fixtures::singleton("a"), b);
        EXPECT_EQ(j.tree.domain_size(), 1 + b.domain_size());
        EXPECT_TRUE(validate(j.tree).ok()) << validate(j.tree).summary();
        EXPECT_TRUE(is_member_of_D(rel(j.tree)).member);
        EXPECT_TRUE(j.fa.verified && j.fb.verified);
    }
}

TEST(Jep, RandomPairs) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_member(rng, 1 + static_cast<int>(rng() % 4));
        auto b = random_member(rng, 1 + static_cast<int>(rng() % 4));
        auto j = joint_embed(a, b);
        EXPECT_TRUE(is_member_of_D(rel(j.tree)).member);
        EXPECT_TRUE(j.fa.verified && j.fb.verified);
    }
}

TEST(Hull, BoundValues) {
    EXPECT_EQ(hull_bound_f(3), 0);
    EXPECT_EQ(hull_bound_f(4), 2);
    EXPECT_EQ(hull_bound_f(5), 9);
    EXPECT_EQ(hull_bound_f(6), 40);
}

TEST(Hull, Fix5Examples) {
    auto e = fixtures::fix5();
    EXPECT_EQ(hull(e, ids(e, {"y", "z", "w"})), ids(e, {"y", "z", "w"}));
    EXPECT_EQ(hull(e, ids(e, {"y", "z", "w", "p"})), ids(e, {"x", "y", "z", "w", "p"}));
}

TEST(Hull, SkipsVerticesWithoutWitnesses) {
    // y, p and z sit in distinct non-special branches at the root; the
    // structure on them is already a member.
    auto e = fixtures::fix5();
    EXPECT_EQ(hull(e, ids(e, {"y", "p", "z"})), ids(e, {"p", "y", "z"}));
}

TEST(Hull, RejectsEmpty) { EXPECT_THROW(hull(fixtures::fix5(), {}), ArgumentError); }

TEST(Hull, RandomMembersAgainstBruteForce) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        auto e = random_member(rng, 6);
        HullContext ctx(e);
        for (int mask = 1; mask < 64; ++mask) {
            std::vector<int> a;
            for (int i = 0; i < 6; ++i)
                if (mask >> i & 1) a.push_back(i);
            if (a.size() > 4) continue;
            auto f = ctx.hull(a);
            EXPECT_TRUE(std::includes(f.begin(), f.end(), a.begin(), a.end()));
            EXPECT_TRUE(is_member_of_D(realize_on(e, f)).member);
            EXPECT_LE(static_cast<long long>(f.size()), static_cast<long long>(a.size()) + hull_bound_f(a.size()));
            EXPECT_LE(minimal_hull(e, a).size(), f.size());
        }
    }
}
