// Acceptance run: one PASS/FAIL line per criterion. All checks are exact
// (tolerance 0); the only numeric limits are the runtime budgets printed with
// each line. Exit code 0 when every criterion passes.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "treeds/amalgam.hpp"
#include "treeds/corpus.hpp"
#include "treeds/fraisse.hpp"
#include "treeds/io.hpp"
#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

using namespace treeds;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string golden_dir = TREEDS_GOLDEN_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Collects the first few counterexamples of a criterion verbatim.
struct Outcome {
    size_t checked = 0;
    size_t failures = 0;
    std::vector<std::string> examples;
    std::string note;
    void fail(const std::string& what) {
        ++failures;
        if (examples.size() < 5) examples.push_back(what);
    }
};

int failed = 0;

void report(int id, const std::string& title, const Outcome& o) {
    bool ok = o.failures == 0;
    if (!ok) ++failed;
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << title << "  [checked " << o.checked
              << ", failures " << o.failures;
    if (!o.note.empty()) std::cout << "; " << o.note;
    std::cout << "]\n";
    for (auto& e : o.examples) std::cout << "    counterexample: " << e << "\n";
    std::cout.flush();
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int x = from; x < n; ++x) {
            cur.push_back(x);
            rec(x + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::string names_of(const TreeOfDSets& t, const std::vector<int>& idx) {
    auto dom = t.domain();
    std::string s;
    for (int i : idx) s += (s.empty() ? "" : ",") + dom[i];
    return "{" + s + "}";
}

std::vector<TreeOfDSets> corpus_members(const Corpus& c) {
    std::vector<TreeOfDSets> all;
    for (int n = 1; n <= c.maxSize; ++n)
        for (auto& t : c.bySize[n]) all.push_back(t);
    return all;
}

// Explicit copy holding only L and S.
LStructure ls_reduct(const LStructure& ls) {
    int n = ls.size();
    LStructure r = LStructure::explicit_empty(ls.names());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (ls.L(x, y, z)) r.put_L(x, y, z);
                for (int w = 0; w < n; ++w)
                    if (ls.S(x, y, z, w)) r.put_S(x, y, z, w);
            }
    return r;
}

TreeOfDSets random_member(std::mt19937_64& rng, int size) {
    TreeOfDSets t = fixtures::singleton("a0");
    for (int k = 1; k < size; ++k) {
        auto xs = all_extensions(t, "a" + std::to_string(k));
        t = xs[rng() % xs.size()].tree;
    }
    return t;
}

}  // namespace

int main() {
    std::cout << "acceptance run: exact checks (tolerance 0)\n";

    // 1 -------------------------------------------------------------------
    auto t0 = Clock::now();
    Corpus corpus = build_corpus(5);
    double corpusSecs = seconds_since(t0);
    {
        Outcome o;
        Json g = Json::parse(slurp(golden_dir + "/corpus5.json"));
        std::ostringstream counts;
        auto direct = direct_enumeration_keys(5);
        for (int n = 1; n <= 5; ++n) {
            ++o.checked;
            size_t frozen = g["counts"][std::to_string(n)].get<size_t>();
            counts << (n > 1 ? " " : "") << n << ":" << corpus.count(n);
            if (corpus.count(n) != frozen)
                o.fail("size " + std::to_string(n) + ": " + std::to_string(corpus.count(n)) + " members, golden " +
                       std::to_string(frozen));
            std::set<std::string> mine(corpus.keys[n].begin(), corpus.keys[n].end());
            if (mine != direct[n]) o.fail("size " + std::to_string(n) + ": closure and direct enumeration differ");
        }
        double secs = seconds_since(t0);
        if (secs > 300) o.fail("runtime " + std::to_string(secs) + " s over 300 s");
        std::ostringstream note;
        note << "counts " << counts.str() << "; closure " << corpusSecs << " s, with oracle " << secs
             << " s, budget 300 s";
        o.note = note.str();
        report(1, "corpus up to size 5 equals direct enumeration and golden counts", o);
    }
    auto members = corpus_members(corpus);

    // 2 -------------------------------------------------------------------
    {
        Outcome o;
        for (auto& t : members) {
            ++o.checked;
            auto v = apex_violations(realize(t).ls);
            if (!v.empty()) o.fail(v.front());
        }
        report(2, "exactly one apex on every distinct triple", o);
    }

    // 3 -------------------------------------------------------------------
    {
        Outcome o;
        for (auto& t : members) {
            ++o.checked;
            if (!(root_d(realize(t).ls) == leaf_d_relation(t.label[t.root], t.domain_leaves())))
                o.fail("root D differs on " + serialize(t));
        }
        report(3, "root D from the relations equals the root label's leaf D", o);
    }

    // 4 -------------------------------------------------------------------
    {
        Outcome o;
        for (auto& t : members) {
            ++o.checked;
            LStructure full = realize(t).ls;
            std::string diff;
            if (!same_relations(derive_from_ls(ls_reduct(full)), full, &diff)) o.fail(diff);
        }
        report(4, "L', S', Q, R defined from L and S agree with the realization", o);
    }

    // 5 -------------------------------------------------------------------
    {
        Outcome o;
        auto t5 = Clock::now();
        for (int n = 1; n <= 4; ++n)
            for (auto& a : corpus.bySize[n]) {
                auto x1 = enumerate_extensions(a, "new1");
                auto x2 = enumerate_extensions(a, "new2");
                for (auto& e1 : x1)
                    for (auto& e2 : x2) {
                        ++o.checked;
                        try {
                            Embedding f1 = name_embedding(a, e1.tree), f2 = name_embedding(a, e2.tree);
                            Amalgam m = amalgamate_one_point(a, e1.tree, f1, e2.tree, f2);
                            auto problems = check_amalgam(a, e1.tree, f1, e2.tree, f2, m);
                            if (!problems.empty())
                                o.fail(e1.descriptor.to_string() + " + " + e2.descriptor.to_string() + ": " +
                                       problems.front());
                        } catch (const std::exception& ex) {
                            o.fail(e1.descriptor.to_string() + " + " + e2.descriptor.to_string() + ": " + ex.what());
                        }
                    }
            }
        double secs = seconds_since(t5);
        if (secs > 600) o.fail("runtime " + std::to_string(secs) + " s over 600 s");
        o.note = "pairs of one-point extensions over bases of size <= 4; " + std::to_string(secs) + " s, budget 600 s";
        report(5, "one-point amalgams exist, are members, and both embeddings verify and commute", o);
    }

    // 6 -------------------------------------------------------------------
    {
        Outcome o;
        size_t onePoint = 0, skipped = 0;
        for (auto& e : members) {
            int n = e.domain_size();
            auto dom = e.domain();
            for (int k = 1; k < n; ++k)
                for (auto& a : subsets_of_size(n, k)) {
                    Membership m = is_member_of_D(realize_on(e, a));
                    if (!m.member) {
                        ++skipped;
                        continue;
                    }
                    ++o.checked;
                    try {
                        auto order = peel(e, a);
                        if (static_cast<int>(order.size()) != n - k) {
                            o.fail("peel of " + names_of(e, a) + " is not a full chain");
                            continue;
                        }
                        std::vector<int> prefix = a;
                        for (int x : order) {
                            prefix.push_back(x);
                            std::sort(prefix.begin(), prefix.end());
                            if (!is_member_of_D(realize_on(e, prefix)).member)
                                o.fail("peel prefix " + names_of(e, prefix) + " is not a member");
                        }
                        if (k == n - 1) {
                            ++onePoint;
                            const TreeOfDSets& at = *m.tree;
                            ExtensionDescriptor d = classify(at, e, name_embedding(at, e));
                            TreeOfDSets rebuilt = apply_extension(at, d);
                            std::string diff;
                            if (rebuilt.domain() != dom || !same_relations(realize(rebuilt).ls, realize(e).ls, &diff))
                                o.fail("classify over " + names_of(e, a) + " gives " + d.to_string() +
                                       ", which does not rebuild E: " + diff);
                        }
                    } catch (const std::exception& ex) {
                        o.fail(names_of(e, a) + ": " + ex.what());
                    }
                }
        }
        o.note = std::to_string(onePoint) + " one-point pairs classified; " + std::to_string(skipped) +
                 " deletions not inducing members skipped";
        report(6, "classify rebuilds every one-point pair and peel finds full chains", o);
    }

    // 7 -------------------------------------------------------------------
    {
        Outcome o;
        std::vector<TreeOfDSets> sample = members;
        std::mt19937_64 rng(20261015);
        for (int i = 0; i < 200; ++i) sample.push_back(random_member(rng, 6 + i % 3));
        for (auto& t : sample) {
            ++o.checked;
            try {
                auto bad = check_roundtrip(t);
                if (!bad.empty()) o.fail(bad.front());
            } catch (const std::exception& ex) {
                o.fail(ex.what());
            }
        }
        o.note = std::to_string(members.size()) + " corpus members and 200 random members of sizes 6-8";
        report(7, "reconstruction matches the L-witnessing poset, E-partitions and direction relations", o);
    }

    // 8 -------------------------------------------------------------------
    {
        Outcome o;
        if (hull_bound_f(4) != 2 || hull_bound_f(5) != 9 || hull_bound_f(6) != 40)
            o.fail("f(4), f(5), f(6) = " + std::to_string(hull_bound_f(4)) + ", " + std::to_string(hull_bound_f(5)) +
                   ", " + std::to_string(hull_bound_f(6)));
        for (auto& e : members) {
            int n = e.domain_size();
            for (int k = 3; k <= std::min(4, n); ++k)
                for (auto& a : subsets_of_size(n, k)) {
                    ++o.checked;
                    auto h = hull(e, a);
                    if (!std::includes(h.begin(), h.end(), a.begin(), a.end()))
                        o.fail("hull of " + names_of(e, a) + " does not contain it");
                    if (!is_member_of_D(realize_on(e, h)).member)
                        o.fail("hull " + names_of(e, h) + " of " + names_of(e, a) + " is not a member");
                    if (static_cast<long long>(h.size()) > k + hull_bound_f(k))
                        o.fail("hull " + names_of(e, h) + " of " + names_of(e, a) + " exceeds the bound");
                    if (minimal_hull(e, a).size() > h.size())
                        o.fail("minimal hull of " + names_of(e, a) + " larger than the procedure's");
                }
        }
        o.note = "f(4)=2, f(5)=9, f(6)=40";
        report(8, "hulls induce members within |A| + f(|A|) and never beat the brute-force minimum", o);
    }

    // 9 -------------------------------------------------------------------
    {
        Outcome o;
        ChainConfig cfg;
        cfg.seed = fixtures::fix2();
        cfg.rounds = 8;
        cfg.maxSize = 48;
        cfg.taskBound = 4;
        cfg.rngSeed = 1;
        auto t9 = Clock::now();
        auto stages = build_chain(cfg);
        double chainSecs = seconds_since(t9);
        const ChainStage& last = stages.back();
        RichnessReport rich = richness_audit(last, 3);
        ++o.checked;
        if (!rich.full())
            o.fail("size <= 3 richness not full: types " + std::to_string(rich.typesEmbedded) + "/" +
                   std::to_string(rich.typesTotal) + ", extensions " + std::to_string(rich.extensionsRealized) + "/" +
                   std::to_string(rich.extensionsTotal));
        size_t o2 = orbit_signature(last, 2), o3 = orbit_signature(last, 3);
        o.checked += 2;
        if (o2 != 1) o.fail("k=2 signature " + std::to_string(o2));
        if (o3 != 1) o.fail("k=3 signature " + std::to_string(o3));
        std::vector<size_t> o4;
        size_t from = stages.size() >= 3 ? stages.size() - 3 : 0;
        for (size_t i = from; i < stages.size(); ++i) o4.push_back(orbit_signature(stages[i], 4));
        ++o.checked;
        if (o4.back() < 2) o.fail("k=4 signature " + std::to_string(o4.back()));
        ++o.checked;
        if (stages.size() < 3 || !std::all_of(o4.begin(), o4.end(), [&](size_t x) { return x == o4.back(); }))
            o.fail("k=4 signature not stable over the final 3 stages");
        double secs = seconds_since(t9);
        if (chainSecs > 300) o.fail("chain took " + std::to_string(chainSecs) + " s over 300 s");
        std::ostringstream note;
        note << "stage sizes";
        for (auto& s : stages) note << " " << s.structure.domain_size();
        note << "; k=2 " << o2 << ", k=3 " << o3 << ", k=4 final stages";
        for (auto x : o4) note << " " << x;
        note << "; chain " << chainSecs << " s (budget 300 s), with reports " << secs << " s";
        o.note = note.str();
        report(9, "chain from FIX2 is rich for size <= 3 with orbit signatures 1, 1, >= 2 (stable)", o);
    }

    // 10 ------------------------------------------------------------------
    {
        Outcome o;
        for (auto& t : members) {
            ++o.checked;
            try {
                std::string s = serialize(t);
                TreeOfDSets back = parse_tree(s);
                std::string diff;
                if (serialize(back) != s) o.fail("re-serialization differs for " + s);
                else if (!same_relations(realize(back).ls, realize(t).ls, &diff)) o.fail(diff);
            } catch (const std::exception& ex) {
                o.fail(ex.what());
            }
        }
        auto f5 = fixtures::fix5();
        std::vector<std::pair<std::string, std::string>> snaps{
            {"fix5.json", serialize(f5)},
            {"fix5_dsets.dot", render_dot(f5, DotView::DSets)},
            {"fix5_structureTree.dot", render_dot(f5, DotView::StructureTree)},
            {"fix5_combined.dot", render_dot(f5, DotView::Combined)}};
        std::vector<std::string> again{serialize(f5), render_dot(f5, DotView::DSets),
                                       render_dot(f5, DotView::StructureTree), render_dot(f5, DotView::Combined)};
        for (size_t i = 0; i < snaps.size(); ++i) {
            ++o.checked;
            if (snaps[i].second != slurp(golden_dir + "/" + snaps[i].first)) o.fail(snaps[i].first + " differs from golden");
            if (snaps[i].second != again[i]) o.fail(snaps[i].first + " differs between runs");
        }
        o.note = "corpus round-trips and 4 FIX5 snapshots";
        report(10, "serialize/parse round-trip is exact; FIX5 JSON and DOT snapshots are byte-identical", o);
    }

    std::cout << (failed == 0 ? "all criteria PASS" : std::to_string(failed) + " criteria FAIL") << "\n";
    return failed == 0 ? 0 : 1;
}
