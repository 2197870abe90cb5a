#include "treeds/fraisse.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "treeds/corpus.hpp"
#include "treeds/parallel.hpp"
#include "treeds/reconstruct.hpp"
#include "treeds/relations.hpp"

namespace treeds {

// ===========================================================================
// small type codes
// ===========================================================================

namespace {

constexpr int kMaxCoded = 7;

// Tuples of positions ordered by their largest position, so that the code of
// an ordering prefix only depends on the elements placed so far.
struct Layout {
    std::vector<std::vector<std::array<int, 3>>> triples;  // by max position
    std::vector<std::vector<std::array<int, 4>>> quads;
};

const Layout& layout() {
    static const Layout l = [] {
        Layout out;
        out.triples.resize(kMaxCoded);
        out.quads.resize(kMaxCoded);
        for (int m = 0; m < kMaxCoded; ++m) {
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) out.triples[m].push_back({i, j, m});
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    for (int k = j + 1; k < m; ++k) out.quads[m].push_back({i, j, k, m});
        }
        return out;
    }();
    return l;
}

// Canonical code of a grouped structure restricted to at most kMaxCoded
// elements. Per ordering the code lists, by largest position, the apex and
// witness label of every triple, the split and witness label of every
// quadruple, and the present bits of every witness seen so far. Witness labels
// are numbered by first appearance, so the code is complete for induced
// substructures and not only for members.
class SmallCoder {
public:
    SmallCoder(const LStructure& ls, const std::vector<int>& elems) : s_(static_cast<int>(elems.size())) {
        apex_.assign(1 << s_, -1);
        tgroup_.assign(1 << s_, -1);
        qgroup_.assign(1 << s_, -1);
        partner_.assign((1 << s_) * s_, -1);
        std::vector<int> seen;
        auto group = [&](int g) {
            for (size_t i = 0; i < seen.size(); ++i)
                if (seen[i] == g) return static_cast<int>(i);
            seen.push_back(g);
            uint64_t m = 0;
            for (int i = 0; i < s_; ++i)
                if ((ls.present(g) >> elems[i]) & 1u) m |= uint64_t{1} << i;
            present_.push_back(m);
            return static_cast<int>(seen.size()) - 1;
        };
        for (int a = 0; a < s_; ++a)
            for (int b = a + 1; b < s_; ++b)
                for (int c = b + 1; c < s_; ++c) {
                    int x = elems[a], y = elems[b], z = elems[c];
                    int m = (1 << a) | (1 << b) | (1 << c);
                    if (ls.L(x, y, z)) apex_[m] = a, tgroup_[m] = group(ls.l_group(x, y, z));
                    else if (ls.L(y, x, z)) apex_[m] = b, tgroup_[m] = group(ls.l_group(y, x, z));
                    else if (ls.L(z, x, y)) apex_[m] = c, tgroup_[m] = group(ls.l_group(z, x, y));
                    for (int d = c + 1; d < s_; ++d) {
                        int w = elems[d];
                        int mq = m | (1 << d);
                        auto pair = [&](int p, int q, int r, int t, int g) {
                            partner_[mq * s_ + p] = q;
                            partner_[mq * s_ + q] = p;
                            partner_[mq * s_ + r] = t;
                            partner_[mq * s_ + t] = r;
                            qgroup_[mq] = group(g);
                        };
                        if (ls.S(x, y, z, w)) pair(a, b, c, d, ls.s_group(x, y, z, w));
                        else if (ls.S(x, z, y, w)) pair(a, c, b, d, ls.s_group(x, z, y, w));
                        else if (ls.S(x, w, y, z)) pair(a, d, b, c, ls.s_group(x, w, y, z));
                    }
                }
    }

    // blocks: local indices; the ordering keeps every block in place.
    std::string best(const std::vector<std::vector<int>>& blocks) {
        blockOf_.clear();
        for (size_t b = 0; b < blocks.size(); ++b)
            for (size_t i = 0; i < blocks[b].size(); ++i) blockOf_.push_back(static_cast<int>(b));
        blocks_ = &blocks;
        used_.assign(s_, 0);
        order_.assign(s_, -1);
        label_.assign(present_.size(), -1);
        labelled_.clear();
        cur_.clear();
        best_.clear();
        haveBest_ = false;
        dfs(0, false);
        std::string key = "s";
        for (auto& b : blocks) key += std::to_string(b.size()) + ",";
        return key + "|" + text(best_);
    }

    // An ordering attaining best(); valid after best().
    const std::vector<int>& best_order() const { return bestOrder_; }

    // Code of the local order 0, 1, ..., s-1 with every element fixed.
    std::string identity_code() {
        order_.resize(s_);
        for (int i = 0; i < s_; ++i) order_[i] = i;
        label_.assign(present_.size(), -1);
        labelled_.clear();
        cur_.clear();
        for (int m = 0; m < s_; ++m) emit(m);
        return "o" + std::to_string(s_) + "|" + text(cur_);
    }

private:
    static std::string text(const std::vector<char>& code) {
        std::string out;
        for (char c : code) out += static_cast<char>('0' + c);
        return out;
    }

    char label_of(int g) {
        if (g < 0) return 0;
        if (label_[g] < 0) {
            label_[g] = static_cast<int>(labelled_.size());
            labelled_.push_back(g);
        }
        return static_cast<char>(1 + label_[g]);
    }

    // Appends the symbols of all tuples whose largest position is m, then the
    // present bits: position m for older witnesses, positions 0..m for new ones.
    void emit(int m) {
        const auto& L = layout();
        size_t older = labelled_.size();
        for (auto& t : L.triples[m]) {
            int a = order_[t[0]], b = order_[t[1]], c = order_[t[2]];
            int mask = (1 << a) | (1 << b) | (1 << c);
            int x = apex_[mask];
            cur_.push_back(x == a ? 0 : x == b ? 1 : x == c ? 2 : 3);
            cur_.push_back(label_of(tgroup_[mask]));
        }
        for (auto& q : L.quads[m]) {
            int a = order_[q[0]], b = order_[q[1]], c = order_[q[2]], d = order_[q[3]];
            int mask = (1 << a) | (1 << b) | (1 << c) | (1 << d);
            int p = partner_[mask * s_ + a];
            cur_.push_back(p < 0 ? 0 : p == b ? 1 : p == c ? 2 : 3);
            cur_.push_back(label_of(qgroup_[mask]));
        }
        for (size_t i = 0; i < labelled_.size(); ++i) {
            uint64_t pr = present_[labelled_[i]];
            if (i < older) {
                cur_.push_back(static_cast<char>((pr >> order_[m]) & 1u));
            } else {
                for (int j = 0; j <= m; ++j) cur_.push_back(static_cast<char>((pr >> order_[j]) & 1u));
            }
        }
    }

    // `less`: the current prefix is already smaller than best_.
    void dfs(int m, bool less) {
        if (m == s_) {
            if (!haveBest_ || less) {
                best_ = cur_;
                bestOrder_ = order_;
                haveBest_ = true;
                ++updates_;
            }
            return;
        }
        for (int x : (*blocks_)[blockOf_[m]]) {
            if (used_[x]) continue;
            size_t mark = cur_.size();
            size_t labels = labelled_.size();
            used_[x] = 1;
            order_[m] = x;
            emit(m);
            bool l = less;
            bool prune = false;
            if (haveBest_ && !less)
                for (size_t i = mark; i < cur_.size(); ++i) {
                    if (i >= best_.size() || cur_[i] > best_[i]) {
                        prune = true;
                        break;
                    }
                    if (cur_[i] < best_[i]) {
                        l = true;
                        break;
                    }
                }
            long before = updates_;
            if (!prune) dfs(m + 1, l);
            cur_.resize(mark);
            while (labelled_.size() > labels) {
                label_[labelled_.back()] = -1;
                labelled_.pop_back();
            }
            used_[x] = 0;
            // a new best_ shares this prefix, so later siblings compare against it
            if (updates_ != before) less = false;
        }
    }

    int s_;
    std::vector<int> apex_, tgroup_, qgroup_, partner_;
    std::vector<uint64_t> present_;
    std::vector<int> blockOf_;
    const std::vector<std::vector<int>>* blocks_ = nullptr;
    std::vector<char> used_;
    std::vector<int> order_;
    std::vector<int> label_, labelled_;
    std::vector<char> cur_, best_;
    std::vector<int> bestOrder_;
    bool haveBest_ = false;
    long updates_ = 0;
};

std::string fallback_key(const LStructure& ls, const std::vector<int>& elems, const std::vector<int>& blocks) {
    std::vector<int> colors;
    for (size_t b = 0; b < blocks.size(); ++b) colors.insert(colors.end(), blocks[b], static_cast<int>(b));
    std::string key = "c";
    for (int b : blocks) key += std::to_string(b) + ",";
    return key + "|" + canonical_key(ls.restrict(elems), colors);
}

}  // namespace

std::string type_key(const LStructure& ls, const std::vector<int>& elems, const std::vector<int>& blocks) {
    int total = 0;
    for (int b : blocks) {
        if (b < 0) throw ArgumentError("negative block size");
        total += b;
    }
    if (total != static_cast<int>(elems.size())) throw ArgumentError("block sizes do not add up to the element count");
    if (total > kMaxCoded || ls.mode() != LStructure::Mode::Grouped) return fallback_key(ls, elems, blocks);
    SmallCoder coder(ls, elems);
    std::vector<std::vector<int>> bl;
    int next = 0;
    for (int b : blocks) {
        bl.emplace_back();
        for (int i = 0; i < b; ++i) bl.back().push_back(next++);
    }
    return coder.best(bl);
}

// ===========================================================================
// realized types
// ===========================================================================

namespace {

void visit(const LStructure& ls, const std::vector<int>& sub, int maxBase, RealizedTypes& out) {
    int s = static_cast<int>(sub.size());
    SmallCoder coder(ls, sub);
    if (s <= maxBase) {
        std::vector<int> all(s);
        for (int i = 0; i < s; ++i) all[i] = i;
        out.bases.insert(coder.best({all}));
    }
    if (s >= 2)
        for (int x = 0; x < s; ++x) {
            std::vector<int> rest;
            for (int i = 0; i < s; ++i)
                if (i != x) rest.push_back(i);
            out.pairs.insert(coder.best({{x}, rest}));
        }
}

// Types of the subsets of size 1..maxBase+1 that contain `must`, or of all
// subsets when must < 0.
RealizedTypes scan(const LStructure& ls, int maxBase, int jobs, int must) {
    if (maxBase + 1 > kMaxCoded) throw ArgumentError("type scans are limited to bases of at most 6 elements");
    int n = ls.size();
    std::vector<int> pool;
    for (int i = 0; i < n; ++i)
        if (i != must) pool.push_back(i);
    int extra = must >= 0 ? 1 : 0;
    RealizedTypes out;
    if (must >= 0) visit(ls, {must}, maxBase, out);
    std::mutex m;
    parallel_for(pool.size(), jobs, [&](size_t first) {
        RealizedTypes local;
        std::vector<size_t> chosen{first};
        std::function<void()> rec = [&] {
            std::vector<int> sub;
            for (size_t c : chosen) sub.push_back(pool[c]);
            if (must >= 0) sub.insert(std::upper_bound(sub.begin(), sub.end(), must), must);
            visit(ls, sub, maxBase, local);
            if (static_cast<int>(chosen.size()) + extra == maxBase + 1) return;
            for (size_t y = chosen.back() + 1; y < pool.size(); ++y) {
                chosen.push_back(y);
                rec();
                chosen.pop_back();
            }
        };
        rec();
        std::lock_guard<std::mutex> lk(m);
        out.bases.insert(local.bases.begin(), local.bases.end());
        out.pairs.insert(local.pairs.begin(), local.pairs.end());
    });
    return out;
}

}  // namespace

RealizedTypes realized_types(const LStructure& ls, int maxBase, int jobs) {
    if (maxBase < 1) throw ArgumentError("maxBase must be at least 1");
    return scan(ls, maxBase, jobs, -1);
}

std::vector<PairType> pair_types(int maxBase, int jobs) {
    if (maxBase < 1) throw ArgumentError("maxBase must be at least 1");
    if (maxBase + 1 > kMaxCoded) throw ArgumentError("pair types are limited to bases of at most 6 elements");
    Corpus corpus = build_corpus(maxBase + 1, jobs);
    std::vector<PairType> out;
    std::set<std::string> seen;
    for (int s = 2; s <= maxBase + 1; ++s)
        for (auto& e : corpus.bySize[s]) {
            auto ls = realize(e).ls;
            auto dom = e.domain();
            for (int x = 0; x < s; ++x) {
                std::vector<int> rest;
                for (int i = 0; i < s; ++i)
                    if (i != x) rest.push_back(i);
                std::vector<int> elems{x};
                elems.insert(elems.end(), rest.begin(), rest.end());
                std::string key = type_key(ls, elems, {1, s - 1});
                if (seen.count(key)) continue;
                // deletions need not stay in the class
                auto sub = ls.restrict(rest);
                auto mem = is_member_of_D(sub);
                if (mem.member != corpus.contains_key(canonical_key(sub)))
                    throw InconsistencyError("membership and corpus disagree on a " + std::to_string(s - 1) +
                                             "-element structure");
                if (!mem.member) continue;
                auto d = classify(*mem.tree, e, name_embedding(*mem.tree, e));
                PairType p;
                p.baseSize = s - 1;
                p.baseKey = type_key(ls, rest, {s - 1});
                p.key = key;
                p.kind = d.kind;
                p.base = *mem.tree;
                p.extension = e;
                p.newElement = dom[x];
                std::string over;
                for (int i : rest) over += (over.empty() ? "" : ",") + dom[i];
                p.summary = "over {" + over + "}: " + d.to_string();
                seen.insert(key);
                out.push_back(std::move(p));
            }
        }
    std::stable_sort(out.begin(), out.end(), [](const PairType& a, const PairType& b) {
        return std::tie(a.baseSize, a.kind, a.key) < std::tie(b.baseSize, b.kind, b.key);
    });
    return out;
}

// ===========================================================================
// chains
// ===========================================================================

namespace {

std::string fresh_element(const TreeOfDSets& t) {
    auto dom = t.domain();
    std::set<std::string> taken(dom.begin(), dom.end());
    for (size_t k = dom.size();; ++k) {
        std::string name = "x" + std::to_string(k);
        if (!taken.count(name)) return name;
    }
}

std::vector<int> indices_of(const TreeOfDSets& t, const std::vector<std::string>& names) {
    auto dom = t.domain();
    std::vector<int> out;
    for (auto& n : names) {
        auto it = std::lower_bound(dom.begin(), dom.end(), n);
        if (it == dom.end() || *it != n) throw ArgumentError("element '" + n + "' missing");
        out.push_back(static_cast<int>(it - dom.begin()));
    }
    return out;
}

std::vector<int> iota_of(size_t n) {
    std::vector<int> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return v;
}

// One extension of a representative base, up to isomorphism over the base.
struct LabelledExt {
    std::string code;  // identity code of (new point, base in canonical order)
    const PairType* type = nullptr;
    TreeOfDSets tree;
    std::string newElement;
    std::vector<std::string> baseOrder;  // representative base, canonical order
};

struct Catalogue {
    std::vector<PairType> pairs;
    std::map<std::string, std::vector<LabelledExt>> byBase;
};

Catalogue catalogue(int maxBase, int jobs) {
    Catalogue c;
    c.pairs = pair_types(maxBase, jobs);
    std::map<std::string, const PairType*> byKey;
    for (auto& p : c.pairs) byKey[p.key] = &p;
    for (auto& p : c.pairs) {
        if (c.byBase.count(p.baseKey)) continue;
        auto& exts = c.byBase[p.baseKey];
        const TreeOfDSets& a = p.base;
        auto la = realize(a).ls;
        SmallCoder coder(la, iota_of(la.size()));
        coder.best({iota_of(la.size())});
        auto dom = a.domain();
        std::vector<std::string> order;
        for (int i : coder.best_order()) order.push_back(dom[i]);
        std::string name = fresh_element(a);
        for (auto& x : enumerate_extensions(a, name)) {
            std::vector<std::string> names{name};
            names.insert(names.end(), order.begin(), order.end());
            auto le = realize_on(x.tree, indices_of(x.tree, names));
            auto local = iota_of(names.size());
            auto it = byKey.find(type_key(le, local, {1, p.baseSize}));
            if (it == byKey.end()) throw InconsistencyError("an extension type is missing from the catalogue");
            LabelledExt e;
            e.code = SmallCoder(le, local).identity_code();
            e.type = it->second;
            e.tree = std::move(x.tree);
            e.newElement = name;
            e.baseOrder = order;
            exts.push_back(std::move(e));
        }
    }
    return c;
}

// A subset inducing a member, in canonical order, with the extensions of its
// type and whether some stage point realizes each of them over it.
struct Copy {
    std::vector<int> order;
    const std::vector<LabelledExt>* exts = nullptr;
    std::vector<char> realized;
};

std::vector<Copy> survey(const LStructure& ls, const Catalogue& c, int maxBase, int jobs) {
    int n = ls.size();
    std::vector<std::vector<Copy>> parts(n);
    parallel_for(static_cast<size_t>(n), jobs, [&](size_t first) {
        std::vector<int> sub{static_cast<int>(first)};
        std::function<void()> rec = [&] {
            SmallCoder coder(ls, sub);
            auto all = iota_of(sub.size());
            auto it = c.byBase.find(coder.best({all}));
            if (it != c.byBase.end()) {
                Copy cp;
                for (int i : coder.best_order()) cp.order.push_back(sub[i]);
                cp.exts = &it->second;
                std::set<std::string> codes;
                std::vector<int> elems{0};
                elems.insert(elems.end(), cp.order.begin(), cp.order.end());
                auto local = iota_of(elems.size());
                for (int x = 0; x < n; ++x) {
                    if (std::find(sub.begin(), sub.end(), x) != sub.end()) continue;
                    elems[0] = x;
                    codes.insert(SmallCoder(ls, elems).identity_code());
                }
                for (auto& e : it->second) cp.realized.push_back(codes.count(e.code) ? 1 : 0);
                parts[first].push_back(std::move(cp));
            }
            if (static_cast<int>(sub.size()) == maxBase) return;
            for (int y = sub.back() + 1; y < n; ++y) {
                sub.push_back(y);
                rec();
                sub.pop_back();
            }
        };
        rec();
    });
    std::vector<Copy> out;
    for (auto& p : parts)
        for (auto& cp : p) out.push_back(std::move(cp));
    return out;
}

ChainTask task_of(const PairType& p) { return {p.baseSize, p.kind, p.key, p.summary}; }

// Does some point of `points` extend `base` (names, canonical order) as `code`?
bool realized_by(const LStructure& ls, const std::vector<std::string>& base, const std::vector<std::string>& points,
                 const std::string& code) {
    std::vector<int> elems{0};
    for (auto& b : base) elems.push_back(ls.index_of(b));
    for (auto& p : points) {
        elems[0] = ls.index_of(p);
        if (SmallCoder(ls, elems).identity_code() == code) return true;
    }
    return false;
}

// Extends `work` by one point realizing `ext` over `base`.
ProvenanceEntry realize_task(TreeOfDSets& work, const LabelledExt& ext, const std::vector<std::string>& base) {
    std::string name = fresh_element(work);
    std::vector<std::string> names{name};
    names.insert(names.end(), base.begin(), base.end());
    for (auto& cand : all_extensions(work, name)) {
        auto sub = realize_on(cand.tree, indices_of(cand.tree, names));
        if (SmallCoder(sub, iota_of(names.size())).identity_code() != ext.code) continue;
        std::map<std::string, std::string> to{{ext.newElement, name}};
        for (size_t i = 0; i < base.size(); ++i) to[ext.baseOrder[i]] = base[i];
        std::vector<std::string> target;
        for (auto& x : ext.tree.domain()) target.push_back(to.at(x));
        ProvenanceEntry entry;
        entry.task = task_of(*ext.type);
        entry.base = base;
        entry.newElement = name;
        entry.descriptor = cand.descriptor;
        entry.extension = ext.tree;
        entry.fromExtension = verify_embedding(ext.tree, cand.tree, indices_of(cand.tree, target));
        if (!entry.fromExtension.verified) throw InconsistencyError("extension does not embed into the new stage");
        work = std::move(cand.tree);
        return entry;
    }
    throw InconsistencyError("no one-point extension realizes " + ext.type->summary);
}

}  // namespace

std::vector<ChainStage> build_chain(const ChainConfig& cfg) {
    auto report = validate(cfg.seed);
    if (!report.ok()) throw ArgumentError("seed is not a valid tree of D-sets: " + report.summary());
    auto seedMember = is_member_of_D(realize(cfg.seed).ls);
    if (!seedMember.member) throw ArgumentError("seed is not a member: " + seedMember.refutation);
    if (cfg.rounds < 0) throw ArgumentError("rounds must be nonnegative");
    if (cfg.maxSize < cfg.seed.domain_size()) throw ArgumentError("maxSize is smaller than the seed");
    if (cfg.maxSize > LStructure::kMaxGrouped) throw ArgumentError("maxSize is limited to 64");
    if (cfg.taskBound < 1 || cfg.taskBound + 1 > kMaxCoded) throw ArgumentError("taskBound must be between 1 and 6");

    std::vector<ChainStage> stages(1);
    stages[0].structure = cfg.seed;
    if (cfg.rounds == 0) return stages;

    auto cat = catalogue(cfg.taskBound, cfg.jobs);
    std::mt19937_64 rng(cfg.rngSeed);
    TreeOfDSets work = cfg.seed;

    struct Task {
        const LabelledExt* ext;
        std::vector<std::string> base;
    };
    auto rank = [](const Task& t) { return std::tie(t.ext->type->baseSize, t.ext->type->kind, t.ext->type->key); };

    for (int round = 1; round <= cfg.rounds; ++round) {
        const ChainStage& prev = stages.back();
        ChainStage stage;
        stage.stageIndex = round;
        if (round > 1 && prev.provenance.empty()) {
            // nothing changed, so the task list is the same as last round
            stage.deferred = prev.deferred;
        } else {
            auto ls = realize(work).ls;
            auto dom = work.domain();
            std::vector<Task> tasks;
            for (auto& cp : survey(ls, cat, cfg.taskBound, cfg.jobs)) {
                std::vector<std::string> base;
                for (int i : cp.order) base.push_back(dom[i]);
                for (size_t i = 0; i < cp.exts->size(); ++i)
                    if (!cp.realized[i]) tasks.push_back({&(*cp.exts)[i], base});
            }
            std::stable_sort(tasks.begin(), tasks.end(), [&](const Task& a, const Task& b) { return rank(a) < rank(b); });
            for (size_t i = 0; i < tasks.size();) {
                size_t j = i;
                while (j < tasks.size() && rank(tasks[j]) == rank(tasks[i])) ++j;
                std::shuffle(tasks.begin() + static_cast<long>(i), tasks.begin() + static_cast<long>(j), rng);
                i = j;
            }

            std::vector<std::string> added;
            std::map<std::string, size_t> open;
            for (auto& t : tasks) {
                if (!added.empty() && realized_by(ls, t.base, added, t.ext->code)) continue;
                if (work.domain_size() >= cfg.maxSize) {
                    ++open[t.ext->type->key];
                    continue;
                }
                stage.provenance.push_back(realize_task(work, *t.ext, t.base));
                added.push_back(stage.provenance.back().newElement);
                ls = realize(work).ls;
            }
            for (auto& p : cat.pairs)
                if (open.count(p.key)) stage.deferred.push_back({task_of(p), open[p.key]});
            if (!stage.provenance.empty()) {
                auto mem = is_member_of_D(ls);
                if (!mem.member)
                    throw InconsistencyError("stage " + std::to_string(round) + " left the class: " + mem.refutation);
            }
        }
        stage.embeddingFromPrevious = name_embedding(prev.structure, work);
        if (!stage.embeddingFromPrevious.verified) throw InconsistencyError("stage does not extend its predecessor");
        stage.structure = work;
        stages.push_back(std::move(stage));
    }
    return stages;
}

// ===========================================================================
// reports
// ===========================================================================

RichnessReport richness_audit(const ChainStage& stage, int k, int jobs) {
    if (k < 1) throw ArgumentError("k must be at least 1");
    auto cat = catalogue(k, jobs);
    auto ls = realize(stage.structure).ls;
    auto realized = realized_types(ls, k, jobs);
    RichnessReport r;
    r.k = k;
    std::vector<std::set<std::string>> bases(k + 1);
    for (auto& p : cat.pairs) bases[p.baseSize].insert(p.baseKey);
    for (int s = 1; s <= k; ++s) {
        int embedded = 0;
        for (auto& b : bases[s]) embedded += realized.bases.count(b) ? 1 : 0;
        r.typesBySize.emplace_back(static_cast<int>(bases[s].size()), embedded);
        r.typesTotal += static_cast<int>(bases[s].size());
        r.typesEmbedded += embedded;
    }
    using Slot = std::tuple<int, std::string, ExtensionDescriptor::Kind>;
    std::map<Slot, RichnessEntry> entries;
    for (auto& p : cat.pairs) {
        if (!realized.bases.count(p.baseKey)) continue;
        auto& e = entries[{p.baseSize, p.baseKey, p.kind}];
        e.baseSize = p.baseSize;
        e.baseKey = p.baseKey;
        e.kind = p.kind;
        ++e.total;
        if (realized.pairs.count(p.key)) ++e.realized;
    }
    for (auto& cp : survey(ls, cat, k, jobs))
        for (size_t i = 0; i < cp.exts->size(); ++i) {
            const PairType* p = (*cp.exts)[i].type;
            auto& e = entries.at({p->baseSize, p->baseKey, p->kind});
            ++e.copyPairs;
            e.copyPairsRealized += cp.realized[i];
        }
    for (auto& [_, e] : entries) {
        r.extensionsTotal += e.total;
        r.extensionsRealized += e.realized;
        r.entries.push_back(e);
    }
    return r;
}

size_t orbit_signature(const ChainStage& stage, int k, int jobs) {
    const TreeOfDSets& t = stage.structure;
    int n = t.domain_size();
    if (k < 1 || k > n) throw ArgumentError("k must be between 1 and the domain size");
    auto ls = realize(t).ls;
    HullContext ctx(t);
    std::set<std::string> types;
    std::mutex m;
    parallel_for(static_cast<size_t>(n), jobs, [&](size_t first) {
        std::set<std::string> local;
        std::vector<int> sub{static_cast<int>(first)};
        std::function<void()> rec = [&] {
            if (static_cast<int>(sub.size()) == k) {
                auto f = ctx.hull(sub);
                std::vector<int> elems = sub;
                for (int x : f)
                    if (!std::binary_search(sub.begin(), sub.end(), x)) elems.push_back(x);
                local.insert(type_key(ls, elems, {k, static_cast<int>(elems.size()) - k}));
                return;
            }
            for (int y = sub.back() + 1; y < n; ++y) {
                sub.push_back(y);
                rec();
                sub.pop_back();
            }
        };
        rec();
        std::lock_guard<std::mutex> lk(m);
        types.insert(local.begin(), local.end());
    });
    return types.size();
}

}  // namespace treeds
