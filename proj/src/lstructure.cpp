#include "treeds/lstructure.hpp"

#include <array>
#include <map>
#include <sstream>

#include "treeds/errors.hpp"

namespace treeds {

namespace {

using Quad = std::array<int, 4>;

std::array<Quad, 8> s_forms(int x, int y, int z, int w) {
    return {{{x, y, z, w}, {y, x, z, w}, {x, y, w, z}, {y, x, w, z},
             {z, w, x, y}, {w, z, x, y}, {z, w, y, x}, {w, z, y, x}}};
}

bool distinct(std::initializer_list<int> v) {
    for (auto i = v.begin(); i != v.end(); ++i)
        for (auto j = i + 1; j != v.end(); ++j)
            if (*i == *j) return false;
    return true;
}

}  // namespace

LStructure LStructure::grouped(std::vector<std::string> names, int groups) {
    LStructure ls;
    ls.mode_ = Mode::Grouped;
    ls.n_ = static_cast<int>(names.size());
    if (ls.n_ > kMaxGrouped) throw ArgumentError("domain too large for grouped structure");
    ls.names_ = std::move(names);
    size_t n = ls.n_;
    ls.lg_.assign(n * n * n, -1);
    ls.sg_.assign(n * n * n * n, -1);
    ls.present_.assign(groups, 0);
    return ls;
}

LStructure LStructure::explicit_empty(std::vector<std::string> names) {
    LStructure ls;
    ls.mode_ = Mode::Explicit;
    ls.n_ = static_cast<int>(names.size());
    if (ls.n_ > kMaxExplicit) throw ArgumentError("domain too large for explicit structure");
    ls.names_ = std::move(names);
    size_t n = ls.n_, n3 = n * n * n, n4 = n3 * n;
    ls.l_.assign(n3, 0);
    ls.s_.assign(n4, 0);
    ls.lp_.assign(n4, 0);
    ls.sp_.assign(n4 * n, 0);
    ls.r_.assign(n4 * n * n, 0);
    ls.q_.assign(n4 * n * n * n, 0);
    return ls;
}

int LStructure::index_of(const std::string& name) const {
    for (int i = 0; i < n_; ++i)
        if (names_[i] == name) return i;
    return -1;
}

bool LStructure::L(int x, int y, int z) const {
    return mode_ == Mode::Grouped ? lg_[i3(x, y, z)] >= 0 : l_[i3(x, y, z)];
}

bool LStructure::S(int x, int y, int z, int w) const {
    return mode_ == Mode::Grouped ? sg_[i4(x, y, z, w)] >= 0 : s_[i4(x, y, z, w)];
}

bool LStructure::Lp(int x, int y, int z, int u) const {
    if (mode_ == Mode::Explicit) return lp_[i4(x, y, z, u)];
    int g = lg_[i3(x, y, z)];
    return g >= 0 && !((present_[g] >> u) & 1u);
}

bool LStructure::Sp(int x, int y, int z, int w, int t) const {
    if (mode_ == Mode::Explicit) return sp_[i5(x, y, z, w, t)];
    int g = sg_[i4(x, y, z, w)];
    return g >= 0 && !((present_[g] >> t) & 1u);
}

bool LStructure::Q(int x, int y, int z, int w, int p, int q, int s) const {
    if (mode_ == Mode::Explicit) return q_[i7(x, y, z, w, p, q, s)];
    int g = sg_[i4(x, y, z, w)];
    return g >= 0 && g == lg_[i3(p, q, s)];
}

bool LStructure::R(int x, int y, int z, int p, int q, int s) const {
    if (mode_ == Mode::Explicit) return r_[i6(x, y, z, p, q, s)];
    int g = lg_[i3(x, y, z)];
    return g >= 0 && g == lg_[i3(p, q, s)];
}

void LStructure::set_L(int x, int y, int z, int g) {
    lg_[i3(x, y, z)] = static_cast<int16_t>(g);
    lg_[i3(x, z, y)] = static_cast<int16_t>(g);
}

void LStructure::set_S(int x, int y, int z, int w, int g) {
    for (auto& f : s_forms(x, y, z, w)) sg_[i4(f[0], f[1], f[2], f[3])] = static_cast<int16_t>(g);
}

void LStructure::put_L(int x, int y, int z) {
    l_[i3(x, y, z)] = 1;
    l_[i3(x, z, y)] = 1;
}

void LStructure::put_S(int x, int y, int z, int w) {
    for (auto& f : s_forms(x, y, z, w)) s_[i4(f[0], f[1], f[2], f[3])] = 1;
}

void LStructure::put_Lp(int x, int y, int z, int u) {
    lp_[i4(x, y, z, u)] = 1;
    lp_[i4(x, z, y, u)] = 1;
}

void LStructure::put_Sp(int x, int y, int z, int w, int t) {
    for (auto& f : s_forms(x, y, z, w)) sp_[i5(f[0], f[1], f[2], f[3], t)] = 1;
}

void LStructure::put_Q(int x, int y, int z, int w, int p, int q, int s) {
    for (auto& f : s_forms(x, y, z, w)) {
        q_[i7(f[0], f[1], f[2], f[3], p, q, s)] = 1;
        q_[i7(f[0], f[1], f[2], f[3], p, s, q)] = 1;
    }
}

void LStructure::put_R(int x, int y, int z, int p, int q, int s) {
    for (auto& a : {std::array<int, 3>{x, y, z}, std::array<int, 3>{x, z, y}})
        for (auto& b : {std::array<int, 3>{p, q, s}, std::array<int, 3>{p, s, q}}) {
            r_[i6(a[0], a[1], a[2], b[0], b[1], b[2])] = 1;
            r_[i6(b[0], b[1], b[2], a[0], a[1], a[2])] = 1;
        }
}

LStructure LStructure::restrict(const std::vector<int>& sub) const {
    std::vector<std::string> nm;
    for (int i : sub) {
        if (i < 0 || i >= n_) throw ArgumentError("restrict: index out of range");
        nm.push_back(names_[i]);
    }
    int k = static_cast<int>(sub.size());
    if (mode_ == Mode::Grouped) {
        LStructure out = grouped(nm, group_count());
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                for (int c = 0; c < k; ++c) {
                    out.lg_[out.i3(a, b, c)] = lg_[i3(sub[a], sub[b], sub[c])];
                    for (int d = 0; d < k; ++d)
                        out.sg_[out.i4(a, b, c, d)] = sg_[i4(sub[a], sub[b], sub[c], sub[d])];
                }
        for (int g = 0; g < group_count(); ++g) {
            uint64_t m = 0;
            for (int a = 0; a < k; ++a)
                if ((present_[g] >> sub[a]) & 1u) m |= uint64_t{1} << a;
            out.present_[g] = m;
        }
        return out;
    }
    LStructure out = explicit_empty(nm);
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y)
            for (int z = 0; z < k; ++z) {
                out.l_[out.i3(x, y, z)] = l_[i3(sub[x], sub[y], sub[z])];
                for (int w = 0; w < k; ++w) {
                    out.s_[out.i4(x, y, z, w)] = s_[i4(sub[x], sub[y], sub[z], sub[w])];
                    out.lp_[out.i4(x, y, z, w)] = lp_[i4(sub[x], sub[y], sub[z], sub[w])];
                    for (int t = 0; t < k; ++t) {
                        out.sp_[out.i5(x, y, z, w, t)] = sp_[i5(sub[x], sub[y], sub[z], sub[w], sub[t])];
                        for (int u = 0; u < k; ++u) {
                            out.r_[out.i6(x, y, z, w, t, u)] = r_[i6(sub[x], sub[y], sub[z], sub[w], sub[t], sub[u])];
                            for (int v = 0; v < k; ++v)
                                out.q_[out.i7(x, y, z, w, t, u, v)] =
                                    q_[i7(sub[x], sub[y], sub[z], sub[w], sub[t], sub[u], sub[v])];
                        }
                    }
                }
            }
    return out;
}

LStructure LStructure::with_names(std::vector<std::string> nm) const {
    if (static_cast<int>(nm.size()) != n_) throw ArgumentError("with_names: size mismatch");
    LStructure out = *this;
    out.names_ = std::move(nm);
    return out;
}

LStructure LStructure::to_explicit() const {
    if (mode_ == Mode::Explicit) return *this;
    LStructure out = explicit_empty(names_);
    int n = n_;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (!L(x, y, z)) continue;
                out.put_L(x, y, z);
                for (int u = 0; u < n; ++u)
                    if (Lp(x, y, z, u)) out.put_Lp(x, y, z, u);
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        for (int s = 0; s < n; ++s)
                            if (R(x, y, z, p, q, s)) out.put_R(x, y, z, p, q, s);
            }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    if (!S(x, y, z, w)) continue;
                    out.put_S(x, y, z, w);
                    for (int t = 0; t < n; ++t)
                        if (Sp(x, y, z, w, t)) out.put_Sp(x, y, z, w, t);
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q)
                            for (int s = 0; s < n; ++s)
                                if (Q(x, y, z, w, p, q, s)) out.put_Q(x, y, z, w, p, q, s);
                }
    return out;
}

std::string tuple_string(const LStructure& ls, const std::vector<int>& idx) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << ls.names()[idx[i]];
    os << ")";
    return os.str();
}

namespace {

bool grouped_equal(const LStructure& a, const LStructure& b, std::string* diff) {
    int n = a.size();
    auto fail = [&](const std::string& what, std::vector<int> t) {
        if (diff) *diff = what + tuple_string(a, t);
        return false;
    };
    std::map<int, int> ab, ba;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = y + 1; z < n; ++z) {
                if (x == y || x == z) continue;
                int ga = a.l_group(x, y, z), gb = b.l_group(x, y, z);
                if ((ga >= 0) != (gb >= 0)) return fail("L differs at ", {x, y, z});
                if (ga < 0) continue;
                auto i = ab.find(ga);
                auto j = ba.find(gb);
                if ((i != ab.end() && i->second != gb) || (j != ba.end() && j->second != ga))
                    return fail("R differs around ", {x, y, z});
                ab[ga] = gb;
                ba[gb] = ga;
                if (a.present(ga) != b.present(gb)) return fail("L' differs at ", {x, y, z});
            }
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = x + 1; z < n; ++z)
                for (int w = z + 1; w < n; ++w) {
                    if (z == y || w == y) continue;
                    int ga = a.s_group(x, y, z, w), gb = b.s_group(x, y, z, w);
                    if ((ga >= 0) != (gb >= 0)) return fail("S differs at ", {x, y, z, w});
                    if (ga < 0) continue;
                    auto i = ab.find(ga);
                    if (i != ab.end()) {
                        if (i->second != gb) return fail("Q differs around ", {x, y, z, w});
                    } else if (ba.count(gb)) {
                        return fail("Q differs around ", {x, y, z, w});
                    }
                    if (a.present(ga) != b.present(gb)) return fail("S' differs at ", {x, y, z, w});
                }
    return true;
}

bool general_equal(const LStructure& a, const LStructure& b, std::string* diff) {
    int n = a.size();
    auto fail = [&](const std::string& what, std::vector<int> t) {
        if (diff) *diff = what + tuple_string(a, t);
        return false;
    };
    std::vector<std::array<int, 3>> Ls;
    std::vector<std::array<int, 4>> Ss;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (!distinct({x, y, z})) continue;
                if (a.L(x, y, z) != b.L(x, y, z)) return fail("L differs at ", {x, y, z});
                if (a.L(x, y, z)) Ls.push_back({x, y, z});
                for (int w = 0; w < n; ++w) {
                    if (!distinct({x, y, z, w})) continue;
                    if (a.S(x, y, z, w) != b.S(x, y, z, w)) return fail("S differs at ", {x, y, z, w});
                    if (a.S(x, y, z, w)) Ss.push_back({x, y, z, w});
                }
            }
    for (auto& l : Ls) {
        for (int u = 0; u < n; ++u)
            if (a.Lp(l[0], l[1], l[2], u) != b.Lp(l[0], l[1], l[2], u))
                return fail("L' differs at ", {l[0], l[1], l[2], u});
        for (auto& m : Ls)
            if (a.R(l[0], l[1], l[2], m[0], m[1], m[2]) != b.R(l[0], l[1], l[2], m[0], m[1], m[2]))
                return fail("R differs at ", {l[0], l[1], l[2], m[0], m[1], m[2]});
    }
    for (auto& s : Ss) {
        for (int t = 0; t < n; ++t)
            if (a.Sp(s[0], s[1], s[2], s[3], t) != b.Sp(s[0], s[1], s[2], s[3], t))
                return fail("S' differs at ", {s[0], s[1], s[2], s[3], t});
        for (auto& m : Ls)
            if (a.Q(s[0], s[1], s[2], s[3], m[0], m[1], m[2]) != b.Q(s[0], s[1], s[2], s[3], m[0], m[1], m[2]))
                return fail("Q differs at ", {s[0], s[1], s[2], s[3], m[0], m[1], m[2]});
    }
    // Entries outside the semantic distinctness pattern must be absent everywhere.
    if (a.mode() == LStructure::Mode::Explicit || b.mode() == LStructure::Mode::Explicit) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z)
                    if (!distinct({x, y, z}) && (a.L(x, y, z) || b.L(x, y, z))) return fail("degenerate L at ", {x, y, z});
    }
    return true;
}

}  // namespace

bool same_relations(const LStructure& a, const LStructure& b, std::string* diff) {
    if (a.size() != b.size()) {
        if (diff) *diff = "domain sizes differ";
        return false;
    }
    if (a.mode() == LStructure::Mode::Grouped && b.mode() == LStructure::Mode::Grouped)
        return grouped_equal(a, b, diff);
    return general_equal(a, b, diff);
}

bool is_embedding(const LStructure& a, const LStructure& b, const std::vector<int>& map, std::string* diff) {
    if (static_cast<int>(map.size()) != a.size()) {
        if (diff) *diff = "map size differs from domain size";
        return false;
    }
    std::vector<char> used(b.size(), 0);
    for (int i : map) {
        if (i < 0 || i >= b.size() || used[i]) {
            if (diff) *diff = "map is not injective";
            return false;
        }
        used[i] = 1;
    }
    return same_relations(a, b.restrict(map), diff);
}

}  // namespace treeds
