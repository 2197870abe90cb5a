#include "treeds/relations.hpp"

#include <sstream>

#include "treeds/errors.hpp"

namespace treeds {

namespace {

std::string quad(const char* ax, int x, int y, int z, int w) {
    std::ostringstream os;
    os << ax << " at (" << x << "," << y << ";" << z << "," << w << ")";
    return os.str();
}

// elems[i] is the domain index carried by row i of the output.
LStructure realize_core(const TreeOfDSets& t, const std::vector<std::vector<int>>& proj,
                        const std::vector<int>& elems, std::vector<std::string> names) {
    int k = static_cast<int>(elems.size());
    LStructure ls = LStructure::grouped(std::move(names), t.vertex_count());
    for (int v = 0; v < t.vertex_count(); ++v) {
        std::vector<int> here, leafOf(k, -1);
        uint64_t mask = 0;
        for (int i = 0; i < k; ++i) {
            int l = proj[v][elems[i]];
            leafOf[i] = l;
            if (l >= 0) {
                here.push_back(i);
                mask |= uint64_t{1} << i;
            }
        }
        ls.set_present(v, mask);
        const DSetGraph& d = t.label[v];
        if (d.ram_points().empty() || here.size() < 3) continue;
        DistanceTable D(d);
        int h = static_cast<int>(here.size());
        for (int ia = 0; ia < h; ++ia)
            for (int ib = ia + 1; ib < h; ++ib)
                for (int ic = ib + 1; ic < h; ++ic) {
                    int a = here[ia], b = here[ib], c = here[ic];
                    int la = leafOf[a], lb = leafOf[b], lc = leafOf[c];
                    if (la == lb || lb == lc || la == lc) continue;
                    int m = D.median(la, lb, lc);
                    int sp = d.special(m);
                    int apex = -1, o1 = -1, o2 = -1;
                    if (D.toward(d, m, la) == sp) apex = a, o1 = b, o2 = c;
                    else if (D.toward(d, m, lb) == sp) apex = b, o1 = a, o2 = c;
                    else if (D.toward(d, m, lc) == sp) apex = c, o1 = a, o2 = b;
                    if (apex < 0) continue;
                    if (ls.l_group(apex, o1, o2) >= 0) throw DataError("L witnessed in two D-sets");
                    ls.set_L(apex, o1, o2, v);
                }
        for (int ia = 0; ia < h; ++ia)
            for (int ib = ia + 1; ib < h; ++ib)
                for (int ic = ib + 1; ic < h; ++ic)
                    for (int id = ic + 1; id < h; ++id) {
                        int a = here[ia], b = here[ib], c = here[ic], e = here[id];
                        int la = leafOf[a], lb = leafOf[b], lc = leafOf[c], le = leafOf[e];
                        if (la == lb || la == lc || la == le || lb == lc || lb == le || lc == le) continue;
                        int pa[3][4] = {{a, b, c, e}, {a, c, b, e}, {a, e, b, c}};
                        int pl[3][4] = {{la, lb, lc, le}, {la, lc, lb, le}, {la, le, lb, lc}};
                        for (int p = 0; p < 3; ++p)
                            if (D.split(pl[p][0], pl[p][1], pl[p][2], pl[p][3])) {
                                if (ls.s_group(pa[p][0], pa[p][1], pa[p][2], pa[p][3]) >= 0)
                                    throw DataError("S witnessed in two D-sets");
                                ls.set_S(pa[p][0], pa[p][1], pa[p][2], pa[p][3], v);
                            }
                    }
    }
    return ls;
}

}  // namespace

Realization realize(const TreeOfDSets& t) {
    require_valid(t);
    auto proj = projections(t);
    int n = t.domain_size();
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    Realization r{realize_core(t, proj, all, t.domain()), t.vid};
    return r;
}

LStructure realize_on(const TreeOfDSets& t, const std::vector<int>& subset) {
    auto proj = projections(t);
    auto dom = t.domain();
    std::vector<std::string> names;
    for (int i : subset) names.push_back(dom.at(i));
    return realize_core(t, proj, subset, names);
}

QuatRel leaf_d_relation(const DSetGraph& d, const std::vector<int>& leaves) {
    int n = static_cast<int>(leaves.size());
    QuatRel rel(n);
    DistanceTable D(d);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    bool v;
                    if (x == y && x != z && x != w) v = true;
                    else if (z == w && z != x && z != y) v = true;
                    else if (x == y || x == z || x == w || y == z || y == w || z == w) v = false;
                    else v = D.split(leaves[x], leaves[y], leaves[z], leaves[w]);
                    rel.set(x, y, z, w, v);
                }
    return rel;
}

QuatRel root_d(const LStructure& ls) {
    int n = ls.size();
    QuatRel rel(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    bool v;
                    if (x == y && x != z && x != w) v = true;
                    else if (z == w && z != x && z != y) v = true;
                    else if (x == y || x == z || x == w || y == z || y == w || z == w) v = false;
                    else {
                        v = ls.S(x, y, z, w);
                        for (int t = 0; v && t < n; ++t)
                            if (ls.Sp(x, y, z, w, t)) v = false;
                    }
                    rel.set(x, y, z, w, v);
                }
    return rel;
}

void check_ls_symmetry(const LStructure& ls) {
    int n = ls.size();
    auto bad = [&](const std::string& what, std::vector<int> t) {
        throw ArgumentError("symmetry violation in " + what + " at " + tuple_string(ls, t));
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                bool l = ls.L(x, y, z);
                if (l && (x == y || y == z || x == z)) bad("L (repeated argument)", {x, y, z});
                if (l != ls.L(x, z, y)) bad("L", {x, y, z});
                for (int w = 0; w < n; ++w) {
                    bool s = ls.S(x, y, z, w);
                    if (!s) continue;
                    if (x == y || x == z || x == w || y == z || y == w || z == w) bad("S (repeated argument)", {x, y, z, w});
                    if (!ls.S(y, x, z, w) || !ls.S(x, y, w, z) || !ls.S(z, w, x, y)) bad("S", {x, y, z, w});
                }
            }
}

LStructure derive_from_ls(const LStructure& in) {
    check_ls_symmetry(in);
    int n = in.size();
    if (n > LStructure::kMaxExplicit) throw ArgumentError("derive_from_ls: domain too large");
    LStructure out = LStructure::explicit_empty(in.names());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (in.L(x, y, z)) out.put_L(x, y, z);
                for (int w = 0; w < n; ++w)
                    if (in.S(x, y, z, w)) out.put_S(x, y, z, w);
            }
    // (i) L'
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (!out.L(x, y, z)) continue;
                for (int w = 0; w < n; ++w)
                    if (out.L(w, y, z) && out.L(w, x, z) && out.L(w, x, y) && !out.S(x, w, y, z)) out.put_Lp(x, y, z, w);
            }
    // (ii) R
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (!out.L(x, y, z)) continue;
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        for (int s = 0; s < n; ++s) {
                            if (!out.L(p, q, s)) continue;
                            bool same = true;
                            for (int t = 0; same && t < n; ++t)
                                if (out.Lp(x, y, z, t) != out.Lp(p, q, s, t)) same = false;
                            if (same) out.put_R(x, y, z, p, q, s);
                        }
            }
    // (iii) S'
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    if (!out.S(x, y, z, w)) continue;
                    int four[4] = {x, y, z, w};
                    for (int t = 0; t < n; ++t) {
                        bool ok = true;
                        for (int i = 0; ok && i < 4; ++i)
                            for (int j = 0; ok && j < 4; ++j)
                                if (i != j && !out.R(t, x, y, t, four[i], four[j])) ok = false;
                        for (int i = 0; ok && i < 4; ++i)
                            for (int j = 0; ok && j < 4; ++j)
                                for (int k = 0; ok && k < 4; ++k)
                                    if (out.L(four[i], four[j], four[k]) && out.R(t, x, y, four[i], four[j], four[k]))
                                        ok = false;
                        if (ok) out.put_Sp(x, y, z, w, t);
                    }
                }
    // (iv) Q
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    if (!out.S(x, y, z, w)) continue;
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q)
                            for (int s = 0; s < n; ++s) {
                                if (!out.L(p, q, s)) continue;
                                bool same = true;
                                for (int t = 0; same && t < n; ++t)
                                    if (out.Sp(x, y, z, w, t) != out.Lp(p, q, s, t)) same = false;
                                if (same) out.put_Q(x, y, z, w, p, q, s);
                            }
                }
    return out;
}

AxiomReport check_d_axioms(const QuatRel& D, DLevel level, size_t maxFailures) {
    AxiomReport rep;
    int n = D.size();
    auto add = [&](const std::string& s) {
        if (rep.failures.size() < maxFailures) rep.failures.push_back(s);
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    if (!D(x, y, z, w)) continue;
                    if (!D(y, x, z, w) || !D(x, y, w, z) || !D(z, w, x, y)) add(quad("(D1)", x, y, z, w));
                    if (D(x, z, y, w)) add(quad("(D2)", x, y, z, w));
                    for (int a = 0; a < n; ++a)
                        if (!D(a, y, z, w) && !D(x, y, z, a)) {
                            add(quad("(D3)", x, y, z, w) + " with a=" + std::to_string(a));
                            break;
                        }
                }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (x != z && y != z && !D(x, y, z, z)) add(quad("(D4)", x, y, z, z));
    if (level == DLevel::Basic) return rep;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                bool found = false;
                for (int t = 0; t < n && !found; ++t)
                    if (t != z && D(x, y, z, t)) found = true;
                if (!found) add("(D5) at (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")");
            }
    if (level == DLevel::Proper) return rep;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                    if (!D(x, y, z, w)) continue;
                    bool found = false;
                    for (int a = 0; a < n && !found; ++a)
                        if (D(a, y, z, w) && D(x, a, z, w) && D(x, y, a, w) && D(x, y, z, a)) found = true;
                    if (!found) add(quad("(D6)", x, y, z, w));
                }
    return rep;
}

std::vector<std::string> apex_violations(const LStructure& ls) {
    std::vector<std::string> out;
    int n = ls.size();
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = y + 1; z < n; ++z) {
                int c = ls.L(x, y, z) + ls.L(y, x, z) + ls.L(z, x, y);
                if (c != 1) out.push_back(tuple_string(ls, {x, y, z}) + " has " + std::to_string(c) + " apexes");
            }
    return out;
}

}  // namespace treeds
