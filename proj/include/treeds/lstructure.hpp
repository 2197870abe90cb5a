#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace treeds {

// A finite structure in the six relations L, S, L', S', Q, R.
//
// Grouped mode is what a tree of D-sets produces: every L-triple and every
// S-quadruple carries the id of the D-set that witnesses it, and each id has
// the set of elements present there. Q, R, L', S' are then read off the ids.
// Explicit mode stores all six relations as bit tables and can hold any
// relations at all (used for derived relations and parsed dumps); it is
// limited to small domains.
class LStructure {
public:
    enum class Mode { Grouped, Explicit };
    static constexpr int kMaxGrouped = 64;
    static constexpr int kMaxExplicit = 10;

    LStructure() = default;
    static LStructure grouped(std::vector<std::string> names, int groups);
    static LStructure explicit_empty(std::vector<std::string> names);

    Mode mode() const { return mode_; }
    int size() const { return n_; }
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;

    bool L(int x, int y, int z) const;
    bool S(int x, int y, int z, int w) const;
    bool Lp(int x, int y, int z, int u) const;
    bool Sp(int x, int y, int z, int w, int t) const;
    bool Q(int x, int y, int z, int w, int p, int q, int s) const;
    bool R(int x, int y, int z, int p, int q, int s) const;

    // grouped mode
    int group_count() const { return static_cast<int>(present_.size()); }
    int l_group(int x, int y, int z) const { return lg_[i3(x, y, z)]; }
    int s_group(int x, int y, int z, int w) const { return sg_[i4(x, y, z, w)]; }
    uint64_t present(int g) const { return present_.at(g); }
    void set_L(int x, int y, int z, int g);        // also (x;z,y)
    void set_S(int x, int y, int z, int w, int g);  // all eight symmetric forms
    void set_present(int g, uint64_t mask) { present_.at(g) = mask; }

    // explicit mode; each setter closes under the argument symmetries
    void put_L(int x, int y, int z);
    void put_S(int x, int y, int z, int w);
    void put_Lp(int x, int y, int z, int u);
    void put_Sp(int x, int y, int z, int w, int t);
    void put_Q(int x, int y, int z, int w, int p, int q, int s);
    void put_R(int x, int y, int z, int p, int q, int s);

    // Induced substructure on `subset` (new index i is old subset[i]).
    LStructure restrict(const std::vector<int>& subset) const;
    LStructure with_names(std::vector<std::string> names) const;
    // Explicit copy; only for small domains.
    LStructure to_explicit() const;

private:
    size_t i3(int x, int y, int z) const { return (static_cast<size_t>(x) * n_ + y) * n_ + z; }
    size_t i4(int x, int y, int z, int w) const { return i3(x, y, z) * n_ + w; }
    size_t i5(int x, int y, int z, int w, int t) const { return i4(x, y, z, w) * n_ + t; }
    size_t i6(int x, int y, int z, int p, int q, int s) const { return i5(x, y, z, p, q) * n_ + s; }
    size_t i7(int x, int y, int z, int w, int p, int q, int s) const { return i6(x, y, z, w, p, q) * n_ + s; }

    Mode mode_ = Mode::Grouped;
    int n_ = 0;
    std::vector<std::string> names_;
    // grouped
    std::vector<int16_t> lg_, sg_;
    std::vector<uint64_t> present_;
    // explicit
    std::vector<uint8_t> l_, s_, lp_, sp_, r_, q_;
};

// Same domain order, same relations. On mismatch `diff` names one witness tuple.
bool same_relations(const LStructure& a, const LStructure& b, std::string* diff = nullptr);

// Does map (index of a -> index of b) carry a isomorphically onto the induced
// substructure of b on its image?
bool is_embedding(const LStructure& a, const LStructure& b, const std::vector<int>& map,
                  std::string* diff = nullptr);

std::string tuple_string(const LStructure& ls, const std::vector<int>& idx);

}  // namespace treeds
