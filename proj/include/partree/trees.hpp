#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partree/errors.hpp"
#include "partree/partitions.hpp"
#include "partree/posets.hpp"

// Rooted trees with leaf set A and every vertex of arity >= 2, encoded as
// laminar families of subsets of A: any two members nested or disjoint, every
// member of size >= 2, and A itself a member once |A| >= 2. The posets T(A)
// and T+(A), leaf-vertex pruning, and grafting.

namespace partree {

// ---------------------------------------------------------------------------
// Trees as laminar families
// ---------------------------------------------------------------------------

class Tree {
public:
    // Canonical member order: by smallest leaf, then larger members first,
    // then lexicographic. Validation errors: SmallBlock, NotLaminar,
    // MissingRoot.
    static Tree validate(int leaf_count, std::vector<std::vector<int>> family) {
        Tree t;
        t.leaf_count_ = leaf_count;
        if (leaf_count < 1) fail("TooSmall", "trees need at least one leaf");
        for (auto& m : family) {
            std::sort(m.begin(), m.end());
            m.erase(std::unique(m.begin(), m.end()), m.end());
            if (m.size() < 2) fail("SmallBlock", "tree members have at least two leaves");
            for (int x : m)
                if (x < 0 || x >= leaf_count) fail("ElementNotFound", "leaf index out of range");
        }
        std::sort(family.begin(), family.end(), member_less);
        family.erase(std::unique(family.begin(), family.end()), family.end());
        for (std::size_t i = 0; i < family.size(); ++i)
            for (std::size_t j = i + 1; j < family.size(); ++j)
                if (!nested_or_disjoint(family[i], family[j]))
                    fail("NotLaminar", "members overlap without nesting");
        if (leaf_count >= 2) {
            std::vector<int> root(leaf_count);
            std::iota(root.begin(), root.end(), 0);
            if (family.empty() || !(family.front() == root))
                fail("MissingRoot", "the full leaf set must be a member");
        } else if (!family.empty()) {
            fail("SmallBlock", "the unit tree has an empty family");
        }
        t.family_ = std::move(family);
        // arity >= 2 is automatic for this encoding; asserted anyway
        for (const auto& m : t.family_)
            if (t.children(m).size() < 2)
                fail("SmallBlock", "vertex with fewer than two children");
        return t;
    }

    static Tree validate_labels(const LeafSet& a, const std::vector<std::vector<std::string>>& family) {
        std::vector<std::vector<int>> idx;
        for (const auto& m : family) {
            std::vector<int> im;
            for (const auto& l : m) {
                int i = a.index(l);
                if (i < 0) fail("ElementNotFound", "leaf '" + l + "' not in the leaf set");
                im.push_back(i);
            }
            idx.push_back(std::move(im));
        }
        return validate(a.size(), std::move(idx));
    }

    static Tree corolla(int leaf_count) {
        if (leaf_count < 2) fail("TooSmall", "the corolla needs at least two leaves");
        std::vector<int> all(leaf_count);
        std::iota(all.begin(), all.end(), 0);
        return validate(leaf_count, {all});
    }

    // The unit tree: a bare edge with a single leaf and no vertices.
    static Tree unit() { return validate(1, {}); }

    int leaf_count() const { return leaf_count_; }
    const std::vector<std::vector<int>>& family() const { return family_; }
    int vertex_count() const { return static_cast<int>(family_.size()); }
    bool is_unit() const { return family_.empty(); }
    bool is_corolla() const { return family_.size() == 1; }
    int inner_edge_count() const { return std::max(0, vertex_count() - 1); }

    bool has_member(const std::vector<int>& m) const {
        return std::binary_search(family_.begin(), family_.end(), m, member_less);
    }

    // The children of a vertex: maximal members properly contained in it plus
    // singletons of uncovered leaves, in canonical order (sorted by least
    // leaf).
    std::vector<std::vector<int>> children(const std::vector<int>& member) const {
        std::vector<std::vector<int>> out;
        std::vector<bool> covered(leaf_count_, false);
        for (const auto& m : family_) {
            if (m.size() >= member.size() || !contains(member, m)) continue;
            bool maximal = true;
            for (const auto& other : family_) {
                if (other == m || other.size() >= member.size()) continue;
                if (contains(member, other) && contains(other, m) && other != m) {
                    maximal = false;
                    break;
                }
            }
            if (maximal) {
                out.push_back(m);
                for (int x : m) covered[x] = true;
            }
        }
        for (int x : member)
            if (!covered[x]) out.push_back({x});
        std::sort(out.begin(), out.end(),
                  [](const auto& x, const auto& y) { return x[0] < y[0]; });
        return out;
    }

    // The minimal members: vertices all of whose incoming edges are leaves.
    std::vector<std::vector<int>> leaf_vertex_members() const {
        std::vector<std::vector<int>> out;
        for (const auto& m : family_) {
            bool minimal = true;
            for (const auto& other : family_)
                if (other != m && contains(m, other)) {
                    minimal = false;
                    break;
                }
            if (minimal) out.push_back(m);
        }
        std::sort(out.begin(), out.end(), member_less);
        return out;
    }

    std::string to_string(const LeafSet& a) const {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < family_.size(); ++i) {
            if (i) os << ',';
            os << '{';
            for (std::size_t j = 0; j < family_[i].size(); ++j) {
                if (j) os << ',';
                os << a.label(family_[i][j]);
            }
            os << '}';
        }
        os << '}';
        return os.str();
    }

    bool operator==(const Tree& o) const {
        return leaf_count_ == o.leaf_count_ && family_ == o.family_;
    }
    bool operator<(const Tree& o) const {
        return std::tie(leaf_count_, family_) < std::tie(o.leaf_count_, o.family_);
    }

    static bool contains(const std::vector<int>& big, const std::vector<int>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    }

    static bool member_less(const std::vector<int>& x, const std::vector<int>& y) {
        if (x[0] != y[0]) return x[0] < y[0];
        if (x.size() != y.size()) return x.size() > y.size();
        return x < y;
    }

private:
    static bool nested_or_disjoint(const std::vector<int>& x, const std::vector<int>& y) {
        std::vector<int> inter;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(inter));
        if (inter.empty()) return true;
        return inter.size() == x.size() || inter.size() == y.size();
    }

    int leaf_count_ = 0;
    std::vector<std::vector<int>> family_;
};

inline std::vector<std::vector<int>> leaf_vertices(const Tree& t) {
    return t.leaf_vertex_members();
}

// ---------------------------------------------------------------------------
// Enumeration: T(A) and T+(A)
// ---------------------------------------------------------------------------

struct TreePosetResult {
    Poset poset;              // order: family inclusion
    std::vector<Tree> trees;  // sorted by canonical serialization
    bool includes_corolla = true;
};

namespace detail {

// All laminar families on the subset `ground` (listing the families as sets
// of members, each family containing `ground` itself). Recursion over the
// partition of the root vertex into child subtrees.
inline std::vector<std::vector<std::vector<int>>> families_on(const std::vector<int>& ground) {
    std::vector<std::vector<std::vector<int>>> out;
    if (ground.size() < 2) return {{}};  // the bare edge
    const int k = static_cast<int>(ground.size());
    // enumerate set partitions of `ground` with >= 2 blocks via RGS
    std::vector<int> rgs(k, 0);
    std::function<void(int, int)> rec = [&](int pos, int max_used) {
        if (pos == k) {
            const int nblocks = max_used + 1;
            if (nblocks < 2) return;
            std::vector<std::vector<int>> blocks(nblocks);
            for (int i = 0; i < k; ++i) blocks[rgs[i]].push_back(ground[i]);
            // per block of size >= 2: all families on the block
            std::vector<std::vector<std::vector<std::vector<int>>>> choices;
            for (const auto& b : blocks)
                if (b.size() >= 2) choices.push_back(families_on(b));
            std::vector<std::vector<int>> current = {ground};
            std::function<void(std::size_t)> combine = [&](std::size_t at) {
                if (at == choices.size()) {
                    out.push_back(current);
                    return;
                }
                std::size_t mark = current.size();
                std::size_t block_index = 0, seen = 0;
                for (std::size_t i = 0; i < blocks.size(); ++i)
                    if (blocks[i].size() >= 2) {
                        if (seen == at) {
                            block_index = i;
                            break;
                        }
                        ++seen;
                    }
                for (const auto& fam : choices[at]) {
                    current.push_back(blocks[block_index]);
                    for (const auto& m : fam)
                        if (m != blocks[block_index]) current.push_back(m);
                    // recursive families already contain their own ground set
                    combine(at + 1);
                    current.resize(mark);
                }
            };
            combine(0);
        } else {
            for (int b = 0; b <= max_used + 1; ++b) {
                rgs[pos] = b;
                rec(pos + 1, std::max(max_used, b));
            }
        }
    };
    rgs[0] = 0;
    rec(1, 0);
    return out;
}

}  // namespace detail

inline TreePosetResult enumerate_trees(const LeafSet& a, bool include_corolla, int max_n = 7) {
    const int n = a.size();
    if (n > max_n)
        fail("TooLarge", "tree enumeration capped at " + std::to_string(max_n) + " leaves");
    TreePosetResult out;
    out.includes_corolla = include_corolla;
    if (n == 1) {
        out.trees = {Tree::unit()};
    } else {
        std::vector<int> ground(n);
        std::iota(ground.begin(), ground.end(), 0);
        for (auto& fam : detail::families_on(ground)) {
            Tree t = Tree::validate(n, std::move(fam));
            if (!include_corolla && t.is_corolla()) continue;
            out.trees.push_back(std::move(t));
        }
        std::sort(out.trees.begin(), out.trees.end(),
                  [&](const Tree& x, const Tree& y) { return x.to_string(a) < y.to_string(a); });
    }
    std::vector<std::string> labels;
    labels.reserve(out.trees.size());
    for (const auto& t : out.trees) labels.push_back(t.to_string(a));
    const int m = static_cast<int>(out.trees.size());
    std::vector<std::vector<bool>> leq(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            // S <= T iff family(S) is contained in family(T)
            const auto& fs = out.trees[i].family();
            leq[i][j] = std::all_of(fs.begin(), fs.end(), [&](const std::vector<int>& mem) {
                return out.trees[j].has_member(mem);
            });
        }
    out.poset = Poset::from_leq_matrix(std::move(labels), std::move(leq));
    return out;
}

// Number of rooted trees with n labelled leaves and every vertex of arity
// >= 2, by the convolution recurrence
//   u(0) = 1,  u(m) = sum_j C(m-1, j-1) t(j) u(m-j),
//   t(1) = 1,  t(n) = sum_{j<n} C(n-1, j-1) t(j) u(n-j);
// independent of the laminar-family generator above.
inline smith::Int series_reduced_tree_count(int n) {
    if (n < 1) fail("TooSmall", "tree counts start at one leaf");
    std::vector<std::vector<smith::Int>> choose(n + 1, std::vector<smith::Int>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        choose[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : smith::Int(0));
    }
    std::vector<smith::Int> t(n + 1, 0), u(n + 1, 0);
    t[1] = 1;
    u[0] = 1;
    for (int m = 1; m <= n; ++m) {
        if (m >= 2) {
            smith::Int s = 0;
            for (int j = 1; j < m; ++j) s += choose[m - 1][j - 1] * t[j] * u[m - j];
            t[m] = s;
        }
        smith::Int s = 0;
        for (int j = 1; j <= m; ++j) s += choose[m - 1][j - 1] * t[j] * u[m - j];
        u[m] = s;
    }
    return t[n];
}

// ---------------------------------------------------------------------------
// Pruning
// ---------------------------------------------------------------------------

struct PruneResult {
    LeafSet leaves;  // survivors in original order, then one marker per pruned vertex
    Tree tree;
    // expansion[i] = original leaf indices represented by new leaf i
    std::vector<std::vector<int>> expansion;
};

// Removes the given leaf vertices and their incoming leaves, introducing a
// fresh marker leaf per removed vertex. Markers are named deterministically
// from the sorted member.
inline PruneResult prune(const LeafSet& a, const Tree& t, const std::vector<std::vector<int>>& w) {
    if (w.empty()) fail("NotLeafVertex", "prune needs a nonempty set of leaf vertices");
    auto lv = t.leaf_vertex_members();
    std::vector<std::vector<int>> sorted_w = w;
    for (auto& m : sorted_w) std::sort(m.begin(), m.end());
    std::sort(sorted_w.begin(), sorted_w.end(), Tree::member_less);
    sorted_w.erase(std::unique(sorted_w.begin(), sorted_w.end()), sorted_w.end());
    if (sorted_w.size() != w.size()) fail("NotLeafVertex", "duplicate leaf vertices in prune set");
    for (const auto& m : sorted_w)
        if (std::find(lv.begin(), lv.end(), m) == lv.end())
            fail("NotLeafVertex", "a prune entry is not a leaf vertex");

    PruneResult out;
    std::vector<bool> removed(a.size(), false);
    for (const auto& m : sorted_w)
        for (int x : m) removed[x] = true;
    std::vector<int> new_index(a.size(), -1);
    std::vector<std::string> labels;
    for (int i = 0; i < a.size(); ++i) {
        if (removed[i]) continue;
        new_index[i] = static_cast<int>(labels.size());
        labels.push_back(a.label(i));
        out.expansion.push_back({i});
    }
    std::vector<int> marker_of(sorted_w.size());
    for (std::size_t k = 0; k < sorted_w.size(); ++k) {
        std::ostringstream os;
        os << "l(";
        for (std::size_t j = 0; j < sorted_w[k].size(); ++j) {
            if (j) os << ',';
            os << a.label(sorted_w[k][j]);
        }
        os << ')';
        marker_of[k] = static_cast<int>(labels.size());
        labels.push_back(os.str());
        out.expansion.push_back(sorted_w[k]);
    }
    out.leaves = LeafSet(std::move(labels));

    auto substitute = [&](const std::vector<int>& member) {
        std::vector<int> m;
        std::vector<bool> used_marker(sorted_w.size(), false);
        for (int x : member) {
            if (!removed[x]) {
                m.push_back(new_index[x]);
                continue;
            }
            for (std::size_t k = 0; k < sorted_w.size(); ++k)
                if (std::binary_search(sorted_w[k].begin(), sorted_w[k].end(), x)) {
                    if (!used_marker[k]) {
                        m.push_back(marker_of[k]);
                        used_marker[k] = true;
                    }
                    break;
                }
        }
        std::sort(m.begin(), m.end());
        return m;
    };

    std::vector<std::vector<int>> family;
    for (const auto& m : t.family()) {
        if (std::binary_search(sorted_w.begin(), sorted_w.end(), m, Tree::member_less)) continue;
        family.push_back(substitute(m));
    }
    out.tree = Tree::validate(out.leaves.size(), std::move(family));
    return out;
}

// ---------------------------------------------------------------------------
// Grafting
// ---------------------------------------------------------------------------

struct GraftResult {
    LeafSet leaves;  // (A minus {a}) in order, then B in order
    Tree tree;
};

// Grafts the tree s (leaf set B) onto the leaf `graft_leaf` of t (leaf set A).
// Label sets must be disjoint after removing the grafted leaf.
inline GraftResult graft(const LeafSet& a, const Tree& t, const std::string& graft_leaf,
                         const LeafSet& b, const Tree& s) {
    const int pos = a.index(graft_leaf);
    if (pos < 0) fail("LeafNotFound", "'" + graft_leaf + "' is not a leaf of the host tree");

    std::vector<std::string> labels;
    std::vector<int> host_index(a.size(), -1);
    for (int i = 0; i < a.size(); ++i) {
        if (i == pos) continue;
        host_index[i] = static_cast<int>(labels.size());
        labels.push_back(a.label(i));
    }
    std::vector<int> guest_index(b.size(), -1);
    for (int i = 0; i < b.size(); ++i) {
        for (const auto& l : labels)
            if (l == b.label(i)) fail("LabelClash", "leaf '" + b.label(i) + "' already present");
        guest_index[i] = static_cast<int>(labels.size());
        labels.push_back(b.label(i));
    }

    GraftResult out;
    out.leaves = LeafSet(std::move(labels));
    std::vector<std::vector<int>> family;
    std::vector<int> all_guests;
    for (int i = 0; i < b.size(); ++i) all_guests.push_back(guest_index[i]);
    std::sort(all_guests.begin(), all_guests.end());
    for (const auto& m : t.family()) {
        std::vector<int> nm;
        for (int x : m) {
            if (x == pos) {
                nm.insert(nm.end(), all_guests.begin(), all_guests.end());
            } else {
                nm.push_back(host_index[x]);
            }
        }
        std::sort(nm.begin(), nm.end());
        family.push_back(std::move(nm));
    }
    for (const auto& m : s.family()) {
        std::vector<int> nm;
        for (int x : m) nm.push_back(guest_index[x]);
        std::sort(nm.begin(), nm.end());
        family.push_back(std::move(nm));
    }
    out.tree = Tree::validate(out.leaves.size(), std::move(family));
    return out;
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

inline std::string to_dot(const LeafSet& a, const Tree& t, const std::string& name = "tree") {
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n  rankdir=BT;\n";
    os << "  node [shape=point];\n";
    for (std::size_t i = 0; i < t.family().size(); ++i) os << "  v" << i << ";\n";
    for (int i = 0; i < a.size(); ++i)
        os << "  leaf" << i << " [shape=plaintext, label=\"" << a.label(i) << "\"];\n";
    auto member_id = [&](const std::vector<int>& m) {
        for (std::size_t i = 0; i < t.family().size(); ++i)
            if (t.family()[i] == m) return static_cast<int>(i);
        return -1;
    };
    for (std::size_t i = 0; i < t.family().size(); ++i)
        for (const auto& child : t.children(t.family()[i])) {
            if (child.size() == 1) {
                os << "  leaf" << child[0] << " -> v" << i << ";\n";
            } else {
                os << "  v" << member_id(child) << " -> v" << i << ";\n";
            }
        }
    if (t.is_unit() && a.size() == 1) os << "  leaf0;\n";
    os << "}\n";
    return os.str();
}

}  // namespace partree
