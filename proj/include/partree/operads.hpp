#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partree/comparison.hpp"
#include "partree/errors.hpp"
#include "partree/partitions.hpp"
#include "partree/posets.hpp"
#include "partree/simplicial.hpp"
#include "partree/trees.hpp"

// Finite reduced set-operads with their symmetric actions and partial
// compositions, nerves on tree posets, labelled partition complexes with the
// labelled comparison map, and the two bar constructions (the simplicial one
// over the partition lattice and the tree-side suspension of the cofiber).

namespace partree {

// ---------------------------------------------------------------------------
// Operads
// ---------------------------------------------------------------------------

// A reduced operad: O(0) empty, O(1) = {id} (implicit), finite operation sets
// in arities 2..max_arity. The symmetric action is a left action: perm[i] is
// the new name of input i. compose_at substitutes sub_op at input `pos`, the
// result's inputs being 0..pos-1 from op, then sub_op's inputs, then the rest
// of op's inputs shifted up.
class FiniteOperad {
public:
    virtual ~FiniteOperad() = default;

    virtual std::string name() const = 0;
    virtual int max_arity() const = 0;
    virtual int arity_size(int arity) const = 0;  // arity >= 2 only
    virtual std::string op_name(int arity, int op) const = 0;
    virtual int act_impl(int arity, const std::vector<int>& perm, int op) const = 0;
    virtual int compose_impl(int arity, int op, int pos, int sub_arity, int sub_op) const = 0;

    int size(int arity) const {
        if (arity == 1) return 1;
        if (arity < 1 || arity > max_arity())
            fail("ArityOverflow", "arity " + std::to_string(arity) + " exceeds the bound " +
                                      std::to_string(max_arity()) + " of operad '" + name() + "'");
        return arity_size(arity);
    }

    int act(int arity, const std::vector<int>& perm, int op) const {
        if (static_cast<int>(perm.size()) != arity)
            fail("ShapeMismatch", "permutation size disagrees with arity");
        if (arity == 1) return op;
        check_op(arity, op);
        return act_impl(arity, perm, op);
    }

    // Identity-aware partial composition; identities are passed as sub_arity
    // 1, and composing into an identity returns the substituted operation.
    int compose(int arity, int op, int pos, int sub_arity, int sub_op) const {
        if (pos < 0 || pos >= arity) fail("ShapeMismatch", "composition position out of range");
        if (sub_arity == 1) return op;
        check_op(sub_arity, sub_op);
        if (arity == 1) return sub_op;
        check_op(arity, op);
        (void)size(arity + sub_arity - 1);  // the composite must stay within bounds
        return compose_impl(arity, op, pos, sub_arity, sub_op);
    }

private:
    void check_op(int arity, int op) const {
        if (op < 0 || op >= size(arity))
            fail("ElementNotFound", "operation index out of range in arity " +
                                        std::to_string(arity) + " of operad '" + name() + "'");
    }
};

// O(n) a single commutative operation in every arity.
class CommOperad final : public FiniteOperad {
public:
    explicit CommOperad(int max_arity) : max_(max_arity) {}
    std::string name() const override { return "comm"; }
    int max_arity() const override { return max_; }
    int arity_size(int) const override { return 1; }
    std::string op_name(int, int) const override { return "m"; }
    int act_impl(int, const std::vector<int>&, int) const override { return 0; }
    int compose_impl(int, int, int, int, int) const override { return 0; }

private:
    int max_;
};

namespace detail {

inline long factorial(int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline std::vector<int> unrank_permutation(int n, long rank) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> word;
    for (int i = n; i >= 1; --i) {
        const long f = factorial(i - 1);
        const long k = rank / f;
        rank %= f;
        word.push_back(pool[k]);
        pool.erase(pool.begin() + k);
    }
    return word;
}

inline long rank_permutation(const std::vector<int>& word) {
    const int n = static_cast<int>(word.size());
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    long rank = 0;
    for (int i = 0; i < n; ++i) {
        auto it = std::find(pool.begin(), pool.end(), word[i]);
        rank += (it - pool.begin()) * factorial(n - 1 - i);
        pool.erase(it);
    }
    return rank;
}

}  // namespace detail

// O(n) = the n! linear orders in which to multiply the inputs; composition
// substitutes the order of a block for its letter.
class AssocOperad final : public FiniteOperad {
public:
    explicit AssocOperad(int max_arity) : max_(max_arity) {}
    std::string name() const override { return "assoc"; }
    int max_arity() const override { return max_; }
    int arity_size(int arity) const override {
        return static_cast<int>(detail::factorial(arity));
    }
    std::string op_name(int arity, int op) const override {
        const std::vector<int> w = detail::unrank_permutation(arity, op);
        std::ostringstream os;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (arity > 9 && i) os << '.';
            os << w[i] + 1;
        }
        return os.str();
    }
    int act_impl(int arity, const std::vector<int>& perm, int op) const override {
        std::vector<int> w = detail::unrank_permutation(arity, op);
        for (int& x : w) x = perm[x];
        return static_cast<int>(detail::rank_permutation(w));
    }
    int compose_impl(int arity, int op, int pos, int sub_arity, int sub_op) const override {
        const std::vector<int> w = detail::unrank_permutation(arity, op);
        const std::vector<int> u = detail::unrank_permutation(sub_arity, sub_op);
        std::vector<int> out;
        for (int x : w) {
            if (x < pos) {
                out.push_back(x);
            } else if (x == pos) {
                for (int y : u) out.push_back(pos + y);
            } else {
                out.push_back(x + sub_arity - 1);
            }
        }
        return static_cast<int>(detail::rank_permutation(out));
    }

private:
    int max_;
};

inline std::unique_ptr<FiniteOperad> make_comm(int max_arity = 8) {
    return std::make_unique<CommOperad>(max_arity);
}
inline std::unique_ptr<FiniteOperad> make_assoc(int max_arity = 6) {
    return std::make_unique<AssocOperad>(max_arity);
}

// ---------------------------------------------------------------------------
// Operad axioms
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Input relabelling of the composite induced by acting on the outer
// operation: inputs of compose(op, pos, u) to inputs of
// compose(act(sigma, op), sigma[pos], u).
inline std::vector<int> outer_extension(const std::vector<int>& sigma, int pos, int sub_arity) {
    const int k = static_cast<int>(sigma.size());
    std::vector<int> ext(k + sub_arity - 1);
    for (int x = 0; x < k; ++x) {
        const int from = x < pos ? x : (x == pos ? -1 : x + sub_arity - 1);
        if (from < 0) continue;
        const int y = sigma[x];
        ext[from] = y < sigma[pos] ? y : y + sub_arity - 1;
    }
    for (int t = 0; t < sub_arity; ++t) ext[pos + t] = sigma[pos] + t;
    return ext;
}

// Same for acting on the inner operation.
inline std::vector<int> inner_extension(int arity, int pos, const std::vector<int>& pi) {
    const int m = static_cast<int>(pi.size());
    std::vector<int> ext(arity + m - 1);
    for (int x = 0; x < arity + m - 1; ++x) ext[x] = x;
    for (int t = 0; t < m; ++t) ext[pos + t] = pos + pi[t];
    return ext;
}

}  // namespace detail

// Exhaustive validation of the operad axioms for composites within
// `exhaustive_arity_cap`: group actions, associativity of partial composition
// (nested and disjoint), and equivariance on both sides.
inline void validate_operad(const FiniteOperad& o, int exhaustive_arity_cap = 4) {
    const int cap = std::min(exhaustive_arity_cap, o.max_arity());
    // group action
    for (int n = 2; n <= cap; ++n) {
        const auto perms = detail::all_permutations(n);
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        for (int op = 0; op < o.size(n); ++op) {
            if (o.act(n, id, op) != op)
                fail("NotFunctorial", "identity permutation moves an operation");
            for (const auto& s : perms)
                for (const auto& t : perms) {
                    std::vector<int> st(n);
                    for (int i = 0; i < n; ++i) st[i] = s[t[i]];
                    if (o.act(n, st, op) != o.act(n, s, o.act(n, t, op)))
                        fail("NotFunctorial", "symmetric action is not a left action");
                }
        }
    }
    // associativity
    for (int k = 2; k <= cap; ++k)
        for (int m = 2; m <= cap; ++m) {
            if (k + m - 1 > cap) continue;
            for (int r = 2; r <= cap; ++r) {
                if (k + m + r - 2 > cap) continue;
                for (int a = 0; a < o.size(k); ++a)
                    for (int b = 0; b < o.size(m); ++b)
                        for (int c = 0; c < o.size(r); ++c) {
                            for (int j = 0; j < k; ++j) {
                                // nested
                                for (int t = 0; t < m; ++t) {
                                    const int lhs = o.compose(k + m - 1, o.compose(k, a, j, m, b),
                                                              j + t, r, c);
                                    const int rhs =
                                        o.compose(k, a, j, m + r - 1, o.compose(m, b, t, r, c));
                                    if (lhs != rhs)
                                        fail("NotAssociative", "nested composition disagrees");
                                }
                                // disjoint
                                for (int j2 = j + 1; j2 < k; ++j2) {
                                    const int lhs = o.compose(k + m - 1, o.compose(k, a, j, m, b),
                                                              j2 + m - 1, r, c);
                                    const int rhs = o.compose(k + r - 1, o.compose(k, a, j2, r, c),
                                                              j, m, b);
                                    if (lhs != rhs)
                                        fail("NotAssociative", "disjoint composition disagrees");
                                }
                            }
                        }
            }
        }
    // equivariance
    for (int k = 2; k <= cap; ++k)
        for (int m = 2; m <= cap; ++m) {
            if (k + m - 1 > cap) continue;
            const auto perms_k = detail::all_permutations(k);
            const auto perms_m = detail::all_permutations(m);
            for (int a = 0; a < o.size(k); ++a)
                for (int b = 0; b < o.size(m); ++b)
                    for (int j = 0; j < k; ++j) {
                        const int comp = o.compose(k, a, j, m, b);
                        for (const auto& s : perms_k) {
                            const int lhs = o.compose(k, o.act(k, s, a), s[j], m, b);
                            const int rhs =
                                o.act(k + m - 1, detail::outer_extension(s, j, m), comp);
                            if (lhs != rhs) fail("NotEquivariant", "outer equivariance fails");
                        }
                        for (const auto& p : perms_m) {
                            const int lhs = o.compose(k, a, j, m, o.act(m, p, b));
                            const int rhs =
                                o.act(k + m - 1, detail::inner_extension(k, j, p), comp);
                            if (lhs != rhs) fail("NotEquivariant", "inner equivariance fails");
                        }
                    }
        }
    // above the exhaustive cap: spot checks on boundary operations
    for (int k = 2; k <= o.max_arity(); ++k)
        for (int m = 2; m <= o.max_arity(); ++m) {
            if (k + m - 1 <= cap || k + m - 1 > o.max_arity()) continue;
            for (int r = 2; r <= o.max_arity(); ++r) {
                if (k + m + r - 2 > o.max_arity()) continue;
                if (o.size(k) == 0 || o.size(m) == 0 || o.size(r) == 0) continue;
                const std::vector<int> ops_k = {0, o.size(k) - 1};
                const std::vector<int> ops_m = {0, o.size(m) - 1};
                const std::vector<int> ops_r = {0, o.size(r) - 1};
                for (int a : ops_k)
                    for (int b : ops_m)
                        for (int c : ops_r)
                            for (int j : {0, k - 1})
                                for (int t : {0, m - 1}) {
                                    const int lhs = o.compose(
                                        k + m - 1, o.compose(k, a, j, m, b), j + t, r, c);
                                    const int rhs = o.compose(k, a, j, m + r - 1,
                                                              o.compose(m, b, t, r, c));
                                    if (lhs != rhs)
                                        fail("NotAssociative",
                                             "nested composition disagrees above the cap");
                                }
            }
        }
}

// ---------------------------------------------------------------------------
// Canonical transport: composing layered splits
// ---------------------------------------------------------------------------

namespace detail {

// Composes a two-layer split of a block: `middle` lists the intermediate
// blocks in canonical order with op_top labelling the split into them (-1 for
// the identity when there is a single intermediate block), and fine[j] /
// ops_middle[j] describe how middle[j] splits further (-1 again for identity).
// Returns the operation labelling the direct split into all fine blocks, in
// canonical order; -1 when that split has a single output (pure identity).
inline int compose_layers(const FiniteOperad& o, const std::vector<std::vector<int>>& middle,
                          int op_top, const std::vector<std::vector<std::vector<int>>>& fine,
                          const std::vector<int>& ops_middle) {
    const int k = static_cast<int>(middle.size());
    if (k == 1) return ops_middle[0];
    int composite = op_top;
    int arity = k;
    for (int j = k - 1; j >= 0; --j) {
        const int m = static_cast<int>(fine[j].size());
        if (m == 1) continue;
        composite = o.compose(arity, composite, j, m, ops_middle[j]);
        arity += m - 1;
    }
    // transport from the grouped input order to the canonical (sorted-by-min)
    // order of the fine blocks
    std::vector<std::vector<int>> grouped;
    for (const auto& f : fine)
        for (const auto& b : f) grouped.push_back(b);
    std::vector<int> order(grouped.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return grouped[x][0] < grouped[y][0]; });
    std::vector<int> perm(grouped.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) perm[order[rank]] = static_cast<int>(rank);
    return o.act(arity, perm, composite);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Labellings and the nerve
// ---------------------------------------------------------------------------

// A vertex labelling: one operation per family member, in the canonical
// member order of the tree, with arities matching child counts.
using Labelling = std::vector<int>;

inline std::vector<int> member_arities(const Tree& t) {
    std::vector<int> out;
    for (const auto& m : t.family()) out.push_back(static_cast<int>(t.children(m).size()));
    return out;
}

inline std::vector<Labelling> all_labellings(const FiniteOperad& o, const Tree& t) {
    std::vector<int> arities = member_arities(t);
    std::vector<Labelling> out;
    Labelling cur(arities.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t at) {
        if (at == arities.size()) {
            out.push_back(cur);
            return;
        }
        for (int op = 0; op < o.size(arities[at]); ++op) {
            cur[at] = op;
            rec(at + 1);
        }
    };
    rec(0);
    return out;
}

inline std::string labelling_name(const FiniteOperad& o, const Tree& t, const Labelling& l) {
    std::vector<int> arities = member_arities(t);
    std::ostringstream os;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (i) os << ',';
        os << o.op_name(arities[i], l[i]);
    }
    return os.str();
}

namespace detail {

// Contracts the member at index mi (never the root) into its parent,
// composing the labels through the operad.
inline std::pair<Tree, Labelling> contract_member(const FiniteOperad& o, const Tree& t,
                                                  const Labelling& l, int mi) {
    const std::vector<int>& member = t.family()[mi];
    // parent: the smallest member properly containing it
    int parent = -1;
    for (std::size_t i = 0; i < t.family().size(); ++i) {
        if (static_cast<int>(i) == mi) continue;
        if (!Tree::contains(t.family()[i], member)) continue;
        if (parent < 0 || Tree::contains(t.family()[parent], t.family()[i]))
            parent = static_cast<int>(i);
    }
    if (parent < 0) fail("MissingRoot", "cannot contract the root");

    const auto parent_children = t.children(t.family()[parent]);
    const auto member_children = t.children(member);
    const int k = static_cast<int>(parent_children.size());
    std::vector<std::vector<std::vector<int>>> fine(k);
    std::vector<int> ops_middle(k, -1);
    for (int j = 0; j < k; ++j) {
        if (parent_children[j] == member) {
            fine[j] = member_children;
            ops_middle[j] = l[mi];
        } else {
            fine[j] = {parent_children[j]};
        }
    }
    const int new_op = detail::compose_layers(o, parent_children, l[parent], fine, ops_middle);

    std::vector<std::vector<int>> family;
    for (std::size_t i = 0; i < t.family().size(); ++i)
        if (static_cast<int>(i) != mi) family.push_back(t.family()[i]);
    Tree reduced = Tree::validate(t.leaf_count(), std::move(family));

    Labelling out(reduced.family().size(), -1);
    for (std::size_t i = 0; i < reduced.family().size(); ++i) {
        const auto& m = reduced.family()[i];
        if (m == t.family()[parent]) {
            out[i] = new_op;
            continue;
        }
        for (std::size_t j = 0; j < t.family().size(); ++j)
            if (t.family()[j] == m) {
                out[i] = l[j];
                break;
            }
    }
    return {std::move(reduced), std::move(out)};
}

}  // namespace detail

// Restriction of a labelling along family(s) <= family(t): contracts the
// extra inner edges one at a time (the order is immaterial; validated by the
// presheaf axioms and the functoriality tests).
inline Labelling restrict_labelling(const FiniteOperad& o, const Tree& t, const Labelling& l,
                                    const Tree& s) {
    Tree cur = t;
    Labelling lab = l;
    for (;;) {
        int extra = -1;
        for (std::size_t i = 0; i < cur.family().size(); ++i)
            if (!s.has_member(cur.family()[i])) {
                extra = static_cast<int>(i);
                break;
            }
        if (extra < 0) break;
        auto [next_tree, next_lab] = detail::contract_member(o, cur, lab, extra);
        cur = std::move(next_tree);
        lab = std::move(next_lab);
    }
    if (!(cur == s)) fail("ElementNotFound", "restriction target is not below the source tree");
    return lab;
}

// The nerve presheaf on a tree poset: labellings restricted along edge
// contraction.
inline Presheaf nerve(const FiniteOperad& o, const LeafSet& a, const TreePosetResult& tp) {
    for (const auto& t : tp.trees)
        if (t.leaf_count() != a.size())
            fail("LeafSetMismatch", "tree poset does not live on this leaf set");
    Presheaf f;
    std::vector<std::vector<Labelling>> labellings;
    std::vector<std::map<Labelling, int>> index;
    for (const auto& t : tp.trees) {
        auto ls = all_labellings(o, t);
        std::map<Labelling, int> idx;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            idx[ls[i]] = static_cast<int>(i);
            names.push_back(labelling_name(o, t, ls[i]));
        }
        f.sets.push_back(std::move(names));
        labellings.push_back(std::move(ls));
        index.push_back(std::move(idx));
    }
    for (int p = 0; p < tp.poset.size(); ++p)
        for (int q = 0; q < tp.poset.size(); ++q) {
            if (!tp.poset.leq(p, q)) continue;
            std::vector<int> r;
            for (const auto& l : labellings[q]) {
                Labelling restricted = restrict_labelling(o, tp.trees[q], l, tp.trees[p]);
                r.push_back(index[p].at(restricted));
            }
            f.restriction[{p, q}] = std::move(r);
        }
    f.validate(tp.poset);
    return f;
}

// ---------------------------------------------------------------------------
// Labelled partition complexes and the labelled comparison
// ---------------------------------------------------------------------------

struct LabelledComplex {
    SimplicialSet complex;  // simplices: (chain, labelling of phi(chain))
    Poset sd;               // nondegenerate simplices under the face relation
    ElementsPoset target;   // elements of the nerve over T+(A)
    MonotoneMap comparison;  // (chain, labelling) -> (phi(chain), labelling)
};

inline LabelledComplex labelled_complex(const FiniteOperad& o, const LeafSet& a) {
    LabelledComplex out;
    PartitionComplex pc = build_partition_complex(a);
    TreePosetResult tp = enumerate_trees(a, false);
    Presheaf f = nerve(o, a, tp);
    out.target = elements_poset(tp.poset, f);

    std::map<std::string, int> tree_index;
    for (std::size_t i = 0; i < tp.trees.size(); ++i)
        tree_index[tp.trees[i].to_string(a)] = static_cast<int>(i);

    // tree of every chain of NP(A)
    std::vector<std::vector<int>> tree_of(pc.chains.size());
    for (std::size_t d = 0; d < pc.chains.size(); ++d) {
        tree_of[d].resize(pc.chains[d].size());
        for (std::size_t i = 0; i < pc.chains[d].size(); ++i)
            tree_of[d][i] = tree_index.at(phi_of_indices(pc, pc.chains[d][i]).to_string(a));
    }
    auto chain_position = [&](std::size_t d, const std::vector<int>& ch) {
        const auto& list = pc.chains[d];
        return static_cast<int>(std::lower_bound(list.begin(), list.end(), ch) - list.begin());
    };

    // simplices: (chain, labelling index); faces restrict the labelling
    std::vector<std::vector<Simplex>> cells(pc.chains.size());
    std::vector<std::map<std::pair<std::vector<int>, int>, int>> ids(pc.chains.size());
    std::vector<std::vector<std::pair<std::vector<int>, int>>> flat(pc.chains.size());
    for (std::size_t d = 0; d < pc.chains.size(); ++d) {
        for (std::size_t i = 0; i < pc.chains[d].size(); ++i) {
            const int ti = tree_of[d][i];
            for (int x = 0; x < static_cast<int>(f.sets[ti].size()); ++x) {
                Simplex s;
                s.label = chain_label(pc.poset, pc.chains[d][i]) + " | " + f.sets[ti][x];
                if (d > 0) {
                    for (std::size_t kk = 0; kk <= d; ++kk) {
                        std::vector<int> face = pc.chains[d][i];
                        face.erase(face.begin() + static_cast<long>(kk));
                        const int fi = chain_position(d - 1, face);
                        const int fx = f.restr(tree_of[d - 1][fi], ti)[x];
                        s.faces.push_back({ids[d - 1].at({face, fx}), false});
                    }
                }
                ids[d][{pc.chains[d][i], x}] = static_cast<int>(cells[d].size());
                flat[d].push_back({pc.chains[d][i], x});
                cells[d].push_back(std::move(s));
            }
        }
    }
    out.complex = SimplicialSet::build(std::move(cells));

    // the poset of nondegenerate simplices under the face relation:
    // (tau, y) <= (sigma, x) iff tau is a subchain of sigma and x restricts
    // to y along phi(tau) <= phi(sigma)
    std::vector<std::string> labels;
    std::vector<std::tuple<std::vector<int>, int, int>> elems;  // sorted chain, tree, labelling
    for (std::size_t d = 0; d < flat.size(); ++d)
        for (std::size_t i = 0; i < flat[d].size(); ++i) {
            labels.push_back(
                "[" + out.complex.simplex(static_cast<int>(d), static_cast<int>(i)).label + "]");
            std::vector<int> sorted = flat[d][i].first;
            std::sort(sorted.begin(), sorted.end());
            const int ti = tree_of[d][chain_position(d, flat[d][i].first)];
            elems.push_back({std::move(sorted), ti, flat[d][i].second});
        }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& [ci, ti, xi] = elems[i];
            const auto& [cj, tj, xj] = elems[j];
            if (!std::includes(cj.begin(), cj.end(), ci.begin(), ci.end())) continue;
            leq[i][j] = (f.restr(ti, tj)[xj] == xi);
        }
    out.sd = Poset::from_leq_matrix(std::move(labels), std::move(leq));

    // comparison into the elements poset
    std::vector<int> offset(tp.trees.size() + 1, 0);
    for (std::size_t i = 0; i < tp.trees.size(); ++i)
        offset[i + 1] = offset[i] + static_cast<int>(f.sets[i].size());
    std::vector<int> assignment;
    for (const auto& [chain, ti, x] : elems) assignment.push_back(offset[ti] + x);
    out.comparison = MonotoneMap::build(out.sd, out.target.poset, std::move(assignment));
    return out;
}

inline InitialityReport verify_labelled_comparison(const FiniteOperad& o, const LeafSet& a) {
    return check_homotopy_initial(labelled_complex(o, a).comparison);
}

// ---------------------------------------------------------------------------
// Bar constructions
// ---------------------------------------------------------------------------

namespace detail {

struct BarBasis {
    // generator: strict chain bottom..top through the full partition lattice
    // plus one operation per splitting block, layer by layer
    std::vector<std::vector<int>> chains;                   // per generator: partition indices
    std::vector<std::vector<int>> ops;                      // per generator: slot values
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> index;
};

// Slots of a chain: for every layer i >= 1 and block B of chain[i-1] split by
// chain[i] into >= 2 parts, in (layer, block) order.
struct BarSlot {
    int layer;                      // 1-based layer
    std::vector<int> block;         // the splitting block of chain[i-1]
    std::vector<std::vector<int>> parts;  // its parts in chain[i], canonical order
};

inline std::vector<BarSlot> bar_slots(const std::vector<Partition>& all,
                                      const std::vector<int>& chain) {
    std::vector<BarSlot> slots;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const Partition& coarse = all[chain[i - 1]];
        const Partition& fine = all[chain[i]];
        const std::vector<int> of = coarse.block_of_leaf();
        for (int b = 0; b < coarse.block_count(); ++b) {
            std::vector<std::vector<int>> parts;
            for (const auto& fb : fine.blocks())
                if (of[fb[0]] == b) parts.push_back(fb);
            if (parts.size() >= 2)
                slots.push_back({static_cast<int>(i), coarse.blocks()[b], std::move(parts)});
        }
    }
    return slots;
}

}  // namespace detail

// The normalized simplicial bar construction over the partition lattice:
// degree-p basis = strict chains bottom = c_0 < ... < c_p = top with a label
// per splitting block; inner faces compose layers through the operad and the
// outer faces vanish.
inline ChainComplex bar_complex(const FiniteOperad& o, const LeafSet& a,
                                Ring ring = Ring::integers) {
    const std::vector<Partition> all = all_partitions(a, false);
    int bottom = -1, top = -1;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].is_indiscrete()) bottom = static_cast<int>(i);
        if (all[i].is_discrete()) top = static_cast<int>(i);
    }

    // strict chains from bottom to top, grouped by length
    std::vector<std::vector<std::vector<int>>> chains_by_len;
    std::vector<int> cur = {bottom};
    std::function<void()> rec = [&]() {
        const int last = cur.back();
        if (last == top) {
            const std::size_t p = cur.size() - 1;
            if (chains_by_len.size() <= p) chains_by_len.resize(p + 1);
            chains_by_len[p].push_back(cur);
            return;
        }
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (static_cast<int>(j) == last) continue;
            if (!partition_leq(all[last], all[j]) || all[last] == all[j]) continue;
            cur.push_back(static_cast<int>(j));
            rec();
            cur.pop_back();
        }
    };
    rec();

    const int top_degree = static_cast<int>(chains_by_len.size()) - 1;
    std::vector<detail::BarBasis> basis(top_degree + 1);
    for (int p = 0; p <= top_degree; ++p) {
        for (const auto& ch : chains_by_len[p]) {
            auto slots = detail::bar_slots(all, ch);
            std::vector<int> ops(slots.size(), 0);
            std::function<void(std::size_t)> fill = [&](std::size_t at) {
                if (at == slots.size()) {
                    basis[p].index[{ch, ops}] = static_cast<int>(basis[p].chains.size());
                    basis[p].chains.push_back(ch);
                    basis[p].ops.push_back(ops);
                    return;
                }
                for (int op = 0; op < o.size(static_cast<int>(slots[at].parts.size())); ++op) {
                    ops[at] = op;
                    fill(at + 1);
                }
            };
            fill(0);
        }
    }

    ChainComplex c;
    c.ring = ring;
    c.dims.resize(top_degree + 1);
    c.boundary.resize(top_degree + 1);
    for (int p = 0; p <= top_degree; ++p) c.dims[p] = static_cast<long>(basis[p].chains.size());

    for (int p = 1; p <= top_degree; ++p) {
        smith::SparseMat b(static_cast<int>(c.dims[p - 1]), static_cast<int>(c.dims[p]));
        for (int g = 0; g < static_cast<int>(basis[p].chains.size()); ++g) {
            const auto& ch = basis[p].chains[g];
            const auto& ops = basis[p].ops[g];
            const auto slots = detail::bar_slots(all, ch);
            auto slot_op = [&](int layer, const std::vector<int>& block) {
                for (std::size_t s = 0; s < slots.size(); ++s)
                    if (slots[s].layer == layer && slots[s].block == block)
                        return ops[s];
                return -1;  // unsplit block: identity
            };
            for (int i = 1; i <= p - 1; ++i) {
                // remove chain[i]; compose layers i and i+1
                std::vector<int> reduced = ch;
                reduced.erase(reduced.begin() + i);
                auto new_slots = detail::bar_slots(all, reduced);
                std::vector<int> new_ops(new_slots.size(), -1);
                const Partition& mid = all[ch[i]];
                for (std::size_t s = 0; s < new_slots.size(); ++s) {
                    if (new_slots[s].layer != i) {
                        const int shifted = new_slots[s].layer < i ? new_slots[s].layer
                                                                   : new_slots[s].layer + 1;
                        new_ops[s] = slot_op(shifted, new_slots[s].block);
                        continue;
                    }
                    // merged layer: split of new_slots[s].block of c_{i-1}
                    // through mid into c_{i+1}
                    const auto& block = new_slots[s].block;
                    std::vector<std::vector<int>> middle;
                    for (const auto& mb : mid.blocks())
                        if (Tree::contains(block, mb)) middle.push_back(mb);
                    std::vector<std::vector<std::vector<int>>> fine(middle.size());
                    std::vector<int> ops_mid(middle.size(), -1);
                    for (std::size_t mi = 0; mi < middle.size(); ++mi) {
                        for (const auto& fb : new_slots[s].parts)
                            if (Tree::contains(middle[mi], fb)) fine[mi].push_back(fb);
                        ops_mid[mi] = slot_op(i + 1, middle[mi]);
                        if (ops_mid[mi] < 0 && fine[mi].size() >= 2)
                            fail("Internal", "missing label on a split block");
                    }
                    const int op_top = slot_op(i, block);
                    if (static_cast<int>(middle.size()) >= 2 && op_top < 0)
                        fail("Internal", "missing label on a split block");
                    new_ops[s] = detail::compose_layers(o, middle, op_top, fine, ops_mid);
                }
                auto it = basis[p - 1].index.find({reduced, new_ops});
                if (it == basis[p - 1].index.end())
                    fail("Internal", "bar face left the basis");
                b.add(it->second, g, (i % 2 == 0) ? 1 : -1);
            }
        }
        c.boundary[p] = std::move(b);
    }
    c.validate();
    return c;
}

// The tree-side bar model: order complexes of the categories of elements of
// the nerve over T+(A) and T(A), the inclusion-induced chain map, its mapping
// cone, and a degree shift for the suspension.
inline ChainComplex tree_bar_complex(const FiniteOperad& o, const LeafSet& a,
                                     Ring ring = Ring::integers) {
    TreePosetResult tp_full = enumerate_trees(a, true);
    TreePosetResult tp_plus = enumerate_trees(a, false);
    Presheaf nerve_full = nerve(o, a, tp_full);
    Presheaf nerve_plus = nerve(o, a, tp_plus);
    ElementsPoset e_full = elements_poset(tp_full.poset, nerve_full);
    ElementsPoset e_plus = elements_poset(tp_plus.poset, nerve_plus);
    SimplicialSet oc_full = order_complex(e_full.poset);
    SimplicialSet oc_plus = order_complex(e_plus.poset);
    ChainComplex c_plus = normalized_chain_complex(oc_plus, ring, false);
    ChainComplex c_full = normalized_chain_complex(oc_full, ring, false);
    ChainMap inc = oc_plus.empty()
                       ? ChainMap{}
                       : chain_map_from_inclusion(oc_plus, oc_full);
    ChainComplex cone = mapping_cone(c_plus, c_full, inc);
    return shift_up(cone);
}

struct BarCompareReport {
    std::string operad;
    int n = 0;
    HomologyResult bar_z, tree_z, bar_q, tree_q;
    bool pass_z = false, pass_q = false, pass = false;
};

// Homology tables of the two bar models over Z and over Q; passes iff they
// agree degree by degree (Betti numbers and torsion).
inline BarCompareReport compare_bars(const FiniteOperad& o, const LeafSet& a) {
    BarCompareReport rep;
    rep.operad = o.name();
    rep.n = a.size();
    rep.bar_z = homology(bar_complex(o, a, Ring::integers));
    rep.tree_z = homology(tree_bar_complex(o, a, Ring::integers));
    rep.bar_q = homology(bar_complex(o, a, Ring::rationals));
    rep.tree_q = homology(tree_bar_complex(o, a, Ring::rationals));
    rep.pass_z = same_homology(rep.bar_z, rep.tree_z);
    rep.pass_q = same_homology(rep.bar_q, rep.tree_q);
    rep.pass = rep.pass_z && rep.pass_q;
    return rep;
}

}  // namespace partree
