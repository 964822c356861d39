#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partree/errors.hpp"
#include "partree/parallel.hpp"
#include "partree/partitions.hpp"
#include "partree/posets.hpp"
#include "partree/simplicial.hpp"
#include "partree/trees.hpp"

// The comparison between the partition complex NP(A) and the tree poset
// T+(A): the layer-forgetting projection phi, elementary layerings from
// linear extensions, the subcomplexes L(T) and L^v(T), explicit cone
// witnesses for the contractibility argument, the full per-tree verification
// campaign, and the last-element projection zeta.

namespace partree {

// ---------------------------------------------------------------------------
// The partition complex bundle
// ---------------------------------------------------------------------------

// NP(A) with everything downstream code needs: the nontrivial partitions in
// enumeration order, the refinement poset, its order complex, and the chain
// underlying every nondegenerate simplex.
struct PartitionComplex {
    LeafSet leaves;
    std::vector<Partition> partitions;  // poset element i <-> partitions[i]
    Poset poset;
    SimplicialSet nerve;
    std::vector<std::vector<std::vector<int>>> chains;  // chains[d][i]: poset indices

    int find_partition(const Partition& p) const {
        auto it = by_rgs.find(p.rgs());
        return it == by_rgs.end() ? -1 : it->second;
    }

    std::map<std::vector<int>, int> by_rgs;
};

inline PartitionComplex build_partition_complex(const LeafSet& a) {
    PartitionComplex pc;
    pc.leaves = a;
    pc.partitions = all_partitions(a, true);
    pc.poset = partition_poset(a);
    pc.chains = all_chains(pc.poset);
    pc.nerve = order_complex(pc.poset);
    for (std::size_t i = 0; i < pc.partitions.size(); ++i)
        pc.by_rgs[pc.partitions[i].rgs()] = static_cast<int>(i);
    // all_chains drives order_complex, so cells and chains align; keep the
    // coupling honest with a spot check.
    for (std::size_t d = 0; d < pc.chains.size(); ++d)
        if (pc.nerve.size(static_cast<int>(d)) != static_cast<int>(pc.chains[d].size()))
            fail("Internal", "order complex misaligned with chain enumeration");
    return pc;
}

// ---------------------------------------------------------------------------
// phi: forget layers, delete unary vertices
// ---------------------------------------------------------------------------

// The tree whose members are A together with every block of size >= 2
// appearing in the chain.
inline Tree phi(const LeafSet& a, const Chain& c) {
    std::set<std::vector<int>> members;
    std::vector<int> root(a.size());
    std::iota(root.begin(), root.end(), 0);
    members.insert(root);
    for (const auto& p : c.elems())
        for (const auto& b : p.nonsingleton_blocks()) members.insert(b);
    return Tree::validate(a.size(), {members.begin(), members.end()});
}

inline Tree phi_of_indices(const PartitionComplex& pc, const std::vector<int>& chain) {
    std::set<std::vector<int>> members;
    std::vector<int> root(pc.leaves.size());
    std::iota(root.begin(), root.end(), 0);
    members.insert(root);
    for (int p : chain)
        for (const auto& b : pc.partitions[p].nonsingleton_blocks()) members.insert(b);
    return Tree::validate(pc.leaves.size(), {members.begin(), members.end()});
}

// ---------------------------------------------------------------------------
// Elementary layerings
// ---------------------------------------------------------------------------

struct Layering {
    Chain chain;
    Tree tree;       // phi of the chain
    bool elementary = true;
    std::vector<std::vector<int>> extension;  // vertex order, root first
};

// The vertex family of T ordered by reverse inclusion (root first).
inline Poset vertex_poset(const LeafSet& a, const Tree& t) {
    std::vector<std::string> labels;
    for (const auto& m : t.family()) labels.push_back(block_to_string(a, m));
    const int k = t.vertex_count();
    std::vector<std::vector<bool>> leq(k, std::vector<bool>(k, false));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) leq[i][j] = Tree::contains(t.family()[i], t.family()[j]);
    return Poset::from_leq_matrix(std::move(labels), std::move(leq));
}

namespace detail {

// Layer i of the extension S_1 = A, S_2, ..., S_k: blocks are the members of
// {S_{i+2}, ..., S_k} that are maximal in that suffix, padded by singletons.
inline Partition extension_layer(int leaf_count, const std::vector<std::vector<int>>& members,
                                 const std::vector<int>& ext, int i) {
    std::vector<int> suffix(ext.begin() + i + 1, ext.end());
    std::vector<std::vector<int>> blocks;
    std::vector<bool> covered(leaf_count, false);
    for (int s : suffix) {
        bool maximal = true;
        for (int other : suffix)
            if (other != s && Tree::contains(members[other], members[s]) &&
                members[other] != members[s]) {
                maximal = false;
                break;
            }
        if (!maximal) continue;
        blocks.push_back(members[s]);
        for (int x : members[s]) covered[x] = true;
    }
    for (int x = 0; x < leaf_count; ++x)
        if (!covered[x]) blocks.push_back({x});
    return Partition::from_blocks(leaf_count, std::move(blocks));
}

}  // namespace detail

// One elementary layering per linear extension of the vertex family; each is
// checked to be elementary with phi giving back the tree.
inline std::vector<Layering> elementary_layerings(const LeafSet& a, const Tree& t) {
    if (t.leaf_count() != a.size()) fail("LeafSetMismatch", "tree does not live on this leaf set");
    if (t.is_corolla() || t.is_unit())
        fail("NotInTPlus", "elementary layerings need a tree with an inner edge");
    Poset vp = vertex_poset(a, t);
    std::vector<Layering> out;
    for (const auto& ext : linear_extensions(vp)) {
        const int k = static_cast<int>(ext.size());
        std::vector<Partition> elems;
        for (int i = 0; i + 2 <= k; ++i)
            elems.push_back(detail::extension_layer(a.size(), t.family(), ext, i));
        Layering lay;
        lay.chain = Chain::build(std::move(elems));
        lay.tree = phi(a, lay.chain);
        lay.elementary = is_elementary(lay.chain);
        for (int e : ext) lay.extension.push_back(t.family()[e]);
        if (!(lay.tree == t) || !lay.elementary || lay.chain.length() != t.vertex_count() - 2)
            fail("Internal", "layering construction failed for " + t.to_string(a));
        out.push_back(std::move(lay));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The subcomplexes L(T) and L^v(T)
// ---------------------------------------------------------------------------

// A subcomplex of the partition complex, carrying the chains behind its
// simplices. Labels agree with the ambient nerve.
struct ChainSubcomplex {
    SimplicialSet complex;
    std::vector<std::vector<std::vector<int>>> chains;

    bool has_chain(int dim, const std::vector<int>& chain) const {
        if (dim < 0 || dim >= static_cast<int>(chains.size())) return false;
        return std::binary_search(chains[dim].begin(), chains[dim].end(), chain);
    }
};

namespace detail {

// Assembles the full subcomplex on the chains selected by `keep`; the
// selection must be closed under faces.
template <class Pred>
ChainSubcomplex subcomplex_where(const PartitionComplex& pc, Pred keep) {
    ChainSubcomplex out;
    out.chains.resize(pc.chains.size());
    std::vector<std::map<std::vector<int>, int>> ids(pc.chains.size());
    for (std::size_t d = 0; d < pc.chains.size(); ++d)
        for (const auto& ch : pc.chains[d])
            if (keep(static_cast<int>(d), ch)) {
                ids[d][ch] = static_cast<int>(out.chains[d].size());
                out.chains[d].push_back(ch);
            }
    std::vector<std::vector<Simplex>> cells(out.chains.size());
    for (std::size_t d = 0; d < out.chains.size(); ++d) {
        for (const auto& ch : out.chains[d]) {
            Simplex s;
            s.label = chain_label(pc.poset, ch);
            if (d > 0) {
                for (std::size_t i = 0; i <= d; ++i) {
                    std::vector<int> face = ch;
                    face.erase(face.begin() + static_cast<long>(i));
                    auto it = ids[d - 1].find(face);
                    if (it == ids[d - 1].end())
                        fail("Internal", "subcomplex selection not closed under faces at '" +
                                             s.label + "'");
                    s.faces.push_back({it->second, false});
                }
            }
            cells[d].push_back(std::move(s));
        }
    }
    out.complex = SimplicialSet::build(std::move(cells));
    return out;
}

}  // namespace detail

// L(T): the full subcomplex of NP(A) on chains whose size->=2 blocks all come
// from the family of T. L(corolla) is empty by convention.
inline ChainSubcomplex layering_complex(const PartitionComplex& pc, const Tree& t) {
    if (t.leaf_count() != pc.leaves.size())
        fail("LeafSetMismatch", "tree does not live on this leaf set");
    if (t.is_corolla()) return {};
    std::vector<char> part_ok(pc.partitions.size(), 0);
    for (std::size_t i = 0; i < pc.partitions.size(); ++i) {
        bool ok = true;
        for (const auto& b : pc.partitions[i].nonsingleton_blocks())
            if (!t.has_member(b)) {
                ok = false;
                break;
            }
        part_ok[i] = ok ? 1 : 0;
    }
    return detail::subcomplex_where(pc, [&](int, const std::vector<int>& ch) {
        for (int p : ch)
            if (!part_ok[p]) return false;
        return true;
    });
}

namespace detail {

// All faces (nonempty subchains) of the given layerings, keyed per dimension.
inline std::vector<std::set<std::vector<int>>> face_closure(
    const std::vector<std::vector<int>>& top_chains) {
    std::vector<std::set<std::vector<int>>> out;
    for (const auto& top : top_chains) {
        const int n = static_cast<int>(top.size());
        for (int mask = 1; mask < (1 << n); ++mask) {
            std::vector<int> sub;
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) sub.push_back(top[i]);
            if (static_cast<int>(out.size()) < static_cast<int>(sub.size())) out.resize(sub.size());
            out[sub.size() - 1].insert(sub);
        }
    }
    return out;
}

inline std::vector<int> chain_to_indices(const PartitionComplex& pc, const Chain& c) {
    std::vector<int> out;
    for (const auto& p : c.elems()) {
        int i = pc.find_partition(p);
        if (i < 0) fail("Internal", "chain entry missing from the partition complex");
        out.push_back(i);
    }
    return out;
}

}  // namespace detail

// L^v(T): faces of the elementary layerings whose linear extension ends at v.
inline ChainSubcomplex layering_complex_top(const PartitionComplex& pc, const Tree& t,
                                            const std::vector<int>& v) {
    std::vector<int> vs = v;
    std::sort(vs.begin(), vs.end());
    auto lv = t.leaf_vertex_members();
    if (std::find(lv.begin(), lv.end(), vs) == lv.end())
        fail("NotLeafVertex", "top vertex must be a leaf vertex");
    std::vector<std::vector<int>> tops;
    for (const auto& lay : elementary_layerings(pc.leaves, t))
        if (lay.extension.back() == vs) tops.push_back(detail::chain_to_indices(pc, lay.chain));
    auto closure = detail::face_closure(tops);
    return detail::subcomplex_where(pc, [&](int d, const std::vector<int>& ch) {
        return d < static_cast<int>(closure.size()) && closure[d].count(ch) > 0;
    });
}

// ---------------------------------------------------------------------------
// Cone witnesses
// ---------------------------------------------------------------------------

struct ConeWitness {
    SimplicialSet domain;  // cone(L(prune(T, W)))
    SimplicialSet target;  // intersection of the L^v(T), v in W
    SimplicialMap map;
    bool ok = false;
    std::string detail;
};

// Builds the explicit identification of the intersection of the L^v(T) with
// the cone on L of the pruned tree: a chain of the pruned leaf set maps to
// the chain over A obtained by expanding each marker back to its block, and
// the apex maps to the vertex whose partition has exactly the members of W as
// non-singleton blocks.
inline ConeWitness cone_witness(const PartitionComplex& pc, const Tree& t,
                                const std::vector<std::vector<int>>& w) {
    if (t.is_corolla() || t.is_unit()) fail("NotInTPlus", "cone witnesses need an inner edge");
    ConeWitness out;

    PruneResult pruned = prune(pc.leaves, t, w);

    // normalize W for labels and the apex partition
    std::vector<std::vector<int>> ws = w;
    for (auto& m : ws) std::sort(m.begin(), m.end());
    std::sort(ws.begin(), ws.end(), Tree::member_less);

    // target: intersection of the L^v(T)
    std::vector<ChainSubcomplex> tops;
    for (const auto& v : ws) tops.push_back(layering_complex_top(pc, t, v));
    ChainSubcomplex inter = detail::subcomplex_where(pc, [&](int d, const std::vector<int>& ch) {
        for (const auto& sc : tops)
            if (!sc.has_chain(d, ch)) return false;
        return true;
    });
    out.target = inter.complex;

    // domain: cone on L(T') over the pruned leaf set
    ChainSubcomplex base;
    PartitionComplex inner_pc;
    const bool base_empty = pruned.tree.is_corolla() || pruned.tree.is_unit();
    if (!base_empty) {
        inner_pc = build_partition_complex(pruned.leaves);
        base = layering_complex(inner_pc, pruned.tree);
    }
    ConeResult cone_res = cone(base.complex, "apex");
    out.domain = cone_res.cone;

    // the apex image: members of W as blocks, everything else singletons
    std::vector<std::vector<int>> apex_blocks = ws;
    {
        std::vector<bool> covered(pc.leaves.size(), false);
        for (const auto& m : ws)
            for (int x : m) covered[x] = true;
        for (int x = 0; x < pc.leaves.size(); ++x)
            if (!covered[x]) apex_blocks.push_back({x});
    }
    const int omega = pc.find_partition(Partition::from_blocks(pc.leaves.size(), apex_blocks));
    if (omega < 0) {
        out.detail = "apex partition is not a nontrivial partition";
        return out;
    }

    auto expand_partition = [&](int inner_index) {
        std::vector<std::vector<int>> blocks;
        for (const auto& b : inner_pc.partitions[inner_index].blocks()) {
            std::vector<int> eb;
            for (int x : b)
                for (int orig : pruned.expansion[x]) eb.push_back(orig);
            std::sort(eb.begin(), eb.end());
            blocks.push_back(std::move(eb));
        }
        return pc.find_partition(Partition::from_blocks(pc.leaves.size(), blocks));
    };

    auto lookup = [&](int dim, const std::vector<int>& chain) {
        const std::string label = chain_label(pc.poset, chain);
        const int idx = inter.complex.find(dim, label);
        if (idx < 0)
            out.detail = "image '" + label + "' missing from the intersection in dimension " +
                         std::to_string(dim);
        return idx;
    };

    SimplicialMap m;
    m.images.resize(std::max(out.domain.dimension() + 1, 1));
    bool all_found = true;
    for (int d = 0; d <= out.domain.dimension() && all_found; ++d) {
        const int base_count = base.complex.size(d);
        m.images[d].resize(out.domain.size(d));
        for (int i = 0; i < out.domain.size(d) && all_found; ++i) {
            std::vector<int> image_chain;
            if (i < base_count) {
                for (int p : base.chains[d][i]) image_chain.push_back(expand_partition(p));
            } else if (d == 0) {
                image_chain = {omega};  // the apex
            } else {
                const auto& below = base.chains[d - 1][i - base_count];
                for (int p : below) image_chain.push_back(expand_partition(p));
                image_chain.push_back(omega);
            }
            if (std::find(image_chain.begin(), image_chain.end(), -1) != image_chain.end()) {
                out.detail = "expansion left the partition complex";
                all_found = false;
                break;
            }
            const int idx = lookup(d, image_chain);
            if (idx < 0) {
                all_found = false;
                break;
            }
            m.images[d][i] = {idx, false};
        }
    }
    out.map = std::move(m);
    if (!all_found) return out;

    IsoCheckResult iso = check_simplicial_iso(out.domain, out.target, out.map);
    out.ok = iso.ok;
    if (!iso.ok) out.detail = iso.detail;
    return out;
}

// ---------------------------------------------------------------------------
// Per-tree verification and the campaign
// ---------------------------------------------------------------------------

struct ConeSubsetCheck {
    std::string subset;
    bool ok = false;
    std::string detail;
};

struct TreeCheck {
    std::string tree;
    bool cover_ok = false;
    std::vector<ConeSubsetCheck> cone_ok;
    HomologyResult homology;  // reduced homology of L(T)
    bool homology_zero = false;
    bool slice_match = false;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    int max_cone_subset = 0;  // 0: all nonempty subsets of leaf vertices
    int jobs = 1;
    int inject_fault_item = -1;  // test hook: corrupt this item's cover data
    std::string start_after;     // resume: skip items with keys <= this
};

// The slice of the layer-forgetting projection over T, in the subdivision
// model: the poset of chains of L(T) under the face (subchain) relation.
inline Poset sd_slice_poset(const PartitionComplex& pc, const ChainSubcomplex& l) {
    std::vector<std::vector<int>> elems;  // sorted-index chains
    std::vector<std::string> labels;
    for (std::size_t d = 0; d < l.chains.size(); ++d)
        for (const auto& ch : l.chains[d]) {
            labels.push_back("[" + chain_label(pc.poset, ch) + "]");
            std::vector<int> sorted = ch;
            std::sort(sorted.begin(), sorted.end());
            elems.push_back(std::move(sorted));
        }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            leq[i][j] = std::includes(elems[j].begin(), elems[j].end(), elems[i].begin(),
                                      elems[i].end());
    return Poset::from_leq_matrix(std::move(labels), std::move(leq));
}

inline TreeCheck verify_tree(const PartitionComplex& pc, const Tree& t,
                             const VerifyOptions& opt = {}, bool inject_fault = false) {
    TreeCheck check;
    check.tree = t.to_string(pc.leaves);
    ChainSubcomplex l = layering_complex(pc, t);

    // (i) cover: the union of the L^v equals L and every maximal simplex of L
    // lies in some L^v.
    auto lv = t.leaf_vertex_members();
    std::vector<ChainSubcomplex> tops;
    for (const auto& v : lv) tops.push_back(layering_complex_top(pc, t, v));

    bool cover_ok = true;
    std::string cover_detail;
    std::set<std::pair<int, std::vector<int>>> union_chains;
    for (const auto& sc : tops)
        for (std::size_t d = 0; d < sc.chains.size(); ++d)
            for (const auto& ch : sc.chains[d]) {
                union_chains.insert({static_cast<int>(d), ch});
                if (!l.has_chain(static_cast<int>(d), ch)) {
                    cover_ok = false;
                    cover_detail = "'" + chain_label(pc.poset, ch) + "' lies outside L(T)";
                }
            }
    if (inject_fault && !union_chains.empty()) {
        union_chains.erase(std::prev(union_chains.end()));
    }
    long l_total = 0;
    for (std::size_t d = 0; d < l.chains.size(); ++d) {
        l_total += static_cast<long>(l.chains[d].size());
        for (const auto& ch : l.chains[d])
            if (!union_chains.count({static_cast<int>(d), ch})) {
                cover_ok = false;
                cover_detail = "'" + chain_label(pc.poset, ch) + "' missing from every L^v(T)";
            }
    }
    if (static_cast<long>(union_chains.size()) != l_total) cover_ok = false;
    // maximal simplices: chains that are no codimension-one face of another
    std::set<std::pair<int, std::vector<int>>> nonmaximal;
    for (std::size_t d = 1; d < l.chains.size(); ++d)
        for (const auto& ch : l.chains[d])
            for (std::size_t i = 0; i < ch.size(); ++i) {
                std::vector<int> face = ch;
                face.erase(face.begin() + static_cast<long>(i));
                nonmaximal.insert({static_cast<int>(d) - 1, face});
            }
    for (std::size_t d = 0; d < l.chains.size() && cover_ok; ++d)
        for (const auto& ch : l.chains[d]) {
            if (nonmaximal.count({static_cast<int>(d), ch})) continue;
            bool inside = false;
            for (const auto& sc : tops)
                if (sc.has_chain(static_cast<int>(d), ch)) {
                    inside = true;
                    break;
                }
            if (!inside) {
                cover_ok = false;
                cover_detail = "maximal simplex '" + chain_label(pc.poset, ch) +
                               "' lies in no L^v(T)";
            }
        }
    check.cover_ok = cover_ok;
    if (!cover_ok) check.detail = cover_detail;

    // (ii) cone witnesses for the leaf-vertex subsets
    const int k = static_cast<int>(lv.size());
    std::vector<std::pair<int, int>> subsets;  // (size, mask)
    for (int mask = 1; mask < (1 << k); ++mask)
        subsets.push_back({__builtin_popcount(static_cast<unsigned>(mask)), mask});
    std::sort(subsets.begin(), subsets.end());
    for (auto [size, mask] : subsets) {
        if (opt.max_cone_subset > 0 && size > opt.max_cone_subset) continue;
        std::vector<std::vector<int>> w;
        std::ostringstream name;
        name << '{';
        for (int i = 0; i < k; ++i)
            if (mask & (1 << i)) {
                if (w.size()) name << ',';
                name << block_to_string(pc.leaves, lv[i]);
                w.push_back(lv[i]);
            }
        name << '}';
        ConeWitness cw = cone_witness(pc, t, w);
        check.cone_ok.push_back({name.str(), cw.ok, cw.detail});
    }

    // (iii) reduced homology of L(T)
    check.homology = homology(l.complex, Ring::integers, true);
    check.homology_zero = check.homology.is_zero();

    // (iv) the slice in the subdivision model has the homology of L(T)
    HomologyResult slice_h = homology(order_complex(sd_slice_poset(pc, l)), Ring::integers, true);
    check.slice_match = same_homology(slice_h, check.homology);

    check.pass = check.cover_ok && check.homology_zero && check.slice_match &&
                 std::all_of(check.cone_ok.begin(), check.cone_ok.end(),
                             [](const ConeSubsetCheck& c) { return c.ok; });
    return check;
}

struct TheoremReport {
    int n = 0;
    bool vacuous = false;
    bool pass = false;
    std::vector<TreeCheck> items;
};

// Runs the slice-contractibility verification for every tree of T+(A):
// cover, cone witnesses, vanishing reduced homology of L(T), and the
// subdivision-model slice comparison.
inline TheoremReport verify_theorem(const LeafSet& a, const VerifyOptions& opt = {}) {
    TheoremReport rep;
    rep.n = a.size();
    if (a.size() < 2) fail("TooSmall", "the campaign needs at least two leaves");
    if (a.size() == 2) {
        // NP(A) and T+(A) are both empty
        rep.vacuous = true;
        rep.pass = true;
        return rep;
    }
    PartitionComplex pc = build_partition_complex(a);
    TreePosetResult tp = enumerate_trees(a, false);
    std::vector<const Tree*> todo;
    for (const auto& t : tp.trees) {
        if (!opt.start_after.empty() && t.to_string(a) <= opt.start_after) continue;
        todo.push_back(&t);
    }
    rep.items.resize(todo.size());
    parallel_for(static_cast<int>(todo.size()), opt.jobs, [&](int i) {
        const bool fault = (opt.inject_fault_item == i);
        try {
            rep.items[i] = verify_tree(pc, *todo[i], opt, fault);
        } catch (const DomainError& e) {
            TreeCheck bad;
            bad.tree = todo[i]->to_string(a);
            bad.pass = false;
            bad.detail = e.what();
            rep.items[i] = std::move(bad);
        }
    });
    rep.pass = std::all_of(rep.items.begin(), rep.items.end(),
                           [](const TreeCheck& c) { return c.pass; });
    return rep;
}

// ---------------------------------------------------------------------------
// zeta and the homotopy-initiality models
// ---------------------------------------------------------------------------

inline Partition zeta(const Chain& c) { return c.top(); }

// The poset of nondegenerate simplices of NP(A) under the face relation: the
// subdivision model of the category of simplices.
inline Poset sd_poset(const PartitionComplex& pc, std::vector<std::vector<int>>* flat = nullptr) {
    std::vector<std::vector<int>> elems;
    std::vector<std::string> labels;
    for (std::size_t d = 0; d < pc.chains.size(); ++d)
        for (const auto& ch : pc.chains[d]) {
            labels.push_back("[" + chain_label(pc.poset, ch) + "]");
            elems.push_back(ch);
        }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> sorted(elems);
    for (auto& e : sorted) std::sort(e.begin(), e.end());
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            leq[i][j] = std::includes(sorted[j].begin(), sorted[j].end(), sorted[i].begin(),
                                      sorted[i].end());
    if (flat) *flat = std::move(elems);
    return Poset::from_leq_matrix(std::move(labels), std::move(leq));
}

struct PhiModel {
    Poset sd;      // chains of NP(A) under the face relation
    Poset tplus;   // T+(A)
    std::vector<Tree> trees;
    MonotoneMap map;  // chain -> phi(chain)
};

inline PhiModel phi_sd_model(const LeafSet& a) {
    PhiModel model;
    PartitionComplex pc = build_partition_complex(a);
    std::vector<std::vector<int>> flat;
    model.sd = sd_poset(pc, &flat);
    TreePosetResult tp = enumerate_trees(a, false);
    model.trees = tp.trees;
    model.tplus = tp.poset;
    std::map<std::string, int> tree_index;
    for (std::size_t i = 0; i < model.trees.size(); ++i)
        tree_index[model.trees[i].to_string(a)] = static_cast<int>(i);
    std::vector<int> assignment;
    for (const auto& ch : flat) {
        Tree t = phi_of_indices(pc, ch);
        auto it = tree_index.find(t.to_string(a));
        if (it == tree_index.end()) fail("Internal", "phi image missing from T+(A)");
        assignment.push_back(it->second);
    }
    model.map = MonotoneMap::build(model.sd, model.tplus, std::move(assignment));
    return model;
}

inline InitialityReport phi_initiality(const LeafSet& a) {
    return check_homotopy_initial(phi_sd_model(a).map);
}

// zeta in the subdivision model: a chain maps to its final (finest) element.
inline MonotoneMap zeta_sd_model(const LeafSet& a) {
    PartitionComplex pc = build_partition_complex(a);
    std::vector<std::vector<int>> flat;
    Poset sd = sd_poset(pc, &flat);
    std::vector<int> assignment;
    for (const auto& ch : flat) assignment.push_back(ch.back());
    return MonotoneMap::build(std::move(sd), pc.poset, std::move(assignment));
}

inline InitialityReport zeta_initiality(const LeafSet& a) {
    return check_homotopy_initial(zeta_sd_model(a));
}

}  // namespace partree
