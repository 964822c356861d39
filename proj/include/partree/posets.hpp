#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partree/errors.hpp"
#include "partree/simplicial.hpp"

// Finite posets and monotone maps, order complexes, slices, linear
// extensions, set-valued presheaves with their categories of elements, and
// the homotopy-initiality checker (contractibility of every slice, certified
// by vanishing reduced homology).

namespace partree {

// ---------------------------------------------------------------------------
// Posets
// ---------------------------------------------------------------------------

class Poset {
public:
    Poset() = default;

    // relation: pairs (i, j) meaning i <= j. The reflexive-transitive closure
    // is always taken; antisymmetry is validated.
    static Poset from_relation(std::vector<std::string> labels,
                               const std::vector<std::pair<int, int>>& relation) {
        Poset p;
        p.labels_ = std::move(labels);
        const int n = static_cast<int>(p.labels_.size());
        p.leq_.assign(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i) p.leq_[i][i] = true;
        for (auto [i, j] : relation) {
            if (i < 0 || i >= n || j < 0 || j >= n)
                fail("ElementNotFound", "relation index out of range");
            p.leq_[i][j] = true;
        }
        // Floyd-Warshall closure
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                if (!p.leq_[i][k]) continue;
                for (int j = 0; j < n; ++j)
                    if (p.leq_[k][j]) p.leq_[i][j] = true;
            }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (p.leq_[i][j] && p.leq_[j][i])
                    fail("NotAntisymmetric", "'" + p.labels_[i] + "' and '" + p.labels_[j] +
                                                 "' are comparable both ways");
        p.check_unique_labels();
        return p;
    }

    // leq already closed and valid; validates reflexivity, antisymmetry and
    // transitivity.
    static Poset from_leq_matrix(std::vector<std::string> labels,
                                 std::vector<std::vector<bool>> leq) {
        Poset p;
        p.labels_ = std::move(labels);
        p.leq_ = std::move(leq);
        const int n = static_cast<int>(p.labels_.size());
        if (static_cast<int>(p.leq_.size()) != n)
            fail("ShapeMismatch", "leq matrix size disagrees with labels");
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(p.leq_[i].size()) != n)
                fail("ShapeMismatch", "leq matrix is not square");
            if (!p.leq_[i][i]) fail("NotReflexive", "'" + p.labels_[i] + "'");
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i != j && p.leq_[i][j] && p.leq_[j][i])
                    fail("NotAntisymmetric",
                         "'" + p.labels_[i] + "' and '" + p.labels_[j] + "'");
                if (p.leq_[i][j])
                    for (int k = 0; k < n; ++k)
                        if (p.leq_[j][k] && !p.leq_[i][k])
                            fail("NotTransitive", "'" + p.labels_[i] + "' <= '" + p.labels_[j] +
                                                      "' <= '" + p.labels_[k] + "'");
            }
        p.check_unique_labels();
        return p;
    }

    int size() const { return static_cast<int>(labels_.size()); }
    bool leq(int i, int j) const { return leq_[i][j]; }
    bool lt(int i, int j) const { return i != j && leq_[i][j]; }
    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    int find(const std::string& label) const {
        for (int i = 0; i < size(); ++i)
            if (labels_[i] == label) return i;
        return -1;
    }

    // Induced subposet on the given (deduplicated, order-preserving) elements.
    Poset induced(const std::vector<int>& elements) const {
        Poset p;
        const int m = static_cast<int>(elements.size());
        p.labels_.reserve(m);
        for (int e : elements) {
            if (e < 0 || e >= size()) fail("ElementNotFound", "induced subposet index");
            p.labels_.push_back(labels_[e]);
        }
        p.leq_.assign(m, std::vector<bool>(m, false));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) p.leq_[a][b] = leq_[elements[a]][elements[b]];
        return p;
    }

    std::vector<int> minimal_elements() const {
        std::vector<int> out;
        for (int i = 0; i < size(); ++i) {
            bool minimal = true;
            for (int j = 0; j < size() && minimal; ++j)
                if (lt(j, i)) minimal = false;
            if (minimal) out.push_back(i);
        }
        return out;
    }

private:
    void check_unique_labels() const {
        std::set<std::string> seen;
        for (const auto& l : labels_)
            if (!seen.insert(l).second) fail("DuplicateLabel", "poset label '" + l + "'");
    }

    std::vector<std::string> labels_;
    std::vector<std::vector<bool>> leq_;
};

// ---------------------------------------------------------------------------
// Monotone maps and slices
// ---------------------------------------------------------------------------

struct MonotoneMap {
    Poset source;
    Poset target;
    std::vector<int> map;  // element assignment, indices into target

    static MonotoneMap build(Poset source, Poset target, std::vector<int> map) {
        MonotoneMap f{std::move(source), std::move(target), std::move(map)};
        if (static_cast<int>(f.map.size()) != f.source.size())
            fail("ShapeMismatch", "assignment size disagrees with source");
        for (int x : f.map)
            if (x < 0 || x >= f.target.size()) fail("ElementNotFound", "image out of range");
        for (int i = 0; i < f.source.size(); ++i)
            for (int j = 0; j < f.source.size(); ++j)
                if (f.source.leq(i, j) && !f.target.leq(f.map[i], f.map[j]))
                    fail("NotMonotone", "'" + f.source.label(i) + "' <= '" + f.source.label(j) +
                                            "' is not preserved");
        return f;
    }
};

// The induced subposet {p in source : f(p) <= q}. The chosen element indices
// are reported through `elements` when requested.
inline Poset slice(const MonotoneMap& f, int q, std::vector<int>* elements = nullptr) {
    if (q < 0 || q >= f.target.size()) fail("ElementNotFound", "slice object index");
    std::vector<int> keep;
    for (int i = 0; i < f.source.size(); ++i)
        if (f.target.leq(f.map[i], q)) keep.push_back(i);
    if (elements) *elements = keep;
    return f.source.induced(keep);
}

inline Poset slice(const MonotoneMap& f, const std::string& target_label,
                   std::vector<int>* elements = nullptr) {
    int q = f.target.find(target_label);
    if (q < 0) fail("ElementNotFound", "'" + target_label + "' not in the target poset");
    return slice(f, q, elements);
}

// ---------------------------------------------------------------------------
// Chains and order complexes
// ---------------------------------------------------------------------------

// All strictly increasing chains, grouped by length (chains[d] holds chains of
// d+1 elements). Deterministic: depth-first extension in element-index order.
inline std::vector<std::vector<std::vector<int>>> all_chains(const Poset& p) {
    std::vector<std::vector<std::vector<int>>> chains;
    std::vector<int> cur;
    std::function<void()> rec = [&]() {
        const int last = cur.back();
        for (int j = 0; j < p.size(); ++j) {
            if (!p.lt(last, j)) continue;
            cur.push_back(j);
            if (static_cast<int>(chains.size()) < static_cast<int>(cur.size()))
                chains.resize(cur.size());
            chains[cur.size() - 1].push_back(cur);
            rec();
            cur.pop_back();
        }
    };
    for (int i = 0; i < p.size(); ++i) {
        cur = {i};
        if (chains.empty()) chains.resize(1);
        chains[0].push_back(cur);
        rec();
    }
    if (p.size() == 0) chains.clear();
    return chains;
}

inline std::string chain_label(const Poset& p, const std::vector<int>& chain) {
    std::ostringstream os;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) os << " < ";
        os << p.label(chain[i]);
    }
    return os.str();
}

// The nerve: n-simplices are chains x_0 < ... < x_n, the i-th face deletes
// x_i.
inline SimplicialSet order_complex(const Poset& p) {
    auto chains = all_chains(p);
    std::vector<std::vector<Simplex>> cells(chains.size());
    std::vector<std::map<std::vector<int>, int>> ids(chains.size());
    for (std::size_t d = 0; d < chains.size(); ++d)
        for (std::size_t i = 0; i < chains[d].size(); ++i)
            ids[d][chains[d][i]] = static_cast<int>(i);
    for (std::size_t d = 0; d < chains.size(); ++d) {
        cells[d].reserve(chains[d].size());
        for (const auto& ch : chains[d]) {
            Simplex s;
            s.label = chain_label(p, ch);
            if (d > 0) {
                for (std::size_t k = 0; k <= d; ++k) {
                    std::vector<int> face = ch;
                    face.erase(face.begin() + static_cast<long>(k));
                    s.faces.push_back({ids[d - 1].at(face), false});
                }
            }
            cells[d].push_back(std::move(s));
        }
    }
    return SimplicialSet::build(std::move(cells));
}

// ---------------------------------------------------------------------------
// Linear extensions
// ---------------------------------------------------------------------------

// All total orders extending the poset, enumerated deterministically
// (smallest eligible element index first at every choice point).
inline std::vector<std::vector<int>> linear_extensions(const Poset& p) {
    const int n = p.size();
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<bool> used(n, false);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == n) {
            out.push_back(cur);
            return;
        }
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            bool ready = true;
            for (int j = 0; j < n && ready; ++j)
                if (!used[j] && p.lt(j, i)) ready = false;
            if (!ready) continue;
            used[i] = true;
            cur.push_back(i);
            rec();
            cur.pop_back();
            used[i] = false;
        }
    };
    rec();
    return out;
}

// ---------------------------------------------------------------------------
// Presheaves and categories of elements
// ---------------------------------------------------------------------------

// A finite set-valued presheaf on a poset: a set F(p) per element and a
// restriction F(q) -> F(p) for every p <= q.
struct Presheaf {
    std::vector<std::vector<std::string>> sets;                  // sets[p] = labels of F(p)
    std::map<std::pair<int, int>, std::vector<int>> restriction;  // (p, q), p <= q: F(q) -> F(p)

    const std::vector<int>& restr(int p, int q) const {
        auto it = restriction.find({p, q});
        if (it == restriction.end())
            fail("ElementNotFound",
                 "missing restriction for pair (" + std::to_string(p) + ", " + std::to_string(q) + ")");
        return it->second;
    }

    void validate(const Poset& base) const {
        if (static_cast<int>(sets.size()) != base.size())
            fail("ShapeMismatch", "presheaf sets disagree with base poset");
        for (int p = 0; p < base.size(); ++p)
            for (int q = 0; q < base.size(); ++q) {
                if (!base.leq(p, q)) continue;
                const auto& r = restr(p, q);
                if (static_cast<int>(r.size()) != static_cast<int>(sets[q].size()))
                    fail("ShapeMismatch", "restriction domain size mismatch");
                for (int v : r)
                    if (v < 0 || v >= static_cast<int>(sets[p].size()))
                        fail("ElementNotFound", "restriction image out of range");
                if (p == q)
                    for (std::size_t i = 0; i < r.size(); ++i)
                        if (r[i] != static_cast<int>(i))
                            fail("NotFunctorial", "identity relation does not restrict by identity");
            }
        // composition p <= q <= r
        for (int p = 0; p < base.size(); ++p)
            for (int q = 0; q < base.size(); ++q) {
                if (!base.leq(p, q)) continue;
                for (int r = 0; r < base.size(); ++r) {
                    if (!base.leq(q, r)) continue;
                    const auto& qr = restr(q, r);
                    const auto& pq = restr(p, q);
                    const auto& pr = restr(p, r);
                    for (std::size_t x = 0; x < qr.size(); ++x)
                        if (pq[qr[x]] != pr[x])
                            fail("NotFunctorial", "restrictions do not compose at (" +
                                                      std::to_string(p) + ", " + std::to_string(q) +
                                                      ", " + std::to_string(r) + ")");
                }
            }
    }

    static Presheaf constant(const Poset& base, const std::vector<std::string>& value) {
        Presheaf f;
        f.sets.assign(base.size(), value);
        std::vector<int> id(value.size());
        std::iota(id.begin(), id.end(), 0);
        for (int p = 0; p < base.size(); ++p)
            for (int q = 0; q < base.size(); ++q)
                if (base.leq(p, q)) f.restriction[{p, q}] = id;
        return f;
    }
};

struct ElementsPoset {
    Poset poset;                                // elements (p, x), x in F(p)
    std::vector<std::pair<int, int>> elements;  // (base index, fiber index)
    MonotoneMap projection;                     // to the base poset
};

// (p, x) <= (q, y) iff p <= q and y restricts to x.
inline ElementsPoset elements_poset(const Poset& base, const Presheaf& f) {
    f.validate(base);
    ElementsPoset out;
    std::vector<std::string> labels;
    for (int p = 0; p < base.size(); ++p)
        for (int x = 0; x < static_cast<int>(f.sets[p].size()); ++x) {
            out.elements.emplace_back(p, x);
            labels.push_back(base.label(p) + " @ " + f.sets[p][x]);
        }
    const int n = static_cast<int>(out.elements.size());
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto [p, x] = out.elements[a];
            auto [q, y] = out.elements[b];
            if (!base.leq(p, q)) continue;
            leq[a][b] = (f.restr(p, q)[y] == x);
        }
    out.poset = Poset::from_leq_matrix(std::move(labels), std::move(leq));
    std::vector<int> proj(n);
    for (int a = 0; a < n; ++a) proj[a] = out.elements[a].first;
    out.projection = MonotoneMap::build(out.poset, base, std::move(proj));
    return out;
}

// ---------------------------------------------------------------------------
// Homotopy initiality
// ---------------------------------------------------------------------------

struct SliceReport {
    std::string object;  // label of the target object
    bool nonempty = false;
    bool contractible = false;  // reduced homology vanishes through the slice dimension
    std::string homology;

    bool ok() const { return nonempty && contractible; }
};

struct InitialityReport {
    bool pass = false;
    bool homology_match = false;  // H(order_complex(source)) == H(order_complex(target))
    HomologyResult source_homology;
    HomologyResult target_homology;
    std::vector<SliceReport> slices;
    std::string detail;
};

// For each object q of the target: the slice {p : f(p) <= q} must be nonempty
// with vanishing reduced integral homology. On top of the slice conditions the
// report records the induced homology comparison of the two order complexes
// (a consequence check; they must agree whenever the slices all pass).
inline InitialityReport check_homotopy_initial(const MonotoneMap& f) {
    InitialityReport rep;
    rep.pass = true;
    for (int q = 0; q < f.target.size(); ++q) {
        SliceReport sr;
        sr.object = f.target.label(q);
        Poset s = slice(f, q);
        sr.nonempty = s.size() > 0;
        if (sr.nonempty) {
            HomologyResult h = homology(order_complex(s), Ring::integers, true);
            sr.contractible = h.is_zero();
            sr.homology = h.to_string();
        } else {
            sr.homology = "empty slice";
        }
        if (!sr.ok()) rep.pass = false;
        rep.slices.push_back(std::move(sr));
    }
    rep.source_homology = homology(order_complex(f.source), Ring::integers, true);
    rep.target_homology = homology(order_complex(f.target), Ring::integers, true);
    rep.homology_match = same_homology(rep.source_homology, rep.target_homology);
    if (rep.pass && !rep.homology_match) {
        // A passing initiality check forces equal homology; disagreement here
        // indicates an engine bug, so surface it loudly.
        rep.pass = false;
        rep.detail = "slices pass but source/target homology disagree";
    }
    return rep;
}

}  // namespace partree
