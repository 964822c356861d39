#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "partree/errors.hpp"
#include "partree/smith.hpp"

// Finite simplicial sets stored by their nondegenerate simplices, with face
// maps resolved to (index, degenerate) pairs. Cones, normalized chain
// complexes over Z or Q, homology via Smith normal form, and algebraic
// mapping cones live here.

namespace partree {

// ---------------------------------------------------------------------------
// Simplicial sets
// ---------------------------------------------------------------------------

struct FaceRef {
    int index = -1;
    bool degenerate = false;  // retained for generality; false throughout this code base

    bool operator==(const FaceRef& o) const {
        return index == o.index && degenerate == o.degenerate;
    }
};

struct Simplex {
    std::string label;           // unique within its dimension
    std::vector<FaceRef> faces;  // d_0 .. d_n for an n-simplex (empty when n = 0)
};

class SimplicialSet {
public:
    SimplicialSet() = default;

    // Validates face ranges and the simplicial identities
    // d_i d_j = d_{j-1} d_i (i < j) on every stored simplex.
    static SimplicialSet build(std::vector<std::vector<Simplex>> cells) {
        SimplicialSet x;
        x.cells_ = std::move(cells);
        while (!x.cells_.empty() && x.cells_.back().empty()) x.cells_.pop_back();
        x.index_.resize(x.cells_.size());
        for (std::size_t d = 0; d < x.cells_.size(); ++d) {
            const int below = d == 0 ? 0 : static_cast<int>(x.cells_[d - 1].size());
            for (std::size_t i = 0; i < x.cells_[d].size(); ++i) {
                const Simplex& s = x.cells_[d][i];
                if (!x.index_[d].emplace(s.label, static_cast<int>(i)).second)
                    fail("DuplicateLabel",
                         "dimension " + std::to_string(d) + " label '" + s.label + "'");
                if (d == 0) {
                    if (!s.faces.empty())
                        fail("DanglingFace", "0-simplex '" + s.label + "' carries faces");
                    continue;
                }
                if (s.faces.size() != d + 1)
                    fail("DanglingFace", "simplex '" + s.label + "' of dimension " +
                                             std::to_string(d) + " must have " +
                                             std::to_string(d + 1) + " faces");
                for (const FaceRef& f : s.faces)
                    if (f.index < 0 || f.index >= below)
                        fail("DanglingFace", "face of '" + s.label + "' out of range");
            }
        }
        x.check_identities();
        return x;
    }

    bool empty() const { return cells_.empty(); }
    int dimension() const { return static_cast<int>(cells_.size()) - 1; }
    int size(int dim) const {
        if (dim < 0 || dim > dimension()) return 0;
        return static_cast<int>(cells_[dim].size());
    }
    const Simplex& simplex(int dim, int i) const { return cells_[dim][i]; }

    int find(int dim, const std::string& label) const {
        if (dim < 0 || dim > dimension()) return -1;
        auto it = index_[dim].find(label);
        return it == index_[dim].end() ? -1 : it->second;
    }

    std::vector<long> f_vector() const {
        std::vector<long> f;
        for (const auto& layer : cells_) f.push_back(static_cast<long>(layer.size()));
        return f;
    }

    long euler_characteristic() const {
        long chi = 0;
        int sign = 1;
        for (const auto& layer : cells_) {
            chi += sign * static_cast<long>(layer.size());
            sign = -sign;
        }
        return chi;
    }

    long total_size() const {
        long n = 0;
        for (const auto& layer : cells_) n += static_cast<long>(layer.size());
        return n;
    }

private:
    void check_identities() const {
        for (std::size_t d = 2; d < cells_.size(); ++d) {
            for (const Simplex& s : cells_[d]) {
                for (std::size_t j = 1; j <= d; ++j)
                    for (std::size_t i = 0; i < j; ++i) {
                        const FaceRef& fj = s.faces[j];
                        const FaceRef& fi = s.faces[i];
                        if (fj.degenerate || fi.degenerate) continue;
                        // d_i d_j = d_{j-1} d_i
                        const FaceRef lhs = cells_[d - 1][fj.index].faces[i];
                        const FaceRef rhs = cells_[d - 1][fi.index].faces[j - 1];
                        if (!(lhs == rhs))
                            fail("IdentityViolation",
                                 "d_" + std::to_string(i) + " d_" + std::to_string(j) +
                                     " != d_" + std::to_string(j - 1) + " d_" +
                                     std::to_string(i) + " on '" + s.label + "'");
                    }
            }
        }
    }

    std::vector<std::vector<Simplex>> cells_;
    std::vector<std::unordered_map<std::string, int>> index_;
};

inline std::string vertex_subset_label(const std::vector<int>& verts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (i) os << '.';
        os << verts[i];
    }
    return os.str();
}

namespace detail {

inline void subsets_of_size(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v <= n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

// Nondegenerate part of Delta[n] (full = true) or its boundary (full = false):
// simplices are the nonempty vertex subsets of {0..n} of size <= top + 1.
inline SimplicialSet simplex_like(int n, bool full) {
    std::vector<std::vector<Simplex>> cells;
    std::map<std::vector<int>, int> below_ids;
    const int top = full ? n : n - 1;
    for (int d = 0; d <= top; ++d) {
        std::vector<std::vector<int>> subs;
        subsets_of_size(n, d + 1, subs);
        std::vector<Simplex> layer;
        std::map<std::vector<int>, int> ids;
        for (const auto& verts : subs) {
            Simplex s;
            s.label = vertex_subset_label(verts);
            if (d > 0) {
                for (int i = 0; i <= d; ++i) {
                    std::vector<int> face = verts;
                    face.erase(face.begin() + i);
                    s.faces.push_back({below_ids.at(face), false});
                }
            }
            ids[verts] = static_cast<int>(layer.size());
            layer.push_back(std::move(s));
        }
        below_ids = std::move(ids);
        cells.push_back(std::move(layer));
    }
    return SimplicialSet::build(std::move(cells));
}

}  // namespace detail

inline SimplicialSet standard_simplex(int n) { return detail::simplex_like(n, true); }
inline SimplicialSet boundary_simplex(int n) { return detail::simplex_like(n, false); }

// ---------------------------------------------------------------------------
// Simplicial maps
// ---------------------------------------------------------------------------

struct MapImage {
    int index = -1;
    bool degenerate = false;  // image is a degeneracy of a lower simplex
};

// A dimensionwise assignment of nondegenerate simplices. All maps built in
// this code base send nondegenerate simplices to nondegenerate ones of the
// same dimension; the degenerate flag is carried for completeness and any
// assignment using it is rejected by the validators below.
struct SimplicialMap {
    std::vector<std::vector<MapImage>> images;  // images[dim][simplex]

    MapImage image(int dim, int i) const { return images[dim][i]; }
};

// Checks that m is defined everywhere on x, lands in y and commutes with all
// face maps. Returns false with an explanation instead of throwing.
inline bool validate_simplicial_map(const SimplicialSet& x, const SimplicialSet& y,
                                    const SimplicialMap& m, std::string* why = nullptr) {
    auto failed = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (static_cast<int>(m.images.size()) < x.dimension() + 1)
        return failed("map not defined in all dimensions of the source");
    for (int d = 0; d <= x.dimension(); ++d) {
        if (static_cast<int>(m.images[d].size()) != x.size(d))
            return failed("map incomplete in dimension " + std::to_string(d));
        for (int i = 0; i < x.size(d); ++i) {
            const MapImage im = m.images[d][i];
            if (im.degenerate)
                return failed("degenerate image on '" + x.simplex(d, i).label +
                              "' (unsupported by this checker)");
            if (im.index < 0 || im.index >= y.size(d))
                return failed("image of '" + x.simplex(d, i).label + "' out of range");
        }
    }
    for (int d = 1; d <= x.dimension(); ++d) {
        for (int i = 0; i < x.size(d); ++i) {
            const Simplex& s = x.simplex(d, i);
            const Simplex& t = y.simplex(d, m.images[d][i].index);
            for (int k = 0; k <= d; ++k) {
                const FaceRef sf = s.faces[k];
                const FaceRef tf = t.faces[k];
                if (sf.degenerate || tf.degenerate)
                    return failed("degenerate face met under '" + s.label + "'");
                if (m.images[d - 1][sf.index].index != tf.index)
                    return failed("face map broken: d_" + std::to_string(k) + " of '" +
                                  s.label + "' maps to '" +
                                  y.simplex(d - 1, m.images[d - 1][sf.index].index).label +
                                  "' but d_" + std::to_string(k) + " of the image is '" +
                                  y.simplex(d - 1, tf.index).label + "'");
            }
        }
    }
    if (why) why->clear();
    return true;
}

struct IsoCheckResult {
    bool ok = false;
    std::string detail;  // counterexample description when !ok
};

// True iff m is dimensionwise bijective on nondegenerate simplices and
// commutes with all faces.
inline IsoCheckResult check_simplicial_iso(const SimplicialSet& x, const SimplicialSet& y,
                                           const SimplicialMap& m) {
    IsoCheckResult res;
    if (x.dimension() != y.dimension()) {
        res.detail = "dimension mismatch: " + std::to_string(x.dimension()) + " vs " +
                     std::to_string(y.dimension());
        return res;
    }
    std::string why;
    if (!validate_simplicial_map(x, y, m, &why)) {
        res.detail = why;
        return res;
    }
    for (int d = 0; d <= x.dimension(); ++d) {
        if (x.size(d) != y.size(d)) {
            res.detail = "cell counts differ in dimension " + std::to_string(d) + ": " +
                         std::to_string(x.size(d)) + " vs " + std::to_string(y.size(d));
            return res;
        }
        std::vector<char> hit(y.size(d), 0);
        for (int i = 0; i < x.size(d); ++i) {
            const int j = m.images[d][i].index;
            if (hit[j]) {
                res.detail = "not injective in dimension " + std::to_string(d) + " at '" +
                             x.simplex(d, i).label + "'";
                return res;
            }
            hit[j] = 1;
        }
    }
    res.ok = true;
    return res;
}

// ---------------------------------------------------------------------------
// Cone
// ---------------------------------------------------------------------------

struct ConeResult {
    SimplicialSet cone;       // X * Delta[0]
    SimplicialMap inclusion;  // X -> cone
    int apex_index = 0;       // index of the apex in dimension 0
};

// The cone with the apex joined on as the final vertex:
// nondegenerate n-simplices are the n-simplices of X, the cones on
// (n-1)-simplices of X, and (n = 0) the apex. Labels of cone simplices are
// "<base label>*<apex label>".
inline ConeResult cone(const SimplicialSet& x, const std::string& apex_label = "*") {
    ConeResult out;
    const int xd = x.dimension();
    std::vector<std::vector<Simplex>> cells(std::max(xd + 2, 1));

    // dimension 0: vertices of X, then the apex
    for (int i = 0; i < x.size(0); ++i) cells[0].push_back({x.simplex(0, i).label, {}});
    const int apex = static_cast<int>(cells[0].size());
    cells[0].push_back({apex_label, {}});
    out.apex_index = apex;

    for (int d = 1; d <= xd + 1; ++d) {
        // base simplices first (indices preserved), then cones on (d-1)-cells
        for (int i = 0; i < x.size(d); ++i) cells[d].push_back(x.simplex(d, i));
        const int offset_below = x.size(d - 1);  // cone cells start here in dim d-1... see below
        for (int i = 0; i < x.size(d - 1); ++i) {
            const Simplex& base = x.simplex(d - 1, i);
            if (std::any_of(base.faces.begin(), base.faces.end(),
                            [](const FaceRef& f) { return f.degenerate; }))
                fail("DegenerateFace", "cone over complexes with degenerate faces is unsupported");
            Simplex s;
            s.label = base.label + "*" + apex_label;
            if (d == 1) {
                // cone on a vertex: d_0 = apex, d_1 = the vertex
                s.faces.push_back({apex, false});
                s.faces.push_back({i, false});
            } else {
                for (int k = 0; k <= d - 1; ++k)
                    s.faces.push_back({offset_below + base.faces[k].index, false});
                s.faces.push_back({i, false});
            }
            cells[d].push_back(std::move(s));
        }
    }

    out.cone = SimplicialSet::build(std::move(cells));

    out.inclusion.images.resize(xd + 1 < 0 ? 0 : xd + 1);
    for (int d = 0; d <= xd; ++d) {
        out.inclusion.images[d].resize(x.size(d));
        for (int i = 0; i < x.size(d); ++i) out.inclusion.images[d][i] = {i, false};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chain complexes and homology
// ---------------------------------------------------------------------------

enum class Ring { integers, rationals };

struct ChainComplex {
    Ring ring = Ring::integers;
    bool reduced = false;
    std::vector<long> dims;                   // dims[d] = rank of the degree-d module
    std::vector<smith::SparseMat> boundary;   // boundary[d]: degree d -> d-1 (d >= 1)

    int top_degree() const { return static_cast<int>(dims.size()) - 1; }

    long dim(int d) const {
        if (d < 0 || d > top_degree()) return 0;
        return dims[d];
    }

    bool empty() const {
        for (long n : dims)
            if (n != 0) return false;
        return true;
    }

    // del o del = 0; throws NotAComplex otherwise.
    void validate() const {
        for (std::size_t d = 2; d < boundary.size(); ++d) {
            if (boundary[d].is_zero() || boundary[d - 1].is_zero()) continue;
            if (!smith::mul(boundary[d - 1], boundary[d]).is_zero())
                fail("NotAComplex", "boundary squared nonzero between degrees " +
                                        std::to_string(d) + " and " + std::to_string(d - 2));
        }
    }
};

// Normalized chains: basis in degree n = nondegenerate n-simplices, boundary
// sum of (-1)^i d_i with degenerate faces contributing zero. When reduced,
// callers obtain reduced homology (the augmentation is accounted for in
// homology() below).
inline ChainComplex normalized_chain_complex(const SimplicialSet& x, Ring ring = Ring::integers,
                                             bool reduced = false) {
    ChainComplex c;
    c.ring = ring;
    c.reduced = reduced;
    const int d_top = x.dimension();
    if (d_top < 0) return c;  // empty complex
    c.dims.resize(d_top + 1);
    c.boundary.resize(d_top + 1);
    for (int d = 0; d <= d_top; ++d) c.dims[d] = x.size(d);
    for (int d = 1; d <= d_top; ++d) {
        smith::SparseMat b(x.size(d - 1), x.size(d));
        for (int i = 0; i < x.size(d); ++i) {
            const Simplex& s = x.simplex(d, i);
            for (int k = 0; k <= d; ++k) {
                if (s.faces[k].degenerate) continue;
                b.add(s.faces[k].index, i, (k % 2 == 0) ? 1 : -1);
            }
        }
        c.boundary[d] = std::move(b);
    }
    c.validate();
    return c;
}

struct DegreeHomology {
    long betti = 0;
    std::vector<smith::Int> torsion;  // invariant factors > 1, each dividing the next

    bool operator==(const DegreeHomology& o) const {
        return betti == o.betti && torsion == o.torsion;
    }
    bool is_zero() const { return betti == 0 && torsion.empty(); }
};

struct HomologyResult {
    Ring ring = Ring::integers;
    bool reduced = false;
    bool empty_complex = false;
    std::vector<DegreeHomology> degrees;  // degrees 0..top

    bool is_zero() const {
        if (empty_complex) return false;  // callers special-case the empty complex
        for (const auto& h : degrees)
            if (!h.is_zero()) return false;
        return true;
    }

    long betti(int d) const {
        if (d < 0 || d >= static_cast<int>(degrees.size())) return 0;
        return degrees[d].betti;
    }

    bool has_torsion() const {
        for (const auto& h : degrees)
            if (!h.torsion.empty()) return true;
        return false;
    }

    std::string to_string() const {
        if (empty_complex) return "empty complex";
        const char* base = ring == Ring::integers ? "Z" : "Q";
        std::ostringstream os;
        bool first = true;
        for (std::size_t d = 0; d < degrees.size(); ++d) {
            if (degrees[d].is_zero()) continue;
            if (!first) os << ", ";
            first = false;
            os << (reduced ? "~H_" : "H_") << d << " = ";
            if (degrees[d].betti > 0) {
                os << base;
                if (degrees[d].betti > 1) os << "^" << degrees[d].betti;
            }
            bool sep = degrees[d].betti > 0;
            for (const auto& t : degrees[d].torsion) {
                if (sep) os << " + ";
                sep = true;
                os << "Z/" << t;
            }
        }
        if (first) os << "0";
        return os.str();
    }
};

inline bool same_homology(const HomologyResult& a, const HomologyResult& b) {
    if (a.empty_complex != b.empty_complex) return false;
    if (a.empty_complex) return true;
    const std::size_t n = std::max(a.degrees.size(), b.degrees.size());
    for (std::size_t d = 0; d < n; ++d) {
        DegreeHomology x = d < a.degrees.size() ? a.degrees[d] : DegreeHomology{};
        DegreeHomology y = d < b.degrees.size() ? b.degrees[d] : DegreeHomology{};
        if (!(x == y)) return false;
    }
    return true;
}

// Betti numbers and torsion per degree from ranks and invariant factors of the
// boundary matrices, over exact arithmetic. For reduced complexes the
// augmentation C_0 -> ring is appended in degree -1 (the nonempty complex has
// ~H_{-1} = 0, which is not reported).
inline HomologyResult homology(const ChainComplex& c) {
    c.validate();
    HomologyResult out;
    out.ring = c.ring;
    out.reduced = c.reduced;
    if (c.empty()) {
        out.empty_complex = true;
        return out;
    }
    const int top = c.top_degree();

    std::vector<int> rank(top + 2, 0);             // rank[d] = rank of boundary d -> d-1
    std::vector<std::vector<smith::Int>> factors(top + 2);
    for (int d = 1; d <= top; ++d) {
        if (c.dims[d] == 0 || c.dims[d - 1] == 0) continue;
        if (c.ring == Ring::integers) {
            auto snf = smith::invariant_factors(c.boundary[d]);
            rank[d] = snf.rank;
            factors[d] = std::move(snf.factors);
        } else {
            rank[d] = smith::rank_over_rationals(c.boundary[d]);
        }
    }
    int aug_rank = 0;
    if (c.reduced && c.dims[0] > 0) aug_rank = 1;  // the all-ones row has rank 1

    out.degrees.resize(top + 1);
    for (int d = 0; d <= top; ++d) {
        const int lower = d == 0 ? aug_rank : rank[d];
        out.degrees[d].betti = c.dims[d] - lower - rank[d + 1];
        if (c.ring == Ring::integers && d + 1 <= top)
            for (const auto& f : factors[d + 1])
                if (f > 1) out.degrees[d].torsion.push_back(f);
    }
    return out;
}

inline HomologyResult homology(const SimplicialSet& x, Ring ring = Ring::integers,
                               bool reduced = true) {
    return homology(normalized_chain_complex(x, ring, reduced));
}

// ---------------------------------------------------------------------------
// Chain maps and mapping cones
// ---------------------------------------------------------------------------

struct ChainMap {
    std::vector<smith::SparseMat> maps;  // maps[d]: C_d -> D_d (rows = dim D_d)
};

inline bool is_chain_map(const ChainComplex& c, const ChainComplex& d, const ChainMap& f,
                         std::string* why = nullptr) {
    const int top = c.top_degree();
    if (static_cast<int>(f.maps.size()) < top + 1) {
        if (why) *why = "chain map not defined in all degrees";
        return false;
    }
    for (int n = 1; n <= top; ++n) {
        // f_{n-1} del_n = del_n f_n
        smith::SparseMat lhs = smith::mul(f.maps[n - 1], c.boundary[n]);
        smith::SparseMat rhs(lhs.rows, lhs.cols);
        if (n <= d.top_degree() && d.dims[n] > 0 && d.dims[n - 1] > 0)
            rhs = smith::mul(d.boundary[n], f.maps[n]);
        if (!(lhs.to_dense() == rhs.to_dense())) {
            if (why) *why = "does not commute with boundaries in degree " + std::to_string(n);
            return false;
        }
    }
    if (why) why->clear();
    return true;
}

// Cone(f)_n = C_{n-1} (+) D_n with d(c, d) = (-d c, d d - f c). Homology of
// the cone computes relative homology H(D, C) when f is an inclusion.
inline ChainComplex mapping_cone(const ChainComplex& c, const ChainComplex& d, const ChainMap& f) {
    if (c.ring != d.ring) fail("RingMismatch", "chain map between different rings");
    std::string why;
    if (!is_chain_map(c, d, f, &why)) fail("NotChainMap", why);

    ChainComplex cone;
    cone.ring = c.ring;
    const int top = std::max(c.top_degree() + 1, d.top_degree());
    if (top < 0) return cone;
    cone.dims.assign(top + 1, 0);
    cone.boundary.resize(top + 1);
    for (int n = 0; n <= top; ++n) cone.dims[n] = (n >= 1 ? c.dim(n - 1) : 0) + d.dim(n);

    for (int n = 1; n <= top; ++n) {
        smith::SparseMat b(cone.dims[n - 1], cone.dims[n]);
        const long c_off_rows = 0;                      // C_{n-2} block rows
        const long d_off_rows = n >= 2 ? c.dim(n - 2) : 0;
        // columns: first C_{n-1} block, then D_n block
        if (n >= 2 && n - 1 <= c.top_degree() + 0 && c.dim(n - 1) > 0 && c.dim(n - 2) > 0)
            for (int r = 0; r < c.boundary[n - 1].rows; ++r)
                for (const auto& [col, v] : c.boundary[n - 1].row[r])
                    b.add(static_cast<int>(c_off_rows) + r, col, -v);
        if (n - 1 <= c.top_degree() && c.dim(n - 1) > 0 && d.dim(n - 1) > 0)
            for (int r = 0; r < f.maps[n - 1].rows; ++r)
                for (const auto& [col, v] : f.maps[n - 1].row[r])
                    b.add(static_cast<int>(d_off_rows) + r, col, -v);
        if (n <= d.top_degree() && d.dim(n) > 0 && d.dim(n - 1) > 0)
            for (int r = 0; r < d.boundary[n].rows; ++r)
                for (const auto& [col, v] : d.boundary[n].row[r])
                    b.add(static_cast<int>(d_off_rows) + r, static_cast<int>(c.dim(n - 1)) + col, v);
        cone.boundary[n] = std::move(b);
    }
    cone.validate();
    return cone;
}

inline HomologyResult mapping_cone_homology(const ChainComplex& c, const ChainComplex& d,
                                            const ChainMap& f) {
    return homology(mapping_cone(c, d, f));
}

// Chain map induced by a label-preserving inclusion of simplicial sets.
inline ChainMap chain_map_from_inclusion(const SimplicialSet& sub, const SimplicialSet& big) {
    ChainMap f;
    f.maps.resize(std::max(sub.dimension() + 1, 1));
    for (int d = 0; d <= sub.dimension(); ++d) {
        smith::SparseMat m(big.size(d), sub.size(d));
        for (int i = 0; i < sub.size(d); ++i) {
            const int j = big.find(d, sub.simplex(d, i).label);
            if (j < 0)
                fail("NotChainMap", "'" + sub.simplex(d, i).label + "' missing from the target");
            m.add(j, i, 1);
        }
        f.maps[d] = std::move(m);
    }
    return f;
}

// Degree shift by +1 (suspension): dims and boundaries move up one degree.
inline ChainComplex shift_up(const ChainComplex& c) {
    ChainComplex s;
    s.ring = c.ring;
    s.reduced = c.reduced;
    if (c.dims.empty()) return s;
    s.dims.assign(c.dims.size() + 1, 0);
    s.boundary.resize(c.dims.size() + 1);
    for (std::size_t d = 0; d < c.dims.size(); ++d) s.dims[d + 1] = c.dims[d];
    for (std::size_t d = 1; d < c.boundary.size(); ++d) s.boundary[d + 1] = c.boundary[d];
    s.boundary[1] = smith::SparseMat(0, static_cast<int>(s.dims[1]));
    return s;
}

}  // namespace partree
